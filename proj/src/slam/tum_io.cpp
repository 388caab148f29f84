#include "ipr/slam/tum_io.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ipr/core/io.hpp"

namespace ipr::slam {

std::string trajectory_to_tum(const sim::Trajectory& t) {
  std::ostringstream os;
  for (size_t i = 0; i < t.size(); ++i) {
    const auto& p = t.poses[i];
    os << fmt17(t.frame_ids[i] / t.frame_rate) << ' ' << fmt17(p.translation.x()) << ' '
       << fmt17(p.translation.y()) << ' ' << fmt17(p.translation.z()) << ' '
       << fmt17(p.rotation.x()) << ' ' << fmt17(p.rotation.y()) << ' '
       << fmt17(p.rotation.z()) << ' ' << fmt17(p.rotation.w()) << '\n';
  }
  return os.str();
}

sim::Trajectory trajectory_from_tum(const std::string& text, double frame_rate) {
  sim::Trajectory t;
  t.frame_rate = frame_rate;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double ts, tx, ty, tz, qx, qy, qz, qw;
    if (!(ls >> ts >> tx >> ty >> tz >> qx >> qy >> qz >> qw))
      throw std::invalid_argument("tum parse error: " + line);
    t.frame_ids.push_back(static_cast<int>(std::lround(ts * frame_rate)));
    Pose3 p;  // assign fields directly; renormalizing would perturb bits
    p.rotation = Eigen::Quaterniond(qw, qx, qy, qz);
    p.translation = Eigen::Vector3d(tx, ty, tz);
    t.poses.push_back(p);
  }
  return t;
}

}  // namespace ipr::slam
