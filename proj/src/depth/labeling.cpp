#include "ipr/depth/labeling.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ipr/core/io.hpp"

namespace ipr::depth {

FailureLabel classify_error(double error_m, double alpha, double true_depth, double r_max) {
  if (!(alpha > 0.0) || !(r_max > alpha))
    throw std::invalid_argument("classify_error: 0 < alpha < r_max required");
  if (std::fabs(error_m) >= r_max)
    throw std::domain_error("classify_error: error outside (-r_max, r_max)");
  if (error_m > alpha) return FailureLabel::kFN;   // estimated too far
  if (error_m < -alpha) return FailureLabel::kFP;  // estimated too close
  return true_depth <= r_max ? FailureLabel::kTP : FailureLabel::kTN;
}

std::vector<LabeledCell> label_depth_frame(const DepthFrame& frame, double alpha,
                                           double r_max) {
  std::vector<LabeledCell> out;
  for (const auto& cell : frame.cells) {
    if (!cell.valid_estimate || !cell.valid_reference) continue;
    const double err = cell.estimated - cell.reference;
    if (std::fabs(err) >= r_max) continue;  // out of distribution support
    LabeledCell lc;
    lc.context = cell.context;
    lc.error_m = err;
    lc.label = classify_error(err, alpha, cell.reference, r_max);
    lc.frame_id = frame.frame_id;
    out.push_back(std::move(lc));
  }
  return out;
}

std::vector<LabeledCell> labeled_cells_from_csv(const std::string& csv) {
  std::istringstream is(csv);
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("empty labeled-cell csv");
  int d = 0;
  for (size_t pos = 0; (pos = line.find(",ctx_", pos)) != std::string::npos; ++pos) ++d;
  if (d == 0) throw std::invalid_argument("labeled-cell csv lacks ctx columns");
  std::vector<LabeledCell> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        f.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    f.push_back(cur);
    if (static_cast<int>(f.size()) != d + 3)
      throw std::invalid_argument("labeled-cell csv column mismatch");
    LabeledCell lc;
    lc.frame_id = std::stoi(f[0]);
    Eigen::VectorXd ctx(d);
    for (int i = 0; i < d; ++i) ctx(i) = std::stod(f[1 + i]);
    lc.context = ContextFeatures(ctx);
    lc.error_m = std::stod(f[1 + d]);
    lc.label = failure_label_from_string(f[2 + d]);
    out.push_back(std::move(lc));
  }
  return out;
}

std::string labeled_cells_to_csv(const std::vector<LabeledCell>& cells) {
  std::ostringstream os;
  const int d = cells.empty() ? ContextFeatures::kDim : cells.front().context.dim();
  os << "frame_id";
  for (int i = 0; i < d; ++i) os << ",ctx_" << i;
  os << ",error_m,label\n";
  for (const auto& c : cells) {
    os << c.frame_id;
    for (int i = 0; i < d; ++i) os << ',' << fmt17(c.context.vec()(i));
    os << ',' << fmt17(c.error_m) << ',' << to_string(c.label) << '\n';
  }
  return os.str();
}

}  // namespace ipr::depth
