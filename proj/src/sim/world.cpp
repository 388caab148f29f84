#include "ipr/sim/world.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "ipr/core/rng.hpp"

namespace ipr::sim {

namespace {

// Class-conditional appearance attributes. Shadowed regions are dark,
// reflective regions mid-dark, high-frequency texture has high texture_freq.
void draw_attributes(RegionClass c, Rng& rng, double* texture, double* brightness) {
  switch (c) {
    case RegionClass::kClean:
      *texture = rng.uniform(0.05, 0.5);
      *brightness = rng.uniform(0.35, 0.95);
      break;
    case RegionClass::kShadow:
      *texture = rng.uniform(0.05, 0.5);
      *brightness = rng.uniform(0.02, 0.25);
      break;
    case RegionClass::kReflection:
      *texture = rng.uniform(0.1, 0.6);
      *brightness = rng.uniform(0.1, 0.55);
      break;
    case RegionClass::kTextureHigh:
      *texture = rng.uniform(0.65, 1.0);
      *brightness = rng.uniform(0.3, 0.9);
      break;
  }
}

RegionClass draw_class_mixed(const std::array<double, kNumRegionClasses>& mix, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (int c = 0; c < kNumRegionClasses; ++c) {
    acc += mix[c];
    if (u < acc) return static_cast<RegionClass>(c);
  }
  return RegionClass::kClean;
}

// Clustered assignment: each degraded class owns a window of the corridor
// (by normalized anchor position s); inside its window the class is drawn
// with a fixed density chosen so the global fractions still match the mix.
RegionClass draw_class_clustered(const std::array<double, kNumRegionClasses>& mix, double s,
                                 Rng& rng) {
  constexpr double kInWindowProb = 0.7;
  const std::array<double, kNumRegionClasses> window_start = {0.0, 0.15, 0.45, 0.78};
  for (int c = 1; c < kNumRegionClasses; ++c) {
    if (mix[c] <= 0.0) continue;
    const double width = std::min(0.95, mix[c] / kInWindowProb);
    if (s >= window_start[c] && s < window_start[c] + width && rng.uniform() < kInWindowProb)
      return static_cast<RegionClass>(c);
  }
  return RegionClass::kClean;
}

}  // namespace

World build_world(const WorldConfig& cfg, uint64_t seed) {
  if (cfg.n_landmarks < 1) throw std::invalid_argument("build_world: n_landmarks >= 1");
  double mix_sum = 0.0;
  for (double f : cfg.region_mix) {
    if (f < 0.0) throw std::invalid_argument("build_world: negative region fraction");
    mix_sum += f;
  }
  if (mix_sum <= 0.0) throw std::invalid_argument("build_world: empty region mix");
  if (std::fabs(mix_sum - 1.0) > 1e-6)
    throw std::invalid_argument("build_world: region mix must sum to 1");

  World w;
  w.seed = seed;
  w.landmarks.reserve(cfg.n_landmarks);
  Rng rng(Rng::derive(seed, 0x776f726c64));

  const size_t n_anchor = cfg.corridor_poses.size();
  for (int i = 0; i < cfg.n_landmarks; ++i) {
    Landmark lm;
    double s = rng.uniform();
    ipr::Pose3 anchor;  // identity when no corridor given
    if (n_anchor > 0) {
      const size_t idx = std::min(n_anchor - 1, static_cast<size_t>(s * n_anchor));
      anchor = cfg.corridor_poses[idx];
    }
    lm.region = cfg.cluster_degraded ? draw_class_clustered(cfg.region_mix, s, rng)
                                     : draw_class_mixed(cfg.region_mix, rng);
    draw_attributes(lm.region, rng, &lm.texture_freq, &lm.brightness);

    const int c = static_cast<int>(lm.region);
    const double dmin =
        cfg.class_depth_max[c] > 0.0 ? cfg.class_depth_min[c] : cfg.depth_min;
    const double dmax =
        cfg.class_depth_max[c] > 0.0 ? cfg.class_depth_max[c] : cfg.depth_max;
    const Eigen::Vector3d offset(rng.uniform(-cfg.lateral, cfg.lateral),
                                 rng.uniform(-cfg.vertical, cfg.vertical),
                                 rng.uniform(dmin, dmax));
    lm.position = anchor * offset;
    if (!lm.position.allFinite()) throw std::runtime_error("build_world: non-finite landmark");
    w.landmarks.push_back(lm);
  }
  return w;
}

namespace {

nlohmann::ordered_json pose_to_json(const ipr::Pose3& p) {
  return {{"qw", p.rotation.w()}, {"qx", p.rotation.x()}, {"qy", p.rotation.y()},
          {"qz", p.rotation.z()}, {"tx", p.translation.x()}, {"ty", p.translation.y()},
          {"tz", p.translation.z()}};
}

ipr::Pose3 pose_from_json(const nlohmann::json& j) {
  ipr::Pose3 p;  // direct assignment keeps the stored bits
  p.rotation = Eigen::Quaterniond(j.at("qw").get<double>(), j.at("qx").get<double>(),
                                  j.at("qy").get<double>(), j.at("qz").get<double>());
  p.translation = Eigen::Vector3d(j.at("tx").get<double>(), j.at("ty").get<double>(),
                                  j.at("tz").get<double>());
  return p;
}

}  // namespace

std::string world_to_json(const World& w) {
  nlohmann::ordered_json j;
  j["seed"] = w.seed;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& lm : w.landmarks) {
    arr.push_back({{"x", lm.position.x()},
                   {"y", lm.position.y()},
                   {"z", lm.position.z()},
                   {"region", to_string(lm.region)},
                   {"texture_freq", lm.texture_freq},
                   {"brightness", lm.brightness}});
  }
  j["landmarks"] = std::move(arr);
  return j.dump(2);
}

World world_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  World w;
  w.seed = j.at("seed").get<uint64_t>();
  for (const auto& l : j.at("landmarks")) {
    Landmark lm;
    lm.position = {l.at("x").get<double>(), l.at("y").get<double>(), l.at("z").get<double>()};
    lm.region = region_class_from_string(l.at("region"));
    lm.texture_freq = l.at("texture_freq").get<double>();
    lm.brightness = l.at("brightness").get<double>();
    w.landmarks.push_back(lm);
  }
  return w;
}

std::string trajectory_to_json(const Trajectory& t) {
  nlohmann::ordered_json j;
  j["frame_rate"] = t.frame_rate;
  auto arr = nlohmann::ordered_json::array();
  for (size_t i = 0; i < t.size(); ++i) {
    auto p = pose_to_json(t.poses[i]);
    p["frame_id"] = t.frame_ids[i];
    arr.push_back(std::move(p));
  }
  j["poses"] = std::move(arr);
  return j.dump(2);
}

Trajectory trajectory_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  Trajectory t;
  t.frame_rate = j.at("frame_rate").get<double>();
  for (const auto& p : j.at("poses")) {
    t.frame_ids.push_back(p.at("frame_id").get<int>());
    t.poses.push_back(pose_from_json(p));
  }
  t.validate();
  return t;
}

}  // namespace ipr::sim
