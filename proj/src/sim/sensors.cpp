#include "ipr/sim/sensors.hpp"

#include <cmath>
#include <stdexcept>

#include "ipr/core/rng.hpp"
#include "ipr/sim/camera.hpp"

namespace ipr::sim {

void NoiseProfile::validate() const {
  for (const auto& n : per_class) {
    if (!std::isfinite(n.sigma_px) || n.sigma_px < 0.0)
      throw std::invalid_argument("NoiseProfile: sigma_px must be finite and >= 0");
    if (n.outlier_rate < 0.0 || n.outlier_rate > 0.9)
      throw std::invalid_argument("NoiseProfile: outlier_rate must be in [0, 0.9]");
    if (n.outlier_radius < 0.0)
      throw std::invalid_argument("NoiseProfile: outlier_radius must be >= 0");
  }
}

namespace {

ContextFeatures context_of(const Landmark& lm, const CameraIntrinsics& intr,
                           const Eigen::Vector2d& pixel, double depth) {
  return ContextFeatures::make(lm.region, lm.texture_freq, lm.brightness,
                               pixel.x() / intr.width, pixel.y() / intr.height, 1.0 / depth);
}

}  // namespace

std::vector<VisibleLandmark> visible_landmarks(const World& world, const ipr::Pose3& pose,
                                               const CameraIntrinsics& intr) {
  std::vector<VisibleLandmark> out;
  const ipr::Pose3 world_to_cam = pose.inverse();
  for (size_t i = 0; i < world.landmarks.size(); ++i) {
    const Landmark& lm = world.landmarks[i];
    const Eigen::Vector3d p = world_to_cam * lm.position;
    if (p.z() < kMinDepth) continue;
    const Eigen::Vector2d px(intr.fx * p.x() / p.z() + intr.cx,
                             intr.fy * p.y() / p.z() + intr.cy);
    if (!in_image(intr, px)) continue;
    VisibleLandmark v;
    v.landmark_id = static_cast<int>(i);
    v.pixel = px;
    v.depth = p.z();
    v.context = context_of(lm, intr, px, p.z());
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Observation> observe_features(const World& world, const ipr::Pose3& pose,
                                          const CameraIntrinsics& intr,
                                          const NoiseProfile& noise, uint64_t seed) {
  noise.validate();
  intr.validate();
  Rng rng(Rng::derive(seed, 0x6f6273));
  std::vector<Observation> out;
  for (const auto& v : visible_landmarks(world, pose, intr)) {
    const Landmark& lm = world.landmarks[v.landmark_id];
    const RegionNoise& rn = noise.for_class(lm.region);
    Observation obs;
    obs.landmark_id = v.landmark_id;
    obs.context = v.context;
    obs.scale_sigma = 1.0 + v.depth / 40.0;
    if (rng.uniform() < rn.outlier_rate) {
      // gross mismatch: uniform displacement inside the outlier radius
      const double r = rn.outlier_radius * std::sqrt(rng.uniform());
      const double a = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
      obs.pixel = v.pixel + r * Eigen::Vector2d(std::cos(a), std::sin(a));
    } else {
      obs.pixel = v.pixel + Eigen::Vector2d(rng.normal(0.0, rn.sigma_px),
                                            rng.normal(0.0, rn.sigma_px));
    }
    out.push_back(std::move(obs));
  }
  return out;
}

Eigen::MatrixXd supervisory_depth(const World& world, const ipr::Pose3& pose,
                                  const CameraIntrinsics& intr, double sigma_sup,
                                  uint64_t seed, double r_max, double disc_radius) {
  if (sigma_sup < 0.0) throw std::invalid_argument("supervisory_depth: sigma_sup >= 0");
  intr.validate();
  Eigen::MatrixXd depth = Eigen::MatrixXd::Constant(intr.height, intr.width, r_max);

  const ipr::Pose3 world_to_cam = pose.inverse();
  for (const auto& lm : world.landmarks) {
    const Eigen::Vector3d p = world_to_cam * lm.position;
    if (p.z() < kMinDepth || p.z() > r_max) continue;
    const double u0 = intr.fx * p.x() / p.z() + intr.cx;
    const double v0 = intr.fy * p.y() / p.z() + intr.cy;
    const double pix_radius = intr.fx * disc_radius / p.z();
    const int umin = std::max(0, static_cast<int>(std::floor(u0 - pix_radius)));
    const int umax = std::min(intr.width - 1, static_cast<int>(std::ceil(u0 + pix_radius)));
    const int vmin = std::max(0, static_cast<int>(std::floor(v0 - pix_radius)));
    const int vmax = std::min(intr.height - 1, static_cast<int>(std::ceil(v0 + pix_radius)));
    const double r2 = pix_radius * pix_radius;
    for (int v = vmin; v <= vmax; ++v) {
      for (int u = umin; u <= umax; ++u) {
        const double du = u - u0;
        const double dv = v - v0;
        if (du * du + dv * dv > r2) continue;
        if (p.z() < depth(v, u)) depth(v, u) = p.z();
      }
    }
  }

  if (sigma_sup > 0.0) {
    Rng rng(Rng::derive(seed, 0x737570));
    for (int v = 0; v < intr.height; ++v)
      for (int u = 0; u < intr.width; ++u)
        if (depth(v, u) < r_max) depth(v, u) += rng.normal(0.0, sigma_sup);
  }
  return depth;
}

}  // namespace ipr::sim
