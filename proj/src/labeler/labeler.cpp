#include "ipr/labeler/labeler.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "ipr/core/rng.hpp"
#include "ipr/core/stats.hpp"
#include "ipr/sim/camera.hpp"

namespace ipr::labeler {

void PosteriorTrackState::validate() const {
  if (!(depth_posterior > 0.0))
    throw std::invalid_argument("PosteriorTrackState: depth > 0 required");
  if ((cov - cov.transpose()).norm() > 1e-9 || cov.determinant() <= 0.0 || cov(0, 0) <= 0.0)
    throw std::invalid_argument("PosteriorTrackState: covariance must be SPD");
}

bool chi2_gate(double mahalanobis_sq, const GateConfig& cfg) {
  if (mahalanobis_sq < 0.0) throw std::invalid_argument("chi2_gate: d^2 >= 0 required");
  if (!(cfg.alpha_sig > 0.0 && cfg.alpha_sig < 1.0))
    throw std::invalid_argument("chi2_gate: alpha_sig in (0,1) required");
  return mahalanobis_sq <= chi2_quantile(1.0 - cfg.alpha_sig, cfg.dof);
}

std::optional<ErrorSample> label_cross_sensor(const Eigen::VectorXd& primary_estimate,
                                              const Eigen::VectorXd& supervisory_estimate,
                                              const ContextFeatures& context, int frame_id,
                                              std::optional<double> sentinel) {
  if (sentinel) {
    bool all_sentinel = supervisory_estimate.size() > 0;
    for (int i = 0; i < supervisory_estimate.size(); ++i)
      all_sentinel = all_sentinel && supervisory_estimate(i) >= *sentinel;
    if (all_sentinel) return std::nullopt;  // no supervisory reading
  }
  return ErrorSample::make(context, compose_error(primary_estimate, supervisory_estimate),
                           SampleSource::kCrossSensor, frame_id);
}

std::optional<ErrorSample> label_spatio_temporal(const Eigen::Vector2d& obs_now,
                                                 const PosteriorTrackState& posterior,
                                                 const Pose3& relpose_est,
                                                 const CameraIntrinsics& intr,
                                                 const ContextFeatures& context,
                                                 int frame_id) {
  posterior.validate();
  const Eigen::Vector3d p_prev =
      sim::unproject(intr, posterior.feature_pixel_posterior, posterior.depth_posterior);
  const Eigen::Vector3d p_now = relpose_est * p_prev;
  if (p_now.z() < sim::kMinDepth) return std::nullopt;
  const Eigen::Vector2d reproj(intr.fx * p_now.x() / p_now.z() + intr.cx,
                               intr.fy * p_now.y() / p_now.z() + intr.cy);
  return ErrorSample::make(context, Eigen::Vector2d(obs_now - reproj),
                           SampleSource::kSpatioTemporal, frame_id);
}

namespace {

Pose3 draw_pose_noise(const Pose3& p, double sigma_t, double sigma_r, Rng& rng) {
  const Eigen::Vector3d dt(rng.normal(0.0, sigma_t), rng.normal(0.0, sigma_t),
                           rng.normal(0.0, sigma_t));
  const Eigen::Vector3d dr(rng.normal(0.0, sigma_r), rng.normal(0.0, sigma_r),
                           rng.normal(0.0, sigma_r));
  return perturb_pose(p, dt, dr);
}

}  // namespace

std::vector<ErrorSample> collect_dataset(const sim::World& world,
                                         const sim::Trajectory& trajectory,
                                         const CollectConfig& cfg, uint64_t seed) {
  if (trajectory.size() < 2)
    throw std::invalid_argument("collect_dataset: trajectory needs >= 2 frames");
  cfg.intr.validate();
  cfg.noise.validate();

  std::vector<ErrorSample> out;
  const int n = static_cast<int>(trajectory.size());
  const int dt = std::max(1, cfg.delta_t);

  for (int t = 0; t < n; ++t) {
    Rng rng(Rng::derive(seed, 0x636f6c6c00 + static_cast<uint64_t>(t)));
    const Pose3& pose_now = trajectory.poses[t];
    const auto observations =
        sim::observe_features(world, pose_now, cfg.intr, cfg.noise,
                              Rng::derive(seed, 0x6f627300 + static_cast<uint64_t>(t)));
    const auto exact_now = sim::visible_landmarks(world, pose_now, cfg.intr);
    std::unordered_map<int, const sim::VisibleLandmark*> exact_by_id;
    for (const auto& v : exact_now) exact_by_id[v.landmark_id] = &v;

    // cross-sensor labels: the supervisory sensor pipeline provides an
    // accurate estimate of each feature location in the current image
    if (cfg.emit_cross_sensor) {
      for (const auto& obs : observations) {
        const auto it = exact_by_id.find(obs.landmark_id);
        if (it == exact_by_id.end()) continue;
        const Eigen::Vector2d sup =
            it->second->pixel + Eigen::Vector2d(rng.normal(0.0, cfg.sup_sigma_px),
                                                rng.normal(0.0, cfg.sup_sigma_px));
        auto s = label_cross_sensor(obs.pixel, sup, obs.context, trajectory.frame_ids[t]);
        if (s) out.push_back(std::move(*s));
      }
    }

    // spatio-temporal labels against the posterior state at t - dt
    if (!cfg.emit_spatio_temporal || t < dt) continue;
    const Pose3& pose_prev = trajectory.poses[t - dt];
    const Pose3 rel_gt = pose_now.inverse() * pose_prev;  // cam_{t-dt} -> cam_t
    const Pose3 rel_est = draw_pose_noise(rel_gt, cfg.vo_sigma_t, cfg.vo_sigma_r, rng);
    const Pose3 rel_sup = draw_pose_noise(rel_gt, cfg.sup_sigma_t, cfg.sup_sigma_r, rng);

    // gate the pose supervision; covariance is the (known) combined
    // perturbation covariance
    const Vector6d err = pose_error(rel_est, rel_sup);
    const double var_t = cfg.vo_sigma_t * cfg.vo_sigma_t + cfg.sup_sigma_t * cfg.sup_sigma_t;
    const double var_r = cfg.vo_sigma_r * cfg.vo_sigma_r + cfg.sup_sigma_r * cfg.sup_sigma_r;
    double d2 = 0.0;
    for (int i = 0; i < 3; ++i) d2 += err(i) * err(i) / var_t;
    for (int i = 3; i < 6; ++i) d2 += err(i) * err(i) / var_r;
    if (!chi2_gate(d2, cfg.gate)) continue;

    const auto exact_prev = sim::visible_landmarks(world, pose_prev, cfg.intr);
    std::unordered_map<int, const sim::VisibleLandmark*> prev_by_id;
    for (const auto& v : exact_prev) prev_by_id[v.landmark_id] = &v;

    for (const auto& obs : observations) {
      const auto it = prev_by_id.find(obs.landmark_id);
      if (it == prev_by_id.end()) continue;
      PosteriorTrackState posterior;
      posterior.feature_pixel_posterior =
          it->second->pixel + Eigen::Vector2d(rng.normal(0.0, cfg.posterior_sigma_px),
                                              rng.normal(0.0, cfg.posterior_sigma_px));
      posterior.depth_posterior = it->second->depth + rng.normal(0.0, cfg.posterior_sigma_m);
      if (posterior.depth_posterior <= 0.0) continue;
      posterior.cov = cfg.posterior_sigma_px * cfg.posterior_sigma_px *
                      Eigen::Matrix2d::Identity();
      auto s = label_spatio_temporal(obs.pixel, posterior, rel_est, cfg.intr, obs.context,
                                     trajectory.frame_ids[t]);
      if (s) out.push_back(std::move(*s));
    }
  }
  return out;
}

}  // namespace ipr::labeler
