#include "ipr/slam/ba.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

#include "ipr/sim/camera.hpp"
#include "ipr/slam/huber.hpp"
#include "ipr/slam/residual.hpp"

namespace ipr::slam {

void BAProblem::validate() const {
  if (poses.size() < 2) throw std::invalid_argument("BAProblem: >= 2 poses required");
  if (num_fixed_poses < 1 || num_fixed_poses >= static_cast<int>(poses.size()))
    throw std::invalid_argument("BAProblem: bad num_fixed_poses");
  for (const auto& t : tracks) {
    if (t.observations.size() < 2)
      throw std::invalid_argument("BAProblem: track with < 2 observations");
    for (const auto& o : t.observations) {
      if (o.frame_index < 0 || o.frame_index >= static_cast<int>(poses.size()))
        throw std::invalid_argument("BAProblem: observation frame out of range");
      if (!(o.scale_sigma > 0.0))
        throw std::invalid_argument("BAProblem: scale_sigma > 0 required");
      if (o.theta < 0.0) throw std::invalid_argument("BAProblem: theta >= 0 required");
    }
  }
}

void assign_thetas(std::vector<Track>& tracks, const introspect::IntrospectionModel& model,
                   double theta_max) {
  for (auto& t : tracks)
    for (auto& o : t.observations)
      o.theta = introspect::theta_from_cost(
          std::clamp(model.predict_cost(o.context), 0.0, 1.0), theta_max);
}

void assign_constant_theta(std::vector<Track>& tracks, double theta_max) {
  for (auto& t : tracks)
    for (auto& o : t.observations) o.theta = theta_max / 3.0;
}

namespace {

// Internal state: camera-from-world transforms plus point positions.
struct State {
  std::vector<Pose3> t_cw;
  std::vector<Eigen::Vector3d> points;
};

double evaluate_cost(const BAProblem& pb, const State& st, int* dropped) {
  double cost = 0.0;
  for (size_t k = 0; k < pb.tracks.size(); ++k) {
    for (const auto& obs : pb.tracks[k].observations) {
      const Eigen::Vector3d p = st.t_cw[obs.frame_index] * st.points[k];
      if (p.z() < sim::kMinDepth) {
        if (dropped) ++(*dropped);
        continue;
      }
      const double iz = 1.0 / p.z();
      const Eigen::Vector2d r =
          obs.pixel - Eigen::Vector2d(pb.intr.fx * p.x() * iz + pb.intr.cx,
                                      pb.intr.fy * p.y() * iz + pb.intr.cy);
      const double x = r.squaredNorm() / (obs.scale_sigma * obs.scale_sigma);
      cost += huber_eval(x, obs.theta).rho;
    }
  }
  return cost;
}

}  // namespace

BAResult ba_solve(const BAProblem& pb) {
  pb.validate();
  const int n_poses = static_cast<int>(pb.poses.size());
  const int n_fixed = pb.num_fixed_poses;
  const int n_free = n_poses - n_fixed;
  const int n_tracks = static_cast<int>(pb.tracks.size());
  const int np = 6 * n_free;

  State st;
  st.t_cw.reserve(n_poses);
  for (const auto& p : pb.poses) st.t_cw.push_back(p.inverse());
  st.points.reserve(n_tracks);
  for (const auto& t : pb.tracks) st.points.push_back(t.map_point_estimate);

  BAResult res;
  res.dropped_residuals = 0;
  double cost = evaluate_cost(pb, st, &res.dropped_residuals);
  res.cost_history.push_back(cost);

  double lambda = pb.solver.lm_lambda0;
  bool converged = false;

  Eigen::MatrixXd h_pp(np, np);
  Eigen::VectorXd g_p(np);
  Eigen::MatrixXd h_pl(np, 3 * n_tracks);
  std::vector<Eigen::Matrix3d> h_ll(n_tracks);
  Eigen::VectorXd g_l(3 * n_tracks);

  int iter = 0;
  for (; iter < pb.solver.max_iters && !converged; ++iter) {
    h_pp.setZero();
    g_p.setZero();
    h_pl.setZero();
    g_l.setZero();
    for (auto& h : h_ll) h.setZero();

    for (int k = 0; k < n_tracks; ++k) {
      for (const auto& obs : pb.tracks[k].observations) {
        const int f = obs.frame_index;
        const Pose3 cam_pose = st.t_cw[f].inverse();
        const ReprojResidual rr =
            reprojection_residual(cam_pose, st.points[k], obs.pixel, pb.intr);
        if (rr.behind_camera) {
          ++res.dropped_residuals;
          continue;
        }
        const double inv_s2 = 1.0 / (obs.scale_sigma * obs.scale_sigma);
        const double x = rr.r.squaredNorm() * inv_s2;
        const double w = huber_eval(x, obs.theta).drho_dx * inv_s2;
        if (w == 0.0) continue;

        const int pi = f - n_fixed;  // pose variable index, < 0 if fixed
        if (pi >= 0) {
          h_pp.block<6, 6>(6 * pi, 6 * pi) += w * rr.j_pose.transpose() * rr.j_pose;
          g_p.segment<6>(6 * pi) += w * rr.j_pose.transpose() * rr.r;
          h_pl.block<6, 3>(6 * pi, 3 * k) += w * rr.j_pose.transpose() * rr.j_point;
        }
        h_ll[k] += w * rr.j_point.transpose() * rr.j_point;
        g_l.segment<3>(3 * k) += w * rr.j_point.transpose() * rr.r;
      }
    }

    if (g_p.lpNorm<Eigen::Infinity>() < pb.solver.tol_grad &&
        g_l.lpNorm<Eigen::Infinity>() < pb.solver.tol_grad) {
      converged = true;
      break;
    }

    bool accepted = false;
    for (int attempt = 0; attempt < 12 && !accepted; ++attempt) {
      // damp, invert point blocks, reduce to the pose system
      std::vector<Eigen::Matrix3d> h_ll_inv(n_tracks);
      bool ok = true;
      for (int k = 0; k < n_tracks; ++k) {
        Eigen::Matrix3d d = h_ll[k];
        d.diagonal() += lambda * h_ll[k].diagonal().cwiseMax(1e-12);
        const Eigen::LDLT<Eigen::Matrix3d> ldlt(d);
        if (ldlt.info() != Eigen::Success) {
          ok = false;
          break;
        }
        h_ll_inv[k] = ldlt.solve(Eigen::Matrix3d::Identity());
      }
      Eigen::VectorXd dp, dl(3 * n_tracks);
      if (ok) {
        Eigen::MatrixXd s = h_pp;
        s.diagonal() += lambda * h_pp.diagonal().cwiseMax(1e-12);
        Eigen::VectorXd rhs = -g_p;
        for (int k = 0; k < n_tracks; ++k) {
          const auto wk = h_pl.middleCols<3>(3 * k);
          s.noalias() -= wk * h_ll_inv[k] * wk.transpose();
          rhs.noalias() += wk * h_ll_inv[k] * g_l.segment<3>(3 * k);
        }
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(s);
        if (ldlt.info() != Eigen::Success) {
          ok = false;
        } else {
          dp = ldlt.solve(rhs);
          if (!dp.allFinite()) ok = false;
        }
        if (ok) {
          for (int k = 0; k < n_tracks; ++k) {
            dl.segment<3>(3 * k) = h_ll_inv[k] * (-g_l.segment<3>(3 * k) -
                                                  h_pl.middleCols<3>(3 * k).transpose() * dp);
          }
        }
      }
      if (!ok) {
        // rank-deficient normal equations: retry with stronger damping
        res.rank_warning = true;
        lambda *= 10.0;
        continue;
      }

      State cand = st;
      for (int i = 0; i < n_free; ++i) {
        const Eigen::Vector3d d_rho = dp.segment<3>(6 * i);
        const Eigen::Vector3d d_phi = dp.segment<3>(6 * i + 3);
        Pose3& t = cand.t_cw[n_fixed + i];
        t.translation += d_rho;
        t.rotation = (so3_exp(d_phi) * t.rotation).normalized();
      }
      for (int k = 0; k < n_tracks; ++k) cand.points[k] += dl.segment<3>(3 * k);

      const double cand_cost = evaluate_cost(pb, cand, nullptr);
      if (cand_cost <= cost) {
        const double step = std::max(dp.lpNorm<Eigen::Infinity>(),
                                     dl.lpNorm<Eigen::Infinity>());
        st = std::move(cand);
        cost = cand_cost;
        res.cost_history.push_back(cost);
        lambda = std::max(lambda * 0.4, 1e-12);
        accepted = true;
        if (step < pb.solver.tol_step) converged = true;
      } else {
        lambda *= 4.0;
        if (lambda > 1e12) break;
      }
    }
    if (!accepted) break;  // stalled; return best iterate, flagged below
  }

  res.iterations = iter;
  res.converged = converged;
  res.final_cost = cost;
  res.poses.reserve(n_poses);
  for (const auto& t : st.t_cw) res.poses.push_back(t.inverse());
  res.points = std::move(st.points);
  return res;
}

std::vector<int> frame_inlier_counts(const BAProblem& pb, const BAResult& result) {
  std::vector<int> counts(pb.poses.size(), 0);
  for (size_t k = 0; k < pb.tracks.size(); ++k) {
    for (const auto& obs : pb.tracks[k].observations) {
      const Pose3 t_cw = result.poses[obs.frame_index].inverse();
      const Eigen::Vector3d p = t_cw * result.points[k];
      if (p.z() < sim::kMinDepth) continue;
      const double iz = 1.0 / p.z();
      const Eigen::Vector2d r =
          obs.pixel - Eigen::Vector2d(pb.intr.fx * p.x() * iz + pb.intr.cx,
                                      pb.intr.fy * p.y() * iz + pb.intr.cy);
      const double x = r.squaredNorm() / (obs.scale_sigma * obs.scale_sigma);
      if (x <= obs.theta * obs.theta) ++counts[obs.frame_index];
    }
  }
  return counts;
}

std::vector<int> tracking_failures(const std::vector<int>& inlier_counts, int n_min) {
  std::vector<int> failures;
  for (size_t f = 0; f < inlier_counts.size(); ++f)
    if (inlier_counts[f] < n_min) failures.push_back(static_cast<int>(f));
  return failures;
}

}  // namespace ipr::slam
