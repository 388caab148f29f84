#include "ipr/gp/costmap.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ipr/core/io.hpp"

namespace ipr::gp {

bool CostMap::masked_in(const Eigen::Vector2d& pixel) const {
  const int u = static_cast<int>(std::lround(pixel.x()));
  const int v = static_cast<int>(std::lround(pixel.y()));
  if (v < 0 || v >= mask.rows() || u < 0 || u >= mask.cols()) return false;
  return mask(v, u);
}

double CostMap::at(const Eigen::Vector2d& pixel) const {
  const int u = std::clamp(static_cast<int>(std::lround(pixel.x())), 0,
                           static_cast<int>(grid.cols()) - 1);
  const int v = std::clamp(static_cast<int>(std::lround(pixel.y())), 0,
                           static_cast<int>(grid.rows()) - 1);
  return grid(v, u);
}

CostMap build_costmap(const std::vector<std::pair<Eigen::Vector2d, double>>& samples,
                      const CameraIntrinsics& intr, const GpKernel& kernel, int stride,
                      double tau_var) {
  if (stride < 1) throw std::invalid_argument("build_costmap: stride >= 1 required");
  CostMap cm;
  cm.grid = Eigen::MatrixXd::Zero(intr.height, intr.width);
  cm.mask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(intr.height,
                                                                          intr.width, false);
  if (samples.empty()) return cm;

  std::vector<Eigen::Vector2d> xs;
  std::vector<double> ys;
  xs.reserve(samples.size());
  ys.reserve(samples.size());
  for (const auto& [px, c] : samples) {
    xs.push_back(px);
    ys.push_back(c);
  }
  const GpModel model = GpModel::fit(xs, ys, kernel);

  const int nu = (intr.width + stride - 1) / stride;
  const int nv = (intr.height + stride - 1) / stride;
  Eigen::MatrixXd lattice_mean(nv, nu);
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> lattice_mask(nv, nu);
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nu; ++i) {
      const Eigen::Vector2d q(std::min(intr.width - 1, i * stride),
                              std::min(intr.height - 1, j * stride));
      const GpPrediction p = model.predict(q);
      lattice_mean(j, i) = std::clamp(p.mean, 0.0, 1.0);
      lattice_mask(j, i) = p.var < tau_var;
    }
  }
  // nearest-fill: every pixel takes the value of its lattice cell
  for (int v = 0; v < intr.height; ++v) {
    const int j = std::min(nv - 1, (v + stride / 2) / stride);
    for (int u = 0; u < intr.width; ++u) {
      const int i = std::min(nu - 1, (u + stride / 2) / stride);
      cm.grid(v, u) = lattice_mean(j, i);
      cm.mask(v, u) = lattice_mask(j, i);
    }
  }
  return cm;
}

std::string costmap_grid_csv(const CostMap& c) {
  std::ostringstream os;
  for (int v = 0; v < c.grid.rows(); ++v) {
    for (int u = 0; u < c.grid.cols(); ++u) {
      if (u) os << ',';
      os << ipr::fmt17(c.grid(v, u));
    }
    os << '\n';
  }
  return os.str();
}

std::string costmap_mask_csv(const CostMap& c) {
  std::ostringstream os;
  for (int v = 0; v < c.mask.rows(); ++v) {
    for (int u = 0; u < c.mask.cols(); ++u) {
      if (u) os << ',';
      os << (c.mask(v, u) ? 1 : 0);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace ipr::gp
