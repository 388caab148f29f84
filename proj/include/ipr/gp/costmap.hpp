#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ipr/core/types.hpp"
#include "ipr/gp/gp_model.hpp"

namespace ipr::gp {

// Dense per-pixel predicted error magnitude in [0,1] plus a confidence mask
// (true where the GP posterior variance is below tau_var).
struct CostMap {
  Eigen::MatrixXd grid;                              // height x width, [0,1]
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask;  // same dims

  bool masked_in(const Eigen::Vector2d& pixel) const;
  double at(const Eigen::Vector2d& pixel) const;
};

// Evaluate the GP posterior of (pixel -> normalized error magnitude) on a
// stride-subsampled lattice, nearest-fill to full resolution, clamp to
// [0,1]. With no samples the grid is zero and the mask all false.
CostMap build_costmap(const std::vector<std::pair<Eigen::Vector2d, double>>& samples,
                      const CameraIntrinsics& intr, const GpKernel& kernel, int stride,
                      double tau_var);

// Portable dump: one CSV of grid rows and one of 0/1 mask rows.
std::string costmap_grid_csv(const CostMap& c);
std::string costmap_mask_csv(const CostMap& c);

}  // namespace ipr::gp
