#pragma once

#include <cmath>
#include <stdexcept>

namespace ipr::slam {

struct HuberEval {
  double rho = 0.0;      // loss value
  double drho_dx = 0.0;  // derivative w.r.t. the squared residual norm
};

// Huber loss on the squared weighted residual norm x:
//   rho(x) = x                       for x <= theta^2
//   rho(x) = 2 theta sqrt(x) - theta^2  for x > theta^2
// The switch at x = theta^2 makes value and derivative continuous (both
// branches give theta^2 and slope 1 there). theta = 0 saturates the loss:
// rho = 0 with zero derivative for x > 0.
inline HuberEval huber_eval(double x, double theta) {
  if (x < 0.0) throw std::invalid_argument("huber_eval: x >= 0 required");
  if (theta < 0.0) throw std::invalid_argument("huber_eval: theta >= 0 required");
  HuberEval e;
  if (x <= theta * theta) {
    e.rho = x;
    e.drho_dx = 1.0;
  } else {
    const double sx = std::sqrt(x);
    e.rho = 2.0 * theta * sx - theta * theta;
    e.drho_dx = theta / sx;
  }
  return e;
}

}  // namespace ipr::slam
