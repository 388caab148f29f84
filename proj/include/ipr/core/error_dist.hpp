#pragma once

#include <variant>

namespace ipr {

// Density induced by a Huber loss with parameter theta:
//   p(x) = exp(-rho_theta(x^2) / 2) / Z(theta),
// Gaussian in the core |x| <= theta, Laplace-like tails outside. Z has a
// closed form, see huber_normalizer().
struct HuberDist {
  double theta = 1.0;
};

// Three-level piecewise density over (-r_max, r_max) for depth errors:
// theta_fp on (-r_max, -alpha), theta_t on [-alpha, alpha], theta_fn on
// (alpha, r_max). Must integrate to one.
struct PiecewiseDist {
  double theta_fp = 0.0;
  double theta_t = 0.0;
  double theta_fn = 0.0;
  double alpha = 1.0;
  double r_max = 10.0;
};

struct GaussianDist {
  double mean = 0.0;
  double sigma = 1.0;
};

using ParametricErrorDist = std::variant<HuberDist, PiecewiseDist, GaussianDist>;

// Throws std::invalid_argument if the variant violates its invariants
// (Huber theta > 0; Gaussian sigma > 0; Piecewise normalization within 1e-9).
void validate(const ParametricErrorDist& dist);

double huber_normalizer(double theta);

// Density at x. Piecewise throws std::domain_error when |x| >= r_max.
double dist_pdf(const ParametricErrorDist& dist, double x);

}  // namespace ipr
