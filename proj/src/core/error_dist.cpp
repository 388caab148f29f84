#include "ipr/core/error_dist.hpp"

#include <cmath>
#include <stdexcept>

#include "ipr/core/stats.hpp"

namespace ipr {

namespace {

struct ValidateVisitor {
  void operator()(const HuberDist& d) const {
    if (!(d.theta > 0.0)) throw std::invalid_argument("HuberDist: theta > 0 required");
  }
  void operator()(const PiecewiseDist& d) const {
    if (d.theta_fp < 0.0 || d.theta_t < 0.0 || d.theta_fn < 0.0)
      throw std::invalid_argument("PiecewiseDist: densities must be nonnegative");
    if (!(d.alpha > 0.0) || !(d.r_max > d.alpha))
      throw std::invalid_argument("PiecewiseDist: 0 < alpha < r_max required");
    const double total = d.theta_fp * (d.r_max - d.alpha) + d.theta_t * 2.0 * d.alpha +
                         d.theta_fn * (d.r_max - d.alpha);
    if (std::fabs(total - 1.0) > 1e-9)
      throw std::invalid_argument("PiecewiseDist: does not integrate to 1");
  }
  void operator()(const GaussianDist& d) const {
    if (!(d.sigma > 0.0)) throw std::invalid_argument("GaussianDist: sigma > 0 required");
  }
};

}  // namespace

void validate(const ParametricErrorDist& dist) { std::visit(ValidateVisitor{}, dist); }

double huber_normalizer(double theta) {
  // core: int_{-theta}^{theta} e^{-x^2/2} = sqrt(2 pi) (2 Phi(theta) - 1)
  // tails: rho = 2 theta |x| - theta^2, so each tail integrates to
  //        exp(-theta^2/2)/theta
  const double core = std::sqrt(2.0 * 3.14159265358979323846) *
                      (2.0 * normal_cdf(theta) - 1.0);
  const double tails = 2.0 * std::exp(-0.5 * theta * theta) / theta;
  return core + tails;
}

double dist_pdf(const ParametricErrorDist& dist, double x) {
  validate(dist);
  if (const auto* h = std::get_if<HuberDist>(&dist)) {
    const double ax = std::fabs(x);
    const double rho = ax <= h->theta ? x * x : 2.0 * h->theta * ax - h->theta * h->theta;
    return std::exp(-0.5 * rho) / huber_normalizer(h->theta);
  }
  if (const auto* p = std::get_if<PiecewiseDist>(&dist)) {
    if (std::fabs(x) >= p->r_max)
      throw std::domain_error("PiecewiseDist: sample outside (-r_max, r_max)");
    if (x < -p->alpha) return p->theta_fp;
    if (x <= p->alpha) return p->theta_t;
    return p->theta_fn;
  }
  const auto& g = std::get<GaussianDist>(dist);
  return normal_pdf(x, g.mean, g.sigma);
}

}  // namespace ipr
