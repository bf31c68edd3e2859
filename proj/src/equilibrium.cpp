#include "equilibrium.hpp"

#include <algorithm>
#include <cmath>

namespace arqg {

namespace {
constexpr double kEdgeEps = 1e-12;  // roots must be strictly inside (eps, 1-eps)
}

double cost_for_threshold(const QueueParams& params, double tau) {
  require_unit_interval(tau, "tau");
  const double lambda = params.arrival_rate;
  const double mu = params.service_rate;
  const double y = mu - lambda * (1.0 - tau);
  return lambda * mu * tau / (2.0 * (mu - lambda) * y * y);
}

double cost_curve_peak(const QueueParams& params) {
  const double lambda = params.arrival_rate;
  const double mu = params.service_rate;
  if (params.utilization() <= 0.5) return 1.0;
  return (mu - lambda) / lambda;
}

CriticalCosts critical_costs(const QueueParams& params) {
  const double lambda = params.arrival_rate;
  const double mu = params.service_rate;
  CriticalCosts out;
  out.lower = lambda / (2.0 * mu * (mu - lambda));
  if (params.utilization() > 0.5) {
    out.upper = mu / (8.0 * (lambda - mu) * (lambda - mu));
  }
  return out;
}

EquilibriumSet find_equilibria(const QueueParams& params, double cost) {
  if (!(cost >= 0.0) || !std::isfinite(cost)) {
    throw ParamDomainError("cost must be nonnegative and finite");
  }
  const double lambda = params.arrival_rate;
  const double mu = params.service_rate;
  const double a = mu - lambda;

  EquilibriumSet out;
  // Inclusive at equality: at cost == C(1) every customer is (weakly)
  // better off not reserving.
  out.none_make_ar = cost >= critical_costs(params).lower;

  if (cost == 0.0) return out;  // C(tau) = 0 only at tau = 0, excluded

  // C(tau) = cost  <=>  qa tau^2 + qb tau + qc = 0
  const double qa = 2.0 * cost * a * lambda * lambda;
  const double qb = 4.0 * cost * a * a * lambda - lambda * mu;
  const double qc = 2.0 * cost * a * a * a;

  const double disc = qb * qb - 4.0 * qa * qc;
  std::vector<double> roots;
  if (std::fabs(disc) <= 1e-14 * qb * qb) {
    // Tangent at the peak: the two interior equilibria coincide.
    roots.push_back(-qb / (2.0 * qa));
    out.tangent = true;
  } else if (disc > 0.0) {
    // Cancellation-stable form; the roots can differ by orders of
    // magnitude near the regime boundaries.
    const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
    roots.push_back(q / qa);
    roots.push_back(qc / q);
  }

  for (double r : roots) {
    if (r > kEdgeEps && r < 1.0 - kEdgeEps) out.some_make_ar.push_back(r);
  }
  std::sort(out.some_make_ar.begin(), out.some_make_ar.end());
  if (out.some_make_ar.size() != 1) out.tangent = false;
  return out;
}

}  // namespace arqg
