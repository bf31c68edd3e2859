#include "revenue.hpp"

#include <algorithm>
#include <cmath>

namespace arqg {

namespace {

void check_beliefs(const BeliefDistribution& beliefs) {
  if (!beliefs.cdf) throw ParamDomainError("belief distribution has no cdf");
  if (beliefs.cdf(0.0) != 0.0 || beliefs.cdf(1.0) != 1.0) {
    throw ParamDomainError("belief cdf must satisfy cdf(0) = 0 and cdf(1) = 1");
  }
}

// Derivative-free maximizer; assumes f is unimodal on [lo, hi].
double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - gr * (hi - lo);
  double d = lo + gr * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

BeliefDistribution BeliefDistribution::uniform() {
  return {[](double x) { return std::clamp(x, 0.0, 1.0); }};
}

BeliefDistribution BeliefDistribution::point_mass(double at) {
  require_unit_interval(at, "point mass location");
  return {[at](double x) { return x > at ? 1.0 : 0.0; }};
}

double revenue_at(const QueueParams& params, double tau) {
  require_unit_interval(tau, "tau");
  if (tau == 0.0) throw ParamDomainError("revenue is defined for tau in (0, 1]");
  return params.arrival_rate * (1.0 - tau) * cost_for_threshold(params, tau);
}

StaticOptimum static_optimum(const QueueParams& params) {
  const double lambda = params.arrival_rate;
  const double mu = params.service_rate;
  const double a = mu - lambda;
  const double rho = params.utilization();
  StaticOptimum out;
  out.tau_opt = (1.0 - rho) / (2.0 - rho);
  out.fee = lambda * (2.0 * mu - lambda) / (8.0 * mu * a * a);
  out.revenue = rho * rho / (8.0 * (1.0 - rho) * (1.0 - rho));
  out.multiple_equilibria = out.fee > critical_costs(params).lower;
  return out;
}

ConservativeOptimum conservative_optimum(const QueueParams& params) {
  const double rho = params.utilization();
  if (rho <= 0.5) {
    throw RegimeError(
        "conservative optimum requires utilization > 1/2; use the static optimum");
  }
  ConservativeOptimum out;
  out.tau_g = ((1.0 - rho) / rho) * ((1.0 - rho) / rho);
  out.fee = critical_costs(params).lower;
  out.revenue = (2.0 * rho - 1.0) / (2.0 * (1.0 - rho));
  out.fee_attained = false;
  return out;
}

double price_of_conservatism(const QueueParams& params) {
  const double rho = params.utilization();
  if (rho <= 2.0 / 3.0) return 1.0;
  return rho * rho / (-8.0 * rho * rho + 12.0 * rho - 4.0);
}

double companion_threshold(const QueueParams& params, double tau_e1) {
  const double rho = params.utilization();
  if (rho <= 0.5) throw RegimeError("companion threshold requires utilization > 1/2");
  const double tau_g = ((1.0 - rho) / rho) * ((1.0 - rho) / rho);
  const double peak = cost_curve_peak(params);
  const double slack = 1e-12;
  if (!(tau_e1 >= tau_g - slack && tau_e1 <= peak + slack)) {
    throw ParamDomainError("tau_e1 must lie in [tau_g, (mu - lambda) / lambda]");
  }
  return std::min(tau_g / tau_e1, 1.0);
}

DynamicRevenue dynamic_revenue(const QueueParams& params, double fee,
                               const BeliefDistribution& beliefs) {
  check_beliefs(beliefs);
  const EquilibriumSet eq = find_equilibria(params, fee);
  DynamicRevenue out{0.0, eq.none_make_ar};
  if (eq.some_make_ar.empty()) return out;
  if (!eq.none_make_ar) {
    // Unique interior equilibrium: strategy-learning converges to it from
    // any initial belief.
    out.value = revenue_at(params, eq.some_make_ar.front());
    return out;
  }
  const double tau_e1 = eq.some_make_ar.front();
  const double tau_e2 = eq.some_make_ar.size() > 1 ? eq.some_make_ar.back()
                        : eq.tangent              ? tau_e1
                                                  : 1.0;
  out.value = beliefs.cdf(tau_e2) * revenue_at(params, tau_e1);
  return out;
}

DynamicFee optimal_dynamic_fee(const QueueParams& params, const BeliefDistribution& beliefs) {
  check_beliefs(beliefs);
  const StaticOptimum so = static_optimum(params);
  if (!so.multiple_equilibria) {
    // The optimal static fee yields a unique equilibrium, so convergence is
    // belief-independent and nothing can beat (C*, R*).
    return {so.fee, so.revenue};
  }

  // rho > 2/3. Fees below C(1) yield unique equilibria with revenue capped
  // by the guaranteed value, which the band scan attains at tau_g; so a scan
  // of the multiple-equilibria band covers the whole fee axis.
  const double rho = params.utilization();
  const double tau_g = ((1.0 - rho) / rho) * ((1.0 - rho) / rho);
  const double peak = cost_curve_peak(params);
  const auto objective = [&](double tau_e1) {
    return beliefs.cdf(companion_threshold(params, tau_e1)) * revenue_at(params, tau_e1);
  };

  const int n = 10000;
  int best = 0;
  double best_val = -1.0;
  std::vector<double> grid(n + 1);
  for (int i = 0; i <= n; ++i) {
    grid[i] = tau_g + (peak - tau_g) * static_cast<double>(i) / n;
    const double v = objective(grid[i]);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  const double lo = grid[std::max(best - 1, 0)];
  const double hi = grid[std::min(best + 1, n)];
  double tau_star = golden_max(objective, lo, hi, 1e-10);
  double val_star = objective(tau_star);
  // The cdf need not be smooth; keep the grid argmax if refinement lost it.
  if (best_val > val_star) {
    tau_star = grid[best];
    val_star = best_val;
  }
  return {cost_for_threshold(params, tau_star), val_star};
}

}  // namespace arqg
