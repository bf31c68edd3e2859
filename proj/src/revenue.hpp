#ifndef ARQG_REVENUE_HPP
#define ARQG_REVENUE_HPP

#include <functional>

#include "equilibrium.hpp"
#include "queue_core.hpp"

namespace arqg {

struct StaticOptimum {
  double tau_opt;   // (1 - rho) / (2 - rho)
  double fee;       // lambda (2 mu - lambda) / (8 mu (mu - lambda)^2)
  double revenue;   // rho^2 / (8 (1 - rho)^2)
  bool multiple_equilibria;  // fee sits in the multiple-equilibria band (rho > 2/3)
};

struct ConservativeOptimum {
  double tau_g;     // ((1 - rho) / rho)^2
  double fee;       // supremum C(1); guaranteed revenue is approached, not attained
  double revenue;   // (2 rho - 1) / (2 (1 - rho))
  bool fee_attained = false;
};

// Distribution of the initial belief. cdf(x) = P(belief < x) must be
// nondecreasing with cdf(0) = 0 and cdf(1) = 1.
struct BeliefDistribution {
  std::function<double(double)> cdf;

  static BeliefDistribution uniform();
  static BeliefDistribution point_mass(double at);
};

struct DynamicRevenue {
  double value;
  // Under action-learning any fee admitting a none-make-AR equilibrium
  // eventually yields zero revenue; the value above assumes strategy-learning.
  bool zero_under_action_learning;
};

struct DynamicFee {
  double fee;
  double revenue;
};

// Revenue per unit time at an equilibrium threshold: lambda (1 - tau) C(tau).
double revenue_at(const QueueParams& params, double tau);

StaticOptimum static_optimum(const QueueParams& params);

// Requires utilization > 1/2; below that every sub-peak fee already yields
// a unique equilibrium and the conservative optimum is the static one.
ConservativeOptimum conservative_optimum(const QueueParams& params);

// R* / R_g*: 1 for rho <= 2/3, else rho^2 / (-8 rho^2 + 12 rho - 4).
double price_of_conservatism(const QueueParams& params);

// The larger threshold sharing a cost with tau_e1: ((1-rho)/rho)^2 / tau_e1.
// Requires rho > 1/2 and tau_e1 in [tau_g, peak].
double companion_threshold(const QueueParams& params, double tau_e1);

// Expected steady-state revenue under strategy-learning from a random
// initial belief.
DynamicRevenue dynamic_revenue(const QueueParams& params, double fee,
                               const BeliefDistribution& beliefs);

// Fee maximizing dynamic_revenue. Closed form for rho <= 2/3; otherwise a
// scan over the multiple-equilibria band refined by golden section,
// compared against the guaranteed branch.
DynamicFee optimal_dynamic_fee(const QueueParams& params, const BeliefDistribution& beliefs);

}  // namespace arqg

#endif
