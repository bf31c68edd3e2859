#ifndef ARQG_EQUILIBRIUM_HPP
#define ARQG_EQUILIBRIUM_HPP

#include <optional>
#include <vector>

#include "queue_core.hpp"

namespace arqg {

// Critical reservation costs. `lower` is C(1); `upper` is the peak of the
// cost curve and exists only when utilization exceeds 1/2 (below that the
// curve is monotone and its maximum is `lower`).
struct CriticalCosts {
  double lower;
  std::optional<double> upper;
};

struct EquilibriumSet {
  std::vector<double> some_make_ar;  // thresholds in (0, 1), ascending
  bool none_make_ar = false;
  // True when the cost sits exactly at the peak of the cost curve and the
  // two interior equilibria collapse into a single tangent one.
  bool tangent = false;
};

// Reservation cost that makes tau an interior equilibrium:
//   C(tau) = lambda mu tau / (2 (mu - lambda) (mu - lambda (1 - tau))^2).
double cost_for_threshold(const QueueParams& params, double tau);

// Location of the maximum of the cost curve on [0, 1]:
// (mu - lambda) / lambda when utilization > 1/2, else 1.
double cost_curve_peak(const QueueParams& params);

CriticalCosts critical_costs(const QueueParams& params);

// All equilibria for a given cost: the roots of C(tau) = cost in (0, 1)
// via the equivalent quadratic, plus the none-make-AR flag (cost >= C(1)).
EquilibriumSet find_equilibria(const QueueParams& params, double cost);

}  // namespace arqg

#endif
