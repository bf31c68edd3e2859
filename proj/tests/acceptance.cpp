// Acceptance suite: one line per criterion, nonzero exit if any fail.
// Tolerances are pinned here and nowhere else.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <vector>

#include "des_sim.hpp"
#include "dynamics.hpp"
#include "equilibrium.hpp"
#include "queue_core.hpp"
#include "revenue.hpp"

using namespace arqg;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const char* what) {
  std::printf("%s  criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, what);
  if (!pass) ++g_failures;
}

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double uniform(std::uint64_t& state) {
  state = state * 6364136223846793005ULL + 1442695040888963407ULL;
  return static_cast<double>(state >> 11) * 0x1p-53;
}

const QueueParams kBase(45.0, 60.0);

void criterion1() {
  find_equilibria(kBase, 0.024);  // warm caches before timing
  const auto start = Clock::now();
  const EquilibriumSet eq = find_equilibria(kBase, 0.024);
  const double elapsed = ms_since(start);
  const bool pass = eq.some_make_ar.size() == 1 && !eq.none_make_ar &&
                    std::fabs(eq.some_make_ar[0] - 0.1026) <= 0.0005 && elapsed < 1.0;
  report(1, pass, "unique equilibrium 0.1026 +/- 0.0005 at C=0.024, < 1 ms");
}

void criterion2() {
  const EquilibriumSet eq = find_equilibria(kBase, 0.032);
  const bool pass = eq.some_make_ar.size() == 2 && eq.none_make_ar &&
                    std::fabs(eq.some_make_ar[0] - 0.2222) <= 0.003 &&
                    std::fabs(eq.some_make_ar[1] - 0.5) <= 1e-6;
  report(2, pass, "equilibria {0.2222 +/- 0.003, 0.5 +/- 1e-6, none} at C=0.032");
}

void criterion3() {
  bool pass = true;
  for (int r = 1; r <= 9 && pass; ++r) {
    const QueueParams params(6.0 * r, 60.0);
    const CriticalCosts cc = critical_costs(params);
    for (int j = 1; j <= 20 && pass; ++j) {
      const double f = j / 21.0;
      const EquilibriumSet low = find_equilibria(params, f * cc.lower);
      pass = pass && low.some_make_ar.size() == 1 && !low.none_make_ar;
      if (cc.upper) {
        const double mid = cc.lower + 0.999 * f * (*cc.upper - cc.lower);
        const EquilibriumSet band = find_equilibria(params, mid);
        pass = pass && band.some_make_ar.size() == 2 && band.none_make_ar;
        const EquilibriumSet high = find_equilibria(params, *cc.upper * (1.0 + f));
        pass = pass && high.some_make_ar.empty() && high.none_make_ar;
      } else {
        const EquilibriumSet high = find_equilibria(params, cc.lower * (1.0 + f));
        pass = pass && high.some_make_ar.empty() && high.none_make_ar;
      }
    }
  }

  // Closed-form roots against a 1e6-point sign-change scan.
  std::uint64_t state = 5;
  for (int trial = 0; trial < 10 && pass; ++trial) {
    const double mu = 1.0 + 99.0 * uniform(state);
    const double lambda = mu * (0.05 + 0.9 * uniform(state));
    const QueueParams params(lambda, mu);
    const double cmax =
        critical_costs(params).upper.value_or(cost_for_threshold(params, 1.0));
    const double cost = 1.2 * cmax * uniform(state);
    const EquilibriumSet eq = find_equilibria(params, cost);

    std::vector<double> oracle;
    double prev = cost_for_threshold(params, 0.0) - cost;
    for (long i = 1; i <= 1000000; ++i) {
      const double tau = static_cast<double>(i) * 1e-6;
      const double cur = cost_for_threshold(params, tau) - cost;
      if ((prev < 0.0 && cur >= 0.0) || (prev > 0.0 && cur <= 0.0)) {
        if (tau < 1.0 - 1e-6) oracle.push_back(tau - 5e-7);
      }
      prev = cur;
    }
    pass = pass && eq.some_make_ar.size() == oracle.size();
    for (std::size_t k = 0; pass && k < oracle.size(); ++k) {
      pass = std::fabs(eq.some_make_ar[k] - oracle[k]) < 2e-6;
    }
  }
  report(3, pass, "regime counts and roots match theory and a 1e6-point scan oracle");
}

void criterion4() {
  bool pass = true;
  for (int r = 1; r <= 97 && pass; ++r) {
    const double rho = r / 98.0;
    const QueueParams params(rho * 60.0, 60.0);
    const StaticOptimum so = static_optimum(params);
    const double closed = rho * rho / (8.0 * (1.0 - rho) * (1.0 - rho));
    pass = std::fabs(revenue_at(params, so.tau_opt) - closed) <= 1e-10 * closed;
  }
  for (double rho : {0.60, 0.63, 0.65, 2.0 / 3.0, 0.68, 0.70, 0.75} ) {
    if (!pass) break;
    const QueueParams params(rho * 60.0, 60.0);
    pass = static_optimum(params).multiple_equilibria == (rho > 2.0 / 3.0);
  }
  report(4, pass, "revenue identity 1e-10 relative; optimal fee multiplicity flips at 2/3");
}

void criterion5() {
  bool pass = std::fabs(price_of_conservatism(kBase) - 1.125) <= 1e-12;
  pass = pass && std::fabs(static_optimum(kBase).revenue - 1.125) <= 1e-12;
  pass = pass && std::fabs(conservative_optimum(kBase).revenue - 1.0) <= 1e-12;
  double prev = 1.0;
  for (int i = 1; i <= 100 && pass; ++i) {
    const double rho = 2.0 / 3.0 + (1.0 / 3.0) * i / 102.0;
    const QueueParams params(rho * 60.0, 60.0);
    const double poc = price_of_conservatism(params);
    const double ratio = static_optimum(params).revenue / conservative_optimum(params).revenue;
    pass = std::fabs(poc - ratio) <= 1e-10 * ratio && poc > prev;
    prev = poc;
  }
  report(5, pass, "PoC(0.75)=1.125, equals R*/Rg* to 1e-10, strictly increasing");
}

void criterion6() {
  bool pass = true;
  const auto run = [&](double beta, double expected) {
    const auto start = Clock::now();
    const LearningTrace trace =
        run_learning(LearningConfig{kBase, 0.032, LearningMode::strategy, beta, 50});
    const double elapsed = ms_since(start);
    pass = pass && trace.outcome.kind == OutcomeKind::converged &&
           std::fabs(trace.outcome.limit - expected) <= 1e-6 && elapsed < 10.0;
  };
  run(0.2, 2.0 / 9.0);
  run(0.4, 2.0 / 9.0);
  run(0.6, 1.0);
  report(6, pass, "strategy learning limits within 1e-6 in <= 50 steps, < 10 ms each");
}

void criterion7() {
  const auto start = Clock::now();
  const double tau_e = find_equilibria(kBase, 0.024).some_make_ar[0];
  const ModeComparison cmp = compare_modes(kBase, 0.024, tau_e, 10000, 1, 2024);
  const double elapsed = ms_since(start);
  const bool pass = std::fabs(cmp.strategy_ar_fraction - 0.895) <= 0.015 &&
                    std::fabs(cmp.action_ar_fraction - 0.949) <= 0.015 &&
                    cmp.difference > 0.0 && cmp.p_value < 0.01 &&
                    cmp.dominance_fraction >= 0.99 && elapsed < 30000.0;
  report(7, pass, "action 94.9% vs strategy 89.5% AR (+/- 1.5pp), p < 0.01, dominance >= 99%");
}

void criterion8() {
  // Absorption hinges on a step in which no arriving customer reserves.
  // Short steps (mean demand 4.5) make that event observable within the
  // budget; at mean demand 45 it is a 5-sigma binomial deviation.
  const double dt = 0.1;
  bool pass = true;
  for (double beta : {0.0, 0.3, 0.9}) {
    int absorbed = 0;
    for (int rep = 0; rep < 100; ++rep) {
      const LearningTrace trace = run_learning(LearningConfig{
          kBase, 0.032, LearningMode::action, beta, 100000, dt,
          static_cast<std::uint64_t>(rep) + 1});
      if (trace.outcome.kind == OutcomeKind::converged && trace.outcome.absorbing) ++absorbed;
    }
    pass = pass && absorbed >= 95;
  }
  for (int rep = 0; rep < 5 && pass; ++rep) {
    const LearningTrace trace = run_learning(LearningConfig{
        kBase, 0.024, LearningMode::action, 0.3, 100000, dt,
        static_cast<std::uint64_t>(rep) + 1});
    pass = trace.outcome.kind == OutcomeKind::cycling && !trace.outcome.absorbing;
  }
  report(8, pass, "absorption >= 95/100 at C=0.032; cycling, never absorbed, at C=0.024");
}

void criterion9() {
  const auto start = Clock::now();
  const SimConfig config{kBase, 0.5, 100000.0, 0.2, 12, SimEngine::priority, 0.05};
  const SimReport rep = simulate(config);
  const double elapsed = ms_since(start);

  bool pass = std::fabs(rep.noar.mean_wait - 0.05) <= 0.03 * 0.05;
  pass = pass && std::fabs(rep.utilization_estimate - 0.75) <= 0.01;
  const double analytic = wait_ar(kBase, 0.8);
  bool band_found = false;
  for (const BandStats& band : rep.ar_bands) {
    if (std::fabs(band.center - 0.8) > 1e-9) continue;
    band_found = true;
    const double tol = std::max(3.0 * band.ci_half, 0.05 * analytic);
    pass = pass && std::fabs(band.mean_wait - analytic) <= tol;
  }
  pass = pass && band_found && elapsed < 60000.0;
  report(9, pass, "DES: non-AR wait within 3% of 0.05, band 0.8 matches, utilization 0.75");
}

void criterion10() {
  bool pass = true;
  long min_customers = 1L << 60;
  for (std::uint64_t seed = 0; seed < 50 && pass; ++seed) {
    const SimConfig config{kBase, 0.5, 25.0, 0.0, seed + 100, SimEngine::both, 0.05};
    const SimReport rep = simulate(config);
    min_customers = std::min(min_customers, rep.customers_total);
    pass = rep.equivalence.checked && rep.equivalence.equivalent &&
           rep.equivalence.max_departure_delta <= 1e-9;
  }
  pass = pass && min_customers >= 1000;
  report(10, pass, "50 random workloads (>= 1e3 customers): engines agree to 1e-9");
}

void criterion11() {
  bool pass = true;
  std::uint64_t state = 99;
  for (int i = 0; i < 100 && pass; ++i) {
    const double mu = 0.5 + 99.5 * uniform(state);
    const double lambda = mu * (0.01 + 0.98 * uniform(state));
    const QueueParams params(lambda, mu);
    const double pk = lambda / (2.0 * mu * (mu - lambda));
    pass = std::fabs(wait_noar(params, 1.0) - pk) <= 1e-12 * pk && wait_ar(params, 1.0) == 0.0;
  }
  report(11, pass, "wait_noar(1) = PK value to 1e-12 relative; wait_ar(1) = 0");
}

void criterion12() {
  const BeliefDistribution u = BeliefDistribution::uniform();
  const DynamicFee df = optimal_dynamic_fee(kBase, u);
  const double at_static = dynamic_revenue(kBase, static_optimum(kBase).fee, u).value;
  bool pass = std::fabs(df.fee - 0.025) <= 1e-9 && std::fabs(df.revenue - 1.0) <= 1e-9 &&
              df.revenue > at_static && std::fabs(at_static - 0.625) <= 0.001;

  const QueueParams low(38.0, 60.0);
  const DynamicFee low_fee = optimal_dynamic_fee(low, u);
  pass = pass && std::fabs(low_fee.fee - static_optimum(low).fee) <= 1e-9;
  report(12, pass, "optimal dynamic fee (0.025, 1.0) beats C* branch; C* below 2/3");
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  criterion12();
  if (g_failures > 0) {
    std::printf("%d criteria failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
