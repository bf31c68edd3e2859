#include "dynamics.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>

#include "rng.hpp"

namespace arqg {

namespace {

constexpr double kFixedPointTol = 1e-10;  // exact-tail convergence
constexpr int kConsecutiveSmall = 3;

// Incremental outcome classifier shared by run_learning and detect_limit.
class LimitTracker {
 public:
  explicit LimitTracker(const LearningConfig& config)
      : config_(config), none_make_ar_exists_(config.fee >= critical_costs(config.params).lower) {}

  void feed(const StepRecord& rec) {
    if (config_.mode == LearningMode::strategy) {
      feed_strategy(rec);
    } else {
      feed_action(rec);
    }
    prev_prev_belief_ = prev_belief_;
    prev_belief_ = rec.belief_out;
    have_prev_prev_ = have_prev_;
    have_prev_ = true;
  }

  const Outcome& outcome() const { return outcome_; }
  bool terminal() const { return outcome_.kind == OutcomeKind::converged; }

 private:
  void feed_strategy(const StepRecord& rec) {
    if (!have_prev_) {
      // Seed the delta chain with the initial belief.
      prev_belief_ = rec.belief_in;
      have_prev_ = true;
    }
    const double d2 = rec.belief_out - prev_belief_;
    if (std::fabs(d2) < kFixedPointTol) {
      if (++small_run_ >= kConsecutiveSmall) {
        outcome_ = {OutcomeKind::converged, rec.belief_out, false};
      }
    } else {
      small_run_ = 0;
    }
    if (outcome_.kind == OutcomeKind::converged) return;

    // Linear tail: extrapolate the limit (Aitken delta-squared), confirm it
    // is a fixed point of BR, then polish by bisecting BR(tau) - tau.
    if (have_prev_prev_) {
      const double d1 = prev_belief_ - prev_prev_belief_;
      const double r = d1 != 0.0 ? d2 / d1 : 0.0;
      if (std::fabs(d2) < 1e-4 && r > 0.0 && r < 1.0) {
        const double limit = rec.belief_out - d2 * d2 / (d2 - d1);
        if (limit >= 0.0 && limit <= 1.0 &&
            std::fabs(best_response(config_.params, config_.fee, limit) - limit) < 1e-7) {
          outcome_ = {OutcomeKind::converged, polish_fixed_point(limit, d2, r), false};
        }
      }
    }
  }

  void feed_action(const StepRecord& rec) {
    if (rec.realized_threshold == 0.0) ++collapses_;
    if (rec.belief_out == 1.0 && none_make_ar_exists_) {
      outcome_ = {OutcomeKind::converged, 1.0, true};
    } else if (collapses_ >= 2) {
      outcome_ = {OutcomeKind::cycling, 0.0, false};
    }
  }

  double polish_fixed_point(double guess, double d2, double r) const {
    const double width = std::max(1e-9, 8.0 * std::fabs(d2) / (1.0 - r));
    double lo = std::max(0.0, guess - width);
    double hi = std::min(1.0, guess + width);
    const auto g = [&](double t) { return best_response(config_.params, config_.fee, t) - t; };
    if (!(g(lo) > 0.0 && g(hi) < 0.0)) return guess;
    for (int i = 0; i < 100 && hi - lo > 1e-13; ++i) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  LearningConfig config_;
  bool none_make_ar_exists_;
  Outcome outcome_{};
  double prev_belief_ = 0.0;
  double prev_prev_belief_ = 0.0;
  bool have_prev_ = false;
  bool have_prev_prev_ = false;
  int small_run_ = 0;
  long collapses_ = 0;
};

void validate_config(const LearningConfig& config) {
  require_unit_interval(config.initial_belief, "initial belief");
  if (!(config.fee >= 0.0) || !std::isfinite(config.fee)) {
    throw ParamDomainError("fee must be nonnegative and finite");
  }
  if (config.steps < 1) throw ParamDomainError("steps must be >= 1");
  if (!(config.step_duration > 0.0)) throw ParamDomainError("step duration must be positive");
}

struct Welford {
  long n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  double variance() const { return n > 1 ? m2 / (n - 1) : 0.0; }
};

}  // namespace

ActionChoice decide(const QueueParams& params, double fee, double belief, double p) {
  const double with_ar = believed_wait_ar(params, belief, p) + fee;
  const double without = wait_noar(params, belief);
  return with_ar < without ? ActionChoice::make_ar : ActionChoice::skip_ar;
}

double best_response(const QueueParams& params, double fee, double belief) {
  require_unit_interval(belief, "belief");
  if (!(fee >= 0.0)) throw ParamDomainError("fee must be nonnegative");
  const double target = wait_noar(params, belief) - fee;
  if (target <= 0.0) return 1.0;  // nobody reserves
  // Everyone reserves. The relative slack keeps an exact fixed point (where
  // the two sides tie to rounding) on the interior branch, which returns it.
  if (wait_ar(params, belief) < target * (1.0 - 1e-12)) return 0.0;
  double lo = belief, hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    (wait_ar(params, mid) > target ? lo : hi) = mid;
  }
  // Return the lower bracket, not the midpoint: at a fixed point the root sits
  // on the left endpoint, and the midpoint's upward half-width bias would make
  // iterated best responses creep past the equilibrium.
  return lo;
}

Outcome detect_limit(const LearningConfig& config, std::span<const StepRecord> steps) {
  if (steps.size() < 2) throw ParamDomainError("limit detection needs at least 2 steps");
  LimitTracker tracker(config);
  for (const StepRecord& rec : steps) {
    tracker.feed(rec);
    if (tracker.terminal()) break;
  }
  return tracker.outcome();
}

LearningTrace run_learning(const LearningConfig& config) {
  validate_config(config);
  LearningTrace trace(config);
  trace.steps.reserve(static_cast<std::size_t>(std::min<long>(config.steps, 1 << 20)));
  LimitTracker tracker(config);
  CounterRng rng = CounterRng::substream(config.seed, 0);

  const double mean_demand = config.params.arrival_rate * config.step_duration;
  double belief = config.initial_belief;
  long total_demand = 0, total_reservations = 0;
  double strategy_ar_sum = 0.0;

  for (long i = 1; i <= config.steps; ++i) {
    StepRecord rec;
    rec.index = i;
    rec.belief_in = belief;
    rec.realized_threshold = best_response(config.params, config.fee, belief);
    if (config.mode == LearningMode::strategy) {
      rec.demand = -1;
      rec.reservations = -1;
      rec.belief_out = rec.realized_threshold;
      strategy_ar_sum += 1.0 - rec.realized_threshold;
    } else {
      const long demand = static_cast<long>(rng.poisson(mean_demand));
      long reservations = 0;
      // Every customer follows the joint best response to the belief; the
      // threshold form avoids knife-edge rounding in per-customer ties.
      for (long j = 0; j < demand; ++j) {
        if (rng.next_double() > rec.realized_threshold) ++reservations;
      }
      rec.demand = demand;
      rec.reservations = reservations;
      // A step with no arrivals carries no information; keep the belief.
      rec.belief_out =
          demand > 0 ? 1.0 - static_cast<double>(reservations) / static_cast<double>(demand)
                     : belief;
      total_demand += demand;
      total_reservations += reservations;
    }
    trace.steps.push_back(rec);
    belief = rec.belief_out;
    tracker.feed(rec);
    if (tracker.terminal()) break;
  }

  trace.outcome = tracker.outcome();
  if (config.mode == LearningMode::strategy) {
    trace.mean_ar_fraction = strategy_ar_sum / static_cast<double>(trace.steps.size());
  } else {
    trace.mean_ar_fraction =
        total_demand > 0
            ? static_cast<double>(total_reservations) / static_cast<double>(total_demand)
            : 0.0;
  }
  return trace;
}

ModeComparison compare_modes(const QueueParams& params, double fee, double beta, long steps,
                             long replications, std::uint64_t seed, double step_duration) {
  require_unit_interval(beta, "beta");
  if (steps < 1 || replications < 1) {
    throw ParamDomainError("steps and replications must be >= 1");
  }
  const EquilibriumSet eq = find_equilibria(params, fee);
  if (eq.some_make_ar.size() != 1 || eq.none_make_ar) {
    throw RegimeError("compare_modes requires a fee with a unique some-make-AR equilibrium");
  }

  const double mean_demand = params.arrival_rate * step_duration;
  Welford per_step_strategy, per_step_action;
  long total_demand = 0, total_res_s = 0, total_res_a = 0;
  long dominated = 0, counted = 0;
  std::vector<double> priorities;

  for (long rep = 0; rep < replications; ++rep) {
    CounterRng rng = CounterRng::substream(seed, static_cast<std::uint64_t>(rep) + 1);
    double belief_s = beta, belief_a = beta;
    for (long i = 0; i < steps; ++i) {
      // One shared realization per step, consumed by both modes.
      const long demand = static_cast<long>(rng.poisson(mean_demand));
      priorities.resize(static_cast<std::size_t>(demand));
      for (double& p : priorities) p = rng.next_double();

      const double thr_s = best_response(params, fee, belief_s);
      const double thr_a = best_response(params, fee, belief_a);
      long res_s = 0, res_a = 0;
      for (double p : priorities) {
        if (p > thr_s) ++res_s;
        if (p > thr_a) ++res_a;
      }
      // Freeze the strategy belief once it reaches a fixed point; repeated
      // bisection noise would otherwise walk it off the equilibrium.
      if (std::fabs(thr_s - belief_s) > 1e-9) belief_s = thr_s;
      if (demand > 0) belief_a = 1.0 - static_cast<double>(res_a) / static_cast<double>(demand);

      per_step_strategy.add(static_cast<double>(res_s));
      per_step_action.add(static_cast<double>(res_a));
      total_demand += demand;
      total_res_s += res_s;
      total_res_a += res_a;
      ++counted;
      if (res_a >= res_s) ++dominated;
    }
  }

  ModeComparison out;
  out.steps = steps;
  out.replications = replications;
  out.strategy_ar_fraction = static_cast<double>(total_res_s) / static_cast<double>(total_demand);
  out.action_ar_fraction = static_cast<double>(total_res_a) / static_cast<double>(total_demand);
  out.difference = out.action_ar_fraction - out.strategy_ar_fraction;
  out.dominance_fraction = static_cast<double>(dominated) / static_cast<double>(counted);

  // One-sided Welch test: H1 is that action-learning reserves more per step.
  const double na = static_cast<double>(per_step_action.n);
  const double ns = static_cast<double>(per_step_strategy.n);
  const double va = per_step_action.variance() / na;
  const double vs = per_step_strategy.variance() / ns;
  const double se = std::sqrt(va + vs);
  if (se > 0.0) {
    out.t_statistic = (per_step_action.mean - per_step_strategy.mean) / se;
    const double df = (va + vs) * (va + vs) /
                      (va * va / (na - 1.0) + vs * vs / (ns - 1.0));
    boost::math::students_t dist(df);
    out.p_value = boost::math::cdf(boost::math::complement(dist, out.t_statistic));
  } else {
    out.t_statistic = 0.0;
    out.p_value = 1.0;
  }
  return out;
}

}  // namespace arqg
