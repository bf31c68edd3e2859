#ifndef ARQG_DYNAMICS_HPP
#define ARQG_DYNAMICS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "equilibrium.hpp"
#include "queue_core.hpp"

namespace arqg {

enum class LearningMode { strategy, action };

enum class ActionChoice { make_ar, skip_ar };

struct LearningConfig {
  QueueParams params;
  double fee;
  LearningMode mode;
  double initial_belief;
  long steps;
  double step_duration = 1.0;
  std::uint64_t seed = 0;
};

struct StepRecord {
  long index;                 // 1-based
  double belief_in;           // belief the step's customers act on
  double realized_threshold;  // threshold actually followed, BR(belief_in)
  long demand;                // action mode only, -1 otherwise
  long reservations;          // action mode only, -1 otherwise
  double belief_out;
};

enum class OutcomeKind { converged, cycling, max_steps };

struct Outcome {
  OutcomeKind kind = OutcomeKind::max_steps;
  double limit = 0.0;     // valid when converged
  bool absorbing = false; // action mode pinned at the none-make-AR state
};

struct LearningTrace {
  explicit LearningTrace(LearningConfig c) : config(std::move(c)) {}

  LearningConfig config;
  std::vector<StepRecord> steps;
  Outcome outcome;
  double mean_ar_fraction = 0.0;
};

struct ModeComparison {
  double strategy_ar_fraction;
  double action_ar_fraction;
  double difference;       // action - strategy
  double t_statistic;      // one-sided Welch on per-step reservation counts
  double p_value;
  double dominance_fraction;  // steps where action reservations >= strategy
  long steps;
  long replications;
};

// Single customer's best response to a belief about everyone else.
// Reserves only on a strict improvement; ties go to not reserving.
ActionChoice decide(const QueueParams& params, double fee, double belief, double p);

// Joint best response: the threshold induced by applying `decide`
// pointwise over p. 0 when everyone reserves, 1 when nobody does,
// otherwise the unique tau in [belief, 1] with wait_ar(tau) equal to
// wait_noar(belief) - fee (bisection on the strictly decreasing wait).
double best_response(const QueueParams& params, double fee, double belief);

// Classifies the trace so far. Strategy mode: converged once the iterates
// pin down a fixed point of BR (exactly, or through Aitken extrapolation of
// the linear tail, polished against BR). Action mode: converged(1) when the
// belief is absorbed at the none-make-AR equilibrium, cycling once the best
// response has collapsed to 0 at least twice without absorption.
Outcome detect_limit(const LearningConfig& config, std::span<const StepRecord> steps);

LearningTrace run_learning(const LearningConfig& config);

// Runs both modes on common random numbers (shared per-step demand and
// priority realizations). Requires a fee in the unique some-make-AR regime.
ModeComparison compare_modes(const QueueParams& params, double fee, double beta, long steps,
                             long replications, std::uint64_t seed, double step_duration = 1.0);

}  // namespace arqg

#endif
