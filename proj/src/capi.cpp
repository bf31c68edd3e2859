#include "arqg/arqg.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "des_sim.hpp"
#include "dynamics.hpp"
#include "equilibrium.hpp"
#include "queue_core.hpp"
#include "revenue.hpp"

namespace {

thread_local std::string g_last_error;

int fail(int code, const char* what) {
  g_last_error = what;
  return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return ARQG_OK;
  } catch (const arqg::RegimeError& e) {
    return fail(ARQG_ERR_REGIME, e.what());
  } catch (const arqg::ParamDomainError& e) {
    return fail(ARQG_ERR_PARAM, e.what());
  } catch (const std::exception& e) {
    return fail(ARQG_ERR_INTERNAL, e.what());
  }
}

arqg::BeliefDistribution make_beliefs(arqg_belief_cdf cdf, void* ctx) {
  if (cdf == nullptr) return arqg::BeliefDistribution::uniform();
  return {[cdf, ctx](double x) { return cdf(x, ctx); }};
}

}  // namespace

struct arqg_trace {
  arqg::LearningTrace trace;
};

struct arqg_sim_report {
  std::vector<arqg::Customer> workload;
  arqg::SimReport report;
};

extern "C" {

const char* arqg_strerror(int code) {
  switch (code) {
    case ARQG_OK: return "ok";
    case ARQG_ERR_PARAM: return "parameter outside its domain";
    case ARQG_ERR_REGIME: return "operation undefined in this utilization regime";
    case ARQG_ERR_NULLPTR: return "required pointer argument was NULL";
    case ARQG_ERR_RANGE: return "index out of range";
    case ARQG_ERR_INTERNAL: return "internal error";
    default: return "unknown error code";
  }
}

const char* arqg_last_error(void) { return g_last_error.c_str(); }

int arqg_wait_ar(double lambda, double mu, double tau, double* out) {
  if (!out) return fail(ARQG_ERR_NULLPTR, "out is NULL");
  return guarded([&] { *out = arqg::wait_ar(arqg::QueueParams(lambda, mu), tau); });
}

int arqg_wait_noar(double lambda, double mu, double tau, double* out) {
  if (!out) return fail(ARQG_ERR_NULLPTR, "out is NULL");
  return guarded([&] { *out = arqg::wait_noar(arqg::QueueParams(lambda, mu), tau); });
}

int arqg_believed_wait_ar(double lambda, double mu, double belief, double p, double* out) {
  if (!out) return fail(ARQG_ERR_NULLPTR, "out is NULL");
  return guarded(
      [&] { *out = arqg::believed_wait_ar(arqg::QueueParams(lambda, mu), belief, p); });
}

int arqg_cost_for_threshold(double lambda, double mu, double tau, double* out) {
  if (!out) return fail(ARQG_ERR_NULLPTR, "out is NULL");
  return guarded([&] { *out = arqg::cost_for_threshold(arqg::QueueParams(lambda, mu), tau); });
}

int arqg_critical_costs(double lambda, double mu, double* lower, int* has_upper, double* upper) {
  if (!lower || !has_upper || !upper) return fail(ARQG_ERR_NULLPTR, "output pointer is NULL");
  return guarded([&] {
    const arqg::CriticalCosts cc = arqg::critical_costs(arqg::QueueParams(lambda, mu));
    *lower = cc.lower;
    *has_upper = cc.upper.has_value() ? 1 : 0;
    *upper = cc.upper.value_or(0.0);
  });
}

int arqg_find_equilibria(double lambda, double mu, double cost, double thresholds[2], int* count,
                         int* none_make_ar, int* tangent) {
  if (!thresholds || !count || !none_make_ar || !tangent) {
    return fail(ARQG_ERR_NULLPTR, "output pointer is NULL");
  }
  return guarded([&] {
    const arqg::EquilibriumSet eq =
        arqg::find_equilibria(arqg::QueueParams(lambda, mu), cost);
    *count = static_cast<int>(eq.some_make_ar.size());
    for (std::size_t i = 0; i < eq.some_make_ar.size(); ++i) thresholds[i] = eq.some_make_ar[i];
    *none_make_ar = eq.none_make_ar ? 1 : 0;
    *tangent = eq.tangent ? 1 : 0;
  });
}

int arqg_revenue_at(double lambda, double mu, double tau, double* out) {
  if (!out) return fail(ARQG_ERR_NULLPTR, "out is NULL");
  return guarded([&] { *out = arqg::revenue_at(arqg::QueueParams(lambda, mu), tau); });
}

int arqg_static_optimum(double lambda, double mu, double* tau_opt, double* fee, double* revenue,
                        int* multiple_equilibria) {
  if (!tau_opt || !fee || !revenue || !multiple_equilibria) {
    return fail(ARQG_ERR_NULLPTR, "output pointer is NULL");
  }
  return guarded([&] {
    const arqg::StaticOptimum so = arqg::static_optimum(arqg::QueueParams(lambda, mu));
    *tau_opt = so.tau_opt;
    *fee = so.fee;
    *revenue = so.revenue;
    *multiple_equilibria = so.multiple_equilibria ? 1 : 0;
  });
}

int arqg_conservative_optimum(double lambda, double mu, double* tau_g, double* fee,
                              double* revenue, int* fee_attained) {
  if (!tau_g || !fee || !revenue || !fee_attained) {
    return fail(ARQG_ERR_NULLPTR, "output pointer is NULL");
  }
  return guarded([&] {
    const arqg::ConservativeOptimum co =
        arqg::conservative_optimum(arqg::QueueParams(lambda, mu));
    *tau_g = co.tau_g;
    *fee = co.fee;
    *revenue = co.revenue;
    *fee_attained = co.fee_attained ? 1 : 0;
  });
}

int arqg_price_of_conservatism(double lambda, double mu, double* out) {
  if (!out) return fail(ARQG_ERR_NULLPTR, "out is NULL");
  return guarded([&] { *out = arqg::price_of_conservatism(arqg::QueueParams(lambda, mu)); });
}

int arqg_companion_threshold(double lambda, double mu, double tau_e1, double* out) {
  if (!out) return fail(ARQG_ERR_NULLPTR, "out is NULL");
  return guarded(
      [&] { *out = arqg::companion_threshold(arqg::QueueParams(lambda, mu), tau_e1); });
}

int arqg_dynamic_revenue(double lambda, double mu, double fee, arqg_belief_cdf cdf, void* ctx,
                         double* out, int* zero_under_action_learning) {
  if (!out || !zero_under_action_learning) {
    return fail(ARQG_ERR_NULLPTR, "output pointer is NULL");
  }
  return guarded([&] {
    const arqg::DynamicRevenue dr =
        arqg::dynamic_revenue(arqg::QueueParams(lambda, mu), fee, make_beliefs(cdf, ctx));
    *out = dr.value;
    *zero_under_action_learning = dr.zero_under_action_learning ? 1 : 0;
  });
}

int arqg_optimal_dynamic_fee(double lambda, double mu, arqg_belief_cdf cdf, void* ctx,
                             double* fee, double* revenue) {
  if (!fee || !revenue) return fail(ARQG_ERR_NULLPTR, "output pointer is NULL");
  return guarded([&] {
    const arqg::DynamicFee df =
        arqg::optimal_dynamic_fee(arqg::QueueParams(lambda, mu), make_beliefs(cdf, ctx));
    *fee = df.fee;
    *revenue = df.revenue;
  });
}

int arqg_decide(double lambda, double mu, double fee, double belief, double p, int* make_ar) {
  if (!make_ar) return fail(ARQG_ERR_NULLPTR, "out is NULL");
  return guarded([&] {
    *make_ar = arqg::decide(arqg::QueueParams(lambda, mu), fee, belief, p) ==
                       arqg::ActionChoice::make_ar
                   ? 1
                   : 0;
  });
}

int arqg_best_response(double lambda, double mu, double fee, double belief, double* out) {
  if (!out) return fail(ARQG_ERR_NULLPTR, "out is NULL");
  return guarded(
      [&] { *out = arqg::best_response(arqg::QueueParams(lambda, mu), fee, belief); });
}

int arqg_learning_run(double lambda, double mu, double fee, int mode, double initial_belief,
                      long steps, double step_duration, uint64_t seed, arqg_trace** out) {
  if (!out) return fail(ARQG_ERR_NULLPTR, "out is NULL");
  if (mode != ARQG_MODE_STRATEGY && mode != ARQG_MODE_ACTION) {
    return fail(ARQG_ERR_PARAM, "mode must be ARQG_MODE_STRATEGY or ARQG_MODE_ACTION");
  }
  return guarded([&] {
    arqg::LearningConfig config{arqg::QueueParams(lambda, mu),
                                fee,
                                mode == ARQG_MODE_STRATEGY ? arqg::LearningMode::strategy
                                                           : arqg::LearningMode::action,
                                initial_belief,
                                steps,
                                step_duration,
                                seed};
    *out = new arqg_trace{arqg::run_learning(config)};
  });
}

void arqg_trace_free(arqg_trace* trace) { delete trace; }

long arqg_trace_length(const arqg_trace* trace) {
  return trace ? static_cast<long>(trace->trace.steps.size()) : 0;
}

int arqg_trace_step(const arqg_trace* trace, long i, arqg_step_record* out) {
  if (!trace || !out) return fail(ARQG_ERR_NULLPTR, "trace or out is NULL");
  if (i < 0 || i >= static_cast<long>(trace->trace.steps.size())) {
    return fail(ARQG_ERR_RANGE, "step index out of range");
  }
  const arqg::StepRecord& rec = trace->trace.steps[static_cast<std::size_t>(i)];
  *out = {rec.index, rec.belief_in, rec.realized_threshold, rec.demand, rec.reservations,
          rec.belief_out};
  return ARQG_OK;
}

int arqg_trace_outcome(const arqg_trace* trace, int* outcome, double* limit, int* absorbing) {
  if (!trace || !outcome || !limit || !absorbing) {
    return fail(ARQG_ERR_NULLPTR, "trace or output pointer is NULL");
  }
  switch (trace->trace.outcome.kind) {
    case arqg::OutcomeKind::converged: *outcome = ARQG_OUTCOME_CONVERGED; break;
    case arqg::OutcomeKind::cycling: *outcome = ARQG_OUTCOME_CYCLING; break;
    case arqg::OutcomeKind::max_steps: *outcome = ARQG_OUTCOME_MAX_STEPS; break;
  }
  *limit = trace->trace.outcome.limit;
  *absorbing = trace->trace.outcome.absorbing ? 1 : 0;
  return ARQG_OK;
}

int arqg_trace_mean_ar_fraction(const arqg_trace* trace, double* out) {
  if (!trace || !out) return fail(ARQG_ERR_NULLPTR, "trace or out is NULL");
  *out = trace->trace.mean_ar_fraction;
  return ARQG_OK;
}

int arqg_compare_modes(double lambda, double mu, double fee, double beta, long steps,
                       long replications, double step_duration, uint64_t seed,
                       arqg_mode_comparison* out) {
  if (!out) return fail(ARQG_ERR_NULLPTR, "out is NULL");
  return guarded([&] {
    const arqg::ModeComparison cmp = arqg::compare_modes(
        arqg::QueueParams(lambda, mu), fee, beta, steps, replications, seed, step_duration);
    *out = {cmp.strategy_ar_fraction, cmp.action_ar_fraction, cmp.difference,
            cmp.t_statistic,          cmp.p_value,            cmp.dominance_fraction,
            cmp.steps,                cmp.replications};
  });
}

int arqg_simulate(double lambda, double mu, double tau, double horizon, double warmup_fraction,
                  uint64_t seed, int engine, double band_width, arqg_sim_report** out) {
  if (!out) return fail(ARQG_ERR_NULLPTR, "out is NULL");
  if (engine != ARQG_ENGINE_PRIORITY && engine != ARQG_ENGINE_CALENDAR &&
      engine != ARQG_ENGINE_BOTH) {
    return fail(ARQG_ERR_PARAM, "unknown engine");
  }
  return guarded([&] {
    arqg::SimConfig config{arqg::QueueParams(lambda, mu),
                           tau,
                           horizon,
                           warmup_fraction,
                           seed,
                           engine == ARQG_ENGINE_PRIORITY  ? arqg::SimEngine::priority
                           : engine == ARQG_ENGINE_CALENDAR ? arqg::SimEngine::calendar
                                                            : arqg::SimEngine::both,
                           band_width};
    std::vector<arqg::Customer> workload = arqg::generate_workload(config);
    arqg::SimReport report = config.engine == arqg::SimEngine::calendar
                                 ? arqg::run_calendar(config, workload)
                                 : arqg::run_priority(config, workload);
    if (config.engine == arqg::SimEngine::both) {
      const arqg::SimReport other = arqg::run_calendar(config, workload);
      report.engine_name = "both";
      report.equivalence.checked = true;
      double max_delta = 0.0;
      for (std::size_t k = 0; k < report.departures.size(); ++k) {
        max_delta = std::max(max_delta, std::fabs(report.departures[k] - other.departures[k]));
      }
      report.equivalence.max_departure_delta = max_delta;
      report.equivalence.equivalent = max_delta <= 1e-9;
    }
    *out = new arqg_sim_report{std::move(workload), std::move(report)};
  });
}

void arqg_sim_report_free(arqg_sim_report* report) { delete report; }

long arqg_sim_band_count(const arqg_sim_report* report) {
  return report ? static_cast<long>(report->report.ar_bands.size()) : 0;
}

int arqg_sim_band(const arqg_sim_report* report, long i, arqg_band_stats* out) {
  if (!report || !out) return fail(ARQG_ERR_NULLPTR, "report or out is NULL");
  if (i < 0 || i >= static_cast<long>(report->report.ar_bands.size())) {
    return fail(ARQG_ERR_RANGE, "band index out of range");
  }
  const arqg::BandStats& b = report->report.ar_bands[static_cast<std::size_t>(i)];
  *out = {b.center, b.lo, b.hi, b.count, b.mean_wait, b.ci_half};
  return ARQG_OK;
}

int arqg_sim_noar(const arqg_sim_report* report, arqg_band_stats* out) {
  if (!report || !out) return fail(ARQG_ERR_NULLPTR, "report or out is NULL");
  const arqg::BandStats& b = report->report.noar;
  *out = {0.0, 0.0, 0.0, b.count, b.mean_wait, b.ci_half};
  return ARQG_OK;
}

int arqg_sim_utilization(const arqg_sim_report* report, double* estimate, double* ci_half) {
  if (!report || !estimate || !ci_half) {
    return fail(ARQG_ERR_NULLPTR, "report or output pointer is NULL");
  }
  *estimate = report->report.utilization_estimate;
  *ci_half = report->report.utilization_ci_half;
  return ARQG_OK;
}

int arqg_sim_counts(const arqg_sim_report* report, long* total, long* measured) {
  if (!report || !total || !measured) {
    return fail(ARQG_ERR_NULLPTR, "report or output pointer is NULL");
  }
  *total = report->report.customers_total;
  *measured = report->report.customers_measured;
  return ARQG_OK;
}

int arqg_sim_equivalence(const arqg_sim_report* report, int* checked, int* equivalent,
                         double* max_departure_delta) {
  if (!report || !checked || !equivalent || !max_departure_delta) {
    return fail(ARQG_ERR_NULLPTR, "report or output pointer is NULL");
  }
  *checked = report->report.equivalence.checked ? 1 : 0;
  *equivalent = report->report.equivalence.equivalent ? 1 : 0;
  *max_departure_delta = report->report.equivalence.max_departure_delta;
  return ARQG_OK;
}

long arqg_sim_customer_count(const arqg_sim_report* report) {
  return report ? static_cast<long>(report->workload.size()) : 0;
}

int arqg_sim_customer_at(const arqg_sim_report* report, long i, arqg_sim_customer* out) {
  if (!report || !out) return fail(ARQG_ERR_NULLPTR, "report or out is NULL");
  if (i < 0 || i >= static_cast<long>(report->workload.size())) {
    return fail(ARQG_ERR_RANGE, "customer index out of range");
  }
  const arqg::Customer& c = report->workload[static_cast<std::size_t>(i)];
  const double departure = report->report.departures[static_cast<std::size_t>(i)];
  const double service = report->report.config.params.service_time();
  *out = {c.id,
          c.potential_priority,
          c.makes_ar ? 1 : 0,
          c.arrival_time,
          departure,
          std::max(0.0, departure - c.arrival_time - service)};
  return ARQG_OK;
}

int arqg_sim_validate(const arqg_sim_report* report, int* band_verdicts, int* noar_verdict,
                      int* overall_pass) {
  if (!report || !noar_verdict || !overall_pass) {
    return fail(ARQG_ERR_NULLPTR, "report or output pointer is NULL");
  }
  return guarded([&] {
    const arqg::WaitValidation v = arqg::validate_waits(
        report->report, report->report.config.params, report->report.config.threshold);
    const auto code = [](arqg::BandVerdict b) {
      switch (b) {
        case arqg::BandVerdict::pass: return ARQG_BAND_PASS;
        case arqg::BandVerdict::fail: return ARQG_BAND_FAIL;
        default: return ARQG_BAND_INCONCLUSIVE;
      }
    };
    if (band_verdicts) {
      for (std::size_t i = 0; i < v.ar_band_verdicts.size(); ++i) {
        band_verdicts[i] = code(v.ar_band_verdicts[i]);
      }
    }
    *noar_verdict = code(v.noar_verdict);
    *overall_pass = v.overall_pass ? 1 : 0;
  });
}

}  // extern "C"
