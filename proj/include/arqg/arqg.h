/*
 * arqg -- advance-reservation queueing game toolkit.
 *
 * C interface to the analysis core: closed-form waiting times and
 * equilibria of the preemptive-resume M/D/1 reservation game, revenue
 * optimization, best-response learning dynamics, and the discrete-event
 * validation engines. All functions return ARQG_OK (0) on success or a
 * nonzero error code; arqg_last_error() describes the most recent failure
 * on the calling thread. Opaque handles must be released with the matching
 * *_free function.
 */
#ifndef ARQG_H
#define ARQG_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define ARQG_OK 0
#define ARQG_ERR_PARAM 1    /* parameter outside its domain */
#define ARQG_ERR_REGIME 2   /* operation undefined in this utilization regime */
#define ARQG_ERR_NULLPTR 3  /* required pointer argument was NULL */
#define ARQG_ERR_RANGE 4    /* index out of range */
#define ARQG_ERR_INTERNAL 5

const char* arqg_strerror(int code);
/* Message for the last error raised on this thread; empty string if none. */
const char* arqg_last_error(void);

/* ---- closed-form waits (threshold customer) ---- */

int arqg_wait_ar(double lambda, double mu, double tau, double* out);
int arqg_wait_noar(double lambda, double mu, double tau, double* out);
int arqg_believed_wait_ar(double lambda, double mu, double belief, double p, double* out);

/* ---- equilibrium structure ---- */

int arqg_cost_for_threshold(double lambda, double mu, double tau, double* out);
/* has_upper is 0 when utilization <= 1/2 (monotone cost curve). */
int arqg_critical_costs(double lambda, double mu, double* lower, int* has_upper, double* upper);
/* thresholds must have room for 2 values; count in {0,1,2}; tangent is 1
 * when the cost sits exactly at the peak of the cost curve. */
int arqg_find_equilibria(double lambda, double mu, double cost, double thresholds[2],
                         int* count, int* none_make_ar, int* tangent);

/* ---- revenue ---- */

int arqg_revenue_at(double lambda, double mu, double tau, double* out);
int arqg_static_optimum(double lambda, double mu, double* tau_opt, double* fee, double* revenue,
                        int* multiple_equilibria);
/* Requires utilization > 1/2. The fee is the supremum C(1); the guaranteed
 * revenue is approached, not attained (fee_attained is always 0). */
int arqg_conservative_optimum(double lambda, double mu, double* tau_g, double* fee,
                              double* revenue, int* fee_attained);
int arqg_price_of_conservatism(double lambda, double mu, double* out);
int arqg_companion_threshold(double lambda, double mu, double tau_e1, double* out);

/* P(belief < x); must be nondecreasing with cdf(0) = 0 and cdf(1) = 1.
 * Pass NULL for the uniform distribution. */
typedef double (*arqg_belief_cdf)(double x, void* ctx);

/* zero_under_action_learning flags fees whose revenue collapses to zero
 * under action-learning (a none-make-AR equilibrium exists). */
int arqg_dynamic_revenue(double lambda, double mu, double fee, arqg_belief_cdf cdf, void* ctx,
                         double* out, int* zero_under_action_learning);
int arqg_optimal_dynamic_fee(double lambda, double mu, arqg_belief_cdf cdf, void* ctx,
                             double* fee, double* revenue);

/* ---- best-response dynamics ---- */

#define ARQG_MODE_STRATEGY 0
#define ARQG_MODE_ACTION 1

#define ARQG_OUTCOME_CONVERGED 0
#define ARQG_OUTCOME_CYCLING 1
#define ARQG_OUTCOME_MAX_STEPS 2

/* make_ar is 1 for AR, 0 for AR' (ties go to AR'). */
int arqg_decide(double lambda, double mu, double fee, double belief, double p, int* make_ar);
int arqg_best_response(double lambda, double mu, double fee, double belief, double* out);

typedef struct arqg_trace arqg_trace;

typedef struct arqg_step_record {
  long index;                /* 1-based */
  double belief_in;
  double realized_threshold;
  long demand;               /* -1 in strategy mode */
  long reservations;         /* -1 in strategy mode */
  double belief_out;
} arqg_step_record;

int arqg_learning_run(double lambda, double mu, double fee, int mode, double initial_belief,
                      long steps, double step_duration, uint64_t seed, arqg_trace** out);
void arqg_trace_free(arqg_trace* trace);
long arqg_trace_length(const arqg_trace* trace);
int arqg_trace_step(const arqg_trace* trace, long i, arqg_step_record* out);
/* limit is meaningful only when the outcome is ARQG_OUTCOME_CONVERGED. */
int arqg_trace_outcome(const arqg_trace* trace, int* outcome, double* limit, int* absorbing);
int arqg_trace_mean_ar_fraction(const arqg_trace* trace, double* out);

typedef struct arqg_mode_comparison {
  double strategy_ar_fraction;
  double action_ar_fraction;
  double difference;
  double t_statistic;        /* one-sided Welch, per-step reservation counts */
  double p_value;
  double dominance_fraction; /* steps with action reservations >= strategy */
  long steps;
  long replications;
} arqg_mode_comparison;

/* Both modes replayed on common random numbers. The fee must admit a unique
 * some-make-AR equilibrium. */
int arqg_compare_modes(double lambda, double mu, double fee, double beta, long steps,
                       long replications, double step_duration, uint64_t seed,
                       arqg_mode_comparison* out);

/* ---- discrete-event simulation ---- */

#define ARQG_ENGINE_PRIORITY 0
#define ARQG_ENGINE_CALENDAR 1
#define ARQG_ENGINE_BOTH 2

#define ARQG_BAND_PASS 0
#define ARQG_BAND_FAIL 1
#define ARQG_BAND_INCONCLUSIVE 2

typedef struct arqg_sim_report arqg_sim_report;

typedef struct arqg_band_stats {
  double center;
  double lo, hi;
  long count;
  double mean_wait;
  double ci_half;            /* 95% half-width */
} arqg_band_stats;

typedef struct arqg_sim_customer {
  long id;
  double potential_priority;
  int makes_ar;
  double arrival;
  double departure;
  double wait;
} arqg_sim_customer;

int arqg_simulate(double lambda, double mu, double tau, double horizon, double warmup_fraction,
                  uint64_t seed, int engine, double band_width, arqg_sim_report** out);
void arqg_sim_report_free(arqg_sim_report* report);
long arqg_sim_band_count(const arqg_sim_report* report);
int arqg_sim_band(const arqg_sim_report* report, long i, arqg_band_stats* out);
int arqg_sim_noar(const arqg_sim_report* report, arqg_band_stats* out);
int arqg_sim_utilization(const arqg_sim_report* report, double* estimate, double* ci_half);
int arqg_sim_counts(const arqg_sim_report* report, long* total, long* measured);
/* checked is 0 unless the simulation ran with ARQG_ENGINE_BOTH. */
int arqg_sim_equivalence(const arqg_sim_report* report, int* checked, int* equivalent,
                         double* max_departure_delta);
long arqg_sim_customer_count(const arqg_sim_report* report);
int arqg_sim_customer_at(const arqg_sim_report* report, long i, arqg_sim_customer* out);
/* Per-band verdicts against the closed-form waits. band_verdicts may be
 * NULL or an array sized arqg_sim_band_count(report); the non-AR class is
 * reported separately through noar_verdict. */
int arqg_sim_validate(const arqg_sim_report* report, int* band_verdicts, int* noar_verdict,
                      int* overall_pass);

#ifdef __cplusplus
}
#endif

#endif /* ARQG_H */
