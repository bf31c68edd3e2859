#ifndef ARQG_DES_SIM_HPP
#define ARQG_DES_SIM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "queue_core.hpp"

namespace arqg {

struct Customer {
  long id;
  double request_time;        // in [-1, 0]; -potential_priority with T = 1
  double arrival_time;        // desired service start, > 0
  double potential_priority;  // uniform transform of the request time
  bool makes_ar;              // potential_priority > threshold
};

enum class SimEngine { priority, calendar, both };

struct SimConfig {
  QueueParams params;
  double threshold;
  double horizon;
  double warmup_fraction = 0.2;  // customers arriving before warmup*horizon are dropped
  std::uint64_t seed = 0;
  SimEngine engine = SimEngine::priority;
  double band_width = 0.05;  // AR statistics bands are centered at multiples of this
};

struct BandStats {
  double center;
  double lo, hi;  // band covers [lo, hi)
  long count = 0;
  double mean_wait = 0.0;
  double ci_half = 0.0;  // 95% half-width
};

struct EquivalenceCheck {
  bool checked = false;
  bool equivalent = false;
  double max_departure_delta = 0.0;
};

struct SimReport {
  explicit SimReport(SimConfig c) : config(std::move(c)) {}

  SimConfig config;
  std::string engine_name;
  std::vector<BandStats> ar_bands;  // only bands with at least one sample
  BandStats noar;
  double utilization_estimate = 0.0;
  double utilization_ci_half = 0.0;
  long customers_total = 0;
  long customers_measured = 0;
  EquivalenceCheck equivalence;
  // Departure time per workload index; kept for dumps and equivalence tests.
  std::vector<double> departures;
};

enum class BandVerdict { pass, fail, inconclusive };

struct WaitValidation {
  std::vector<BandVerdict> ar_band_verdicts;  // aligned with report.ar_bands
  BandVerdict noar_verdict = BandVerdict::inconclusive;
  bool overall_pass = true;  // no band failed
};

std::vector<Customer> generate_workload(const SimConfig& config);

// Preemptive-resume single server; effective priority is the potential
// priority for AR customers and 0 for the rest, ties FCFS.
SimReport run_priority(const SimConfig& config, const std::vector<Customer>& workload);

// Reservation-calendar semantics: AR customers book the earliest free
// server time at or after their arrival in request-time order; the rest
// are served FCFS, work-conserving, over unreserved instants.
SimReport run_calendar(const SimConfig& config, const std::vector<Customer>& workload);

// Generates the workload and runs the configured engine(s). With
// SimEngine::both the priority report is returned, carrying the
// departure-time equivalence verdict against the calendar engine.
SimReport simulate(const SimConfig& config);

// Compares every band against the closed-form waits: a band fails when the
// gap exceeds max(3 CI half-widths, 3% relative); bands with too few
// samples are inconclusive.
WaitValidation validate_waits(const SimReport& report, const QueueParams& params,
                              double threshold);

}  // namespace arqg

#endif
