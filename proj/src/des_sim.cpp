#include "des_sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <queue>

#include "rng.hpp"

namespace arqg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEquivalenceTol = 1e-9;
constexpr long kMinBandSamples = 30;

void validate_sim_config(const SimConfig& config) {
  require_unit_interval(config.threshold, "threshold");
  if (!(config.horizon > 0.0) || !std::isfinite(config.horizon)) {
    throw ParamDomainError("horizon must be positive and finite");
  }
  if (!(config.warmup_fraction >= 0.0 && config.warmup_fraction < 1.0)) {
    throw ParamDomainError("warmup fraction must lie in [0, 1)");
  }
  if (!(config.band_width > 0.0 && config.band_width <= 1.0)) {
    throw ParamDomainError("band width must lie in (0, 1]");
  }
}

std::vector<double> priority_departures(const QueueParams& params,
                                        const std::vector<Customer>& workload) {
  const long n = static_cast<long>(workload.size());
  const double service = params.service_time();
  std::vector<double> remaining(workload.size(), service);
  std::vector<double> departure(workload.size(), 0.0);

  std::priority_queue<std::pair<double, long>> ar_waiting;  // by potential priority
  std::deque<long> fifo;                                    // non-AR, FCFS
  const auto prio = [&](long k) {
    return workload[k].makes_ar ? workload[k].potential_priority : 0.0;
  };

  long i = 0, cur = -1;
  double now = 0.0, seg_start = 0.0;
  while (cur >= 0 || i < n || !ar_waiting.empty() || !fifo.empty()) {
    const double next_completion = cur >= 0 ? seg_start + remaining[cur] : kInf;
    const double next_arrival = i < n ? workload[i].arrival_time : kInf;
    if (next_arrival <= next_completion) {
      now = next_arrival;
      const long k = i++;
      if (cur < 0) {
        cur = k;
        seg_start = now;
      } else if (prio(k) > prio(cur)) {
        remaining[cur] -= now - seg_start;
        if (workload[cur].makes_ar) {
          ar_waiting.emplace(prio(cur), cur);
        } else {
          fifo.push_front(cur);  // it arrived before anyone already waiting
        }
        cur = k;
        seg_start = now;
      } else if (workload[k].makes_ar) {
        ar_waiting.emplace(prio(k), k);
      } else {
        fifo.push_back(k);
      }
    } else {
      now = next_completion;
      departure[cur] = now;
      if (!ar_waiting.empty()) {
        cur = ar_waiting.top().second;
        ar_waiting.pop();
      } else if (!fifo.empty()) {
        cur = fifo.front();
        fifo.pop_front();
      } else {
        cur = -1;
      }
      seg_start = now;
    }
  }
  return departure;
}

// Walks free gaps of the reservation set from time t, taking `need` units of
// server time; returns the instant the work completes. When `reserve` is set
// the taken intervals are inserted (coalescing with flush neighbors).
double allocate(std::map<double, double>& reservations, double t, double need, bool reserve) {
  while (true) {
    auto it = reservations.upper_bound(t);
    if (it != reservations.begin()) {
      auto prev = std::prev(it);
      if (prev->second > t) {
        t = prev->second;
        continue;
      }
    }
    const double gap_end = it == reservations.end() ? kInf : it->first;
    const double take = std::min(need, gap_end - t);
    const double lo = t, hi = t + take;
    if (reserve) {
      auto node = reservations.end();
      if (it != reservations.begin()) {
        auto prev = std::prev(it);
        if (prev->second == lo) {
          prev->second = hi;
          node = prev;
        }
      }
      if (node == reservations.end()) node = reservations.emplace_hint(it, lo, hi);
      if (it != reservations.end() && it->first == hi) {
        node->second = it->second;
        reservations.erase(it);
      }
    }
    need -= take;
    if (need <= 0.0) return hi;
    t = gap_end;
  }
}

std::vector<double> calendar_departures(const QueueParams& params,
                                        const std::vector<Customer>& workload) {
  const double service = params.service_time();
  std::vector<double> departure(workload.size(), 0.0);

  // Reservations are granted in request-time order, i.e. decreasing
  // potential priority; every booking sees only earlier (higher-p) ones.
  std::vector<long> ar_order;
  for (long k = 0; k < static_cast<long>(workload.size()); ++k) {
    if (workload[k].makes_ar) ar_order.push_back(k);
  }
  std::sort(ar_order.begin(), ar_order.end(), [&](long a, long b) {
    return workload[a].potential_priority > workload[b].potential_priority;
  });

  std::map<double, double> reservations;
  for (long k : ar_order) {
    departure[k] = allocate(reservations, workload[k].arrival_time, service, true);
  }

  // Non-AR customers share the unreserved instants FCFS, work-conserving:
  // each starts accumulating free time once present and alone in its class.
  double cursor = 0.0;
  for (long k = 0; k < static_cast<long>(workload.size()); ++k) {
    if (workload[k].makes_ar) continue;
    const double t = std::max(workload[k].arrival_time, cursor);
    departure[k] = allocate(reservations, t, service, false);
    cursor = departure[k];
  }
  return departure;
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
  double ci_half() const {
    if (n < 2) return 0.0;
    return 1.96 * std::sqrt(m2 / (n - 1)) / std::sqrt(static_cast<double>(n));
  }
};

SimReport build_report(const SimConfig& config, const std::vector<Customer>& workload,
                       std::vector<double> departures, std::string engine_name) {
  const double service = config.params.service_time();
  const double cutoff = config.warmup_fraction * config.horizon;
  const double w = config.band_width;

  std::map<long, Welford> bands;
  Welford noar;
  long measured = 0;
  for (std::size_t k = 0; k < workload.size(); ++k) {
    const Customer& c = workload[k];
    if (c.arrival_time < cutoff) continue;
    ++measured;
    const double wait = std::max(0.0, departures[k] - c.arrival_time - service);
    if (c.makes_ar) {
      bands[std::lround(c.potential_priority / w)].add(wait);
    } else {
      noar.add(wait);
    }
  }

  SimReport report(config);
  report.engine_name = std::move(engine_name);
  report.customers_total = static_cast<long>(workload.size());
  report.customers_measured = measured;
  for (const auto& [idx, acc] : bands) {
    BandStats b;
    b.center = static_cast<double>(idx) * w;
    b.lo = b.center - 0.5 * w;
    b.hi = b.center + 0.5 * w;
    b.count = acc.n;
    b.mean_wait = acc.mean;
    b.ci_half = acc.ci_half();
    report.ar_bands.push_back(b);
  }
  report.noar.count = noar.n;
  report.noar.mean_wait = noar.mean;
  report.noar.ci_half = noar.ci_half();

  const double total_work = static_cast<double>(workload.size()) * service;
  report.utilization_estimate = total_work / config.horizon;
  report.utilization_ci_half =
      1.96 * std::sqrt(static_cast<double>(workload.size())) * service / config.horizon;
  report.departures = std::move(departures);
  return report;
}

}  // namespace

std::vector<Customer> generate_workload(const SimConfig& config) {
  validate_sim_config(config);
  CounterRng rng = CounterRng::substream(config.seed, 0xDE5);
  std::vector<Customer> workload;
  double t = 0.0;
  long id = 0;
  while (true) {
    t += rng.exponential(config.params.arrival_rate);
    if (t > config.horizon) break;
    Customer c;
    c.id = id++;
    c.arrival_time = t;
    c.potential_priority = rng.next_double();
    // Any continuous request-time law reduces to this after the probability
    // integral transform; the calendar engine only needs the ordering.
    c.request_time = -c.potential_priority;
    c.makes_ar = c.potential_priority > config.threshold;
    workload.push_back(c);
  }
  return workload;
}

SimReport run_priority(const SimConfig& config, const std::vector<Customer>& workload) {
  validate_sim_config(config);
  return build_report(config, workload, priority_departures(config.params, workload),
                      "priority");
}

SimReport run_calendar(const SimConfig& config, const std::vector<Customer>& workload) {
  validate_sim_config(config);
  return build_report(config, workload, calendar_departures(config.params, workload),
                      "calendar");
}

SimReport simulate(const SimConfig& config) {
  const std::vector<Customer> workload = generate_workload(config);
  if (config.engine == SimEngine::calendar) return run_calendar(config, workload);
  SimReport report = run_priority(config, workload);
  if (config.engine == SimEngine::both) {
    const SimReport other = run_calendar(config, workload);
    report.engine_name = "both";
    report.equivalence.checked = true;
    double max_delta = 0.0;
    for (std::size_t k = 0; k < report.departures.size(); ++k) {
      max_delta = std::max(max_delta, std::fabs(report.departures[k] - other.departures[k]));
    }
    report.equivalence.max_departure_delta = max_delta;
    report.equivalence.equivalent = max_delta <= kEquivalenceTol;
  }
  return report;
}

WaitValidation validate_waits(const SimReport& report, const QueueParams& params,
                              double threshold) {
  require_unit_interval(threshold, "threshold");
  WaitValidation out;
  const auto verdict = [](const BandStats& band, double analytic) {
    if (band.count < kMinBandSamples) return BandVerdict::inconclusive;
    const double tol = std::max(3.0 * band.ci_half, 0.03 * analytic);
    return std::fabs(band.mean_wait - analytic) <= tol ? BandVerdict::pass : BandVerdict::fail;
  };
  for (const BandStats& band : report.ar_bands) {
    // Edge bands are truncated by the threshold and by p = 1; compare
    // against the midpoint of the part that can actually hold samples.
    const double lo = std::max(band.lo, threshold);
    const double hi = std::min(band.hi, 1.0);
    const double analytic = wait_ar(params, 0.5 * (lo + hi));
    const BandVerdict v = verdict(band, analytic);
    out.ar_band_verdicts.push_back(v);
    if (v == BandVerdict::fail) out.overall_pass = false;
  }
  out.noar_verdict = verdict(report.noar, wait_noar(params, threshold));
  if (out.noar_verdict == BandVerdict::fail) out.overall_pass = false;
  return out;
}

}  // namespace arqg
