#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "des_sim.hpp"

using namespace arqg;

namespace {

const QueueParams kBase(45.0, 60.0);

Customer make_customer(long id, double arrival, double p, bool ar) {
  return Customer{id, -p, arrival, p, ar};
}

}  // namespace

TEST_CASE("workload statistics") {
  SimConfig config{kBase, 0.4, 1000.0, 0.2, 17, SimEngine::priority, 0.05};
  const std::vector<Customer> workload = generate_workload(config);
  const double n = static_cast<double>(workload.size());
  // Poisson(45000) within 5 sigma.
  CHECK(std::fabs(n - 45000.0) < 5.0 * std::sqrt(45000.0));
  long ar = 0;
  double prev = 0.0;
  for (const Customer& c : workload) {
    CHECK(c.arrival_time > prev);
    CHECK(c.potential_priority >= 0.0);
    CHECK(c.potential_priority <= 1.0);
    CHECK(c.makes_ar == (c.potential_priority > 0.4));
    if (c.makes_ar) ++ar;
    prev = c.arrival_time;
  }
  const double frac = static_cast<double>(ar) / n;
  CHECK(std::fabs(frac - 0.6) < 5.0 * std::sqrt(0.6 * 0.4 / n));
}

TEST_CASE("workload threshold extremes") {
  SimConfig config{kBase, 1.0, 50.0, 0.0, 3, SimEngine::priority, 0.05};
  for (const Customer& c : generate_workload(config)) CHECK(!c.makes_ar);
  config.threshold = 0.0;
  for (const Customer& c : generate_workload(config)) CHECK(c.makes_ar);
}

TEST_CASE("workload is deterministic per seed") {
  SimConfig config{kBase, 0.5, 100.0, 0.2, 21, SimEngine::priority, 0.05};
  const std::vector<Customer> a = generate_workload(config);
  const std::vector<Customer> b = generate_workload(config);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].arrival_time == b[i].arrival_time);
    CHECK(a[i].potential_priority == b[i].potential_priority);
  }
}

TEST_CASE("single customer is served immediately") {
  SimConfig config{QueueParams(0.5, 1.0), 0.5, 10.0, 0.0, 0, SimEngine::priority, 0.05};
  const std::vector<Customer> workload{make_customer(0, 2.0, 0.8, true)};
  const SimReport pr = run_priority(config, workload);
  const SimReport cal = run_calendar(config, workload);
  CHECK(pr.departures[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(cal.departures[0] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("three-customer preemption scenario") {
  // Customer 2 starts first but is preempted by customer 1, which reserved
  // earlier (higher potential priority); customer 3 waits for both.
  SimConfig config{QueueParams(0.5, 1.0), 0.4, 10.0, 0.0, 0, SimEngine::both, 0.05};
  const std::vector<Customer> workload{
      make_customer(0, 1.0, 0.5, true),   // customer 2
      make_customer(1, 1.2, 0.3, false),  // customer 3
      make_customer(2, 1.5, 0.9, true),   // customer 1
  };
  const SimReport pr = run_priority(config, workload);
  const SimReport cal = run_calendar(config, workload);
  for (const SimReport* rep : {&pr, &cal}) {
    CHECK(rep->departures[2] == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(rep->departures[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(rep->departures[1] == doctest::Approx(4.0).epsilon(1e-12));
  }
}

TEST_CASE("engines agree on random workloads") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SimConfig config{kBase, 0.5, 100.0, 0.0, seed, SimEngine::both, 0.05};
    const SimReport report = simulate(config);
    CHECK(report.equivalence.checked);
    CHECK(report.equivalence.equivalent);
    CHECK(report.equivalence.max_departure_delta <= 1e-9);
  }
}

TEST_CASE("non-AR departures respect arrival order") {
  SimConfig config{kBase, 0.5, 200.0, 0.0, 9, SimEngine::priority, 0.05};
  const std::vector<Customer> workload = generate_workload(config);
  const SimReport report = run_priority(config, workload);
  double prev = 0.0;
  for (std::size_t i = 0; i < workload.size(); ++i) {
    if (workload[i].makes_ar) continue;
    CHECK(report.departures[i] > prev);
    prev = report.departures[i];
  }
}

TEST_CASE("PK degeneration at threshold one") {
  SimConfig config{kBase, 1.0, 20000.0, 0.2, 31, SimEngine::priority, 0.05};
  const SimReport report = simulate(config);
  CHECK(report.ar_bands.empty());
  CHECK(report.noar.mean_wait == doctest::Approx(0.025).epsilon(0.05));
  const WaitValidation v = validate_waits(report, kBase, 1.0);
  CHECK(v.noar_verdict == BandVerdict::pass);
}

TEST_CASE("band waits decrease with priority") {
  SimConfig config{kBase, 0.5, 20000.0, 0.2, 13, SimEngine::priority, 0.05};
  const SimReport report = simulate(config);
  REQUIRE(report.ar_bands.size() >= 5);
  for (std::size_t i = 1; i < report.ar_bands.size(); ++i) {
    CHECK(report.ar_bands[i].mean_wait < report.ar_bands[i - 1].mean_wait);
  }
  CHECK(report.utilization_estimate == doctest::Approx(0.75).epsilon(0.03));
}

TEST_CASE("validation passes on a long run and fails as a negative control") {
  SimConfig config{kBase, 0.5, 50000.0, 0.2, 1, SimEngine::priority, 0.05};
  const SimReport report = simulate(config);
  CHECK(validate_waits(report, kBase, 0.5).overall_pass);
  // Wrong analytic targets must be rejected.
  CHECK(!validate_waits(report, QueueParams(30.0, 60.0), 0.5).overall_pass);
}

TEST_CASE("sparse bands are inconclusive, not failed") {
  SimConfig config{kBase, 0.5, 5.0, 0.0, 2, SimEngine::priority, 0.05};
  const SimReport report = simulate(config);
  const WaitValidation v = validate_waits(report, kBase, 0.5);
  for (BandVerdict verdict : v.ar_band_verdicts) CHECK(verdict == BandVerdict::inconclusive);
  CHECK(v.overall_pass);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(
      generate_workload(SimConfig{kBase, 1.5, 100.0, 0.2, 0, SimEngine::priority, 0.05}),
      ParamDomainError);
  CHECK_THROWS_AS(
      generate_workload(SimConfig{kBase, 0.5, -1.0, 0.2, 0, SimEngine::priority, 0.05}),
      ParamDomainError);
  CHECK_THROWS_AS(
      generate_workload(SimConfig{kBase, 0.5, 100.0, 1.0, 0, SimEngine::priority, 0.05}),
      ParamDomainError);
  CHECK_THROWS_AS(
      generate_workload(SimConfig{kBase, 0.5, 100.0, 0.2, 0, SimEngine::priority, 0.0}),
      ParamDomainError);
}
