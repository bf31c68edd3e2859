// arqg-cli: command-line front end over the arqg C API.
//
// Subcommands: analyze, equilibria, sweep, learn, simulate. JSON payloads go
// to stdout (schema-versioned envelope); CSV goes to stdout or --out. Exit
// codes: 0 success, 2 parameter error, 3 I/O error, 4 internal failure.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "arqg/arqg.h"

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr const char* kSchemaVersion = "1.0";
constexpr int kExitParam = 2;
constexpr int kExitIo = 3;
constexpr int kExitInternal = 4;

std::string num_str(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// 12 significant digits, round-tripped so the JSON writer emits them cleanly.
double num(double x) { return std::strtod(num_str(x).c_str(), nullptr); }

[[noreturn]] void die(int code, const std::string& message) {
  std::cerr << "arqg-cli: " << message << "\n";
  std::exit(code);
}

void check(int rc) {
  if (rc == ARQG_OK) return;
  const char* detail = arqg_last_error();
  const std::string message = detail && *detail ? detail : arqg_strerror(rc);
  die(rc == ARQG_ERR_INTERNAL ? kExitInternal : kExitParam, message);
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) die(kExitIo, "cannot read config file: " + path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::parse_error& e) {
    die(kExitParam, "config file is not valid JSON: " + std::string(e.what()));
  }
  if (!cfg.is_object()) die(kExitParam, "config file must hold a JSON object");
  return cfg;
}

// Config values fill in flags the user did not pass; flags always win.
template <typename T>
void merge(const json& cfg, const CLI::App& cmd, const std::string& key, T& var) {
  if (cmd.count("--" + key) > 0 || !cfg.contains(key)) return;
  try {
    var = cfg.at(key).get<T>();
  } catch (const json::exception&) {
    die(kExitParam, "config key '" + key + "' has the wrong type");
  }
}

std::uint64_t default_seed() {
  const char* env = std::getenv("ARQG_SEED");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') die(kExitParam, "ARQG_SEED must be an unsigned integer");
  return v;
}

void require_set(double value, const char* flag) {
  if (std::isnan(value)) die(kExitParam, std::string("missing required option --") + flag);
}

ordered_json envelope(const std::string& command, ordered_json params, ordered_json result) {
  ordered_json out;
  out["schema_version"] = kSchemaVersion;
  out["command"] = command;
  out["params"] = std::move(params);
  out["result"] = std::move(result);
  return out;
}

void emit(const ordered_json& payload) { std::cout << payload.dump(2) << "\n"; }

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) die(kExitIo, "cannot open output file: " + path);
  return out;
}

struct CommonFlags {
  double lambda = NAN;
  double mu = NAN;
  std::string config_path;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--lambda", flags.lambda, "arrival rate (> 0)");
  cmd->add_option("--mu", flags.mu, "service rate (> lambda)");
  cmd->add_option("--config", flags.config_path, "JSON file with defaults; flags win");
}

json read_merged_config(const CLI::App& cmd, CommonFlags& flags) {
  json cfg = json::object();
  if (!flags.config_path.empty()) cfg = load_config(flags.config_path);
  merge(cfg, cmd, "lambda", flags.lambda);
  merge(cfg, cmd, "mu", flags.mu);
  require_set(flags.lambda, "lambda");
  require_set(flags.mu, "mu");
  return cfg;
}

// ---- analyze ----

void run_analyze(const CLI::App& cmd, CommonFlags common, double tau, bool tau_given) {
  const json cfg = read_merged_config(cmd, common);
  if (!tau_given && cfg.contains("tau")) {
    tau = cfg.at("tau").get<double>();
    tau_given = true;
  }

  double lower = 0.0, upper = 0.0;
  int has_upper = 0;
  check(arqg_critical_costs(common.lambda, common.mu, &lower, &has_upper, &upper));

  ordered_json params{{"lambda", num(common.lambda)}, {"mu", num(common.mu)}};
  ordered_json result;
  result["rho"] = num(common.lambda / common.mu);
  result["cost_lower"] = num(lower);
  if (has_upper) result["cost_upper"] = num(upper);
  if (tau_given) {
    params["tau"] = num(tau);
    double w_ar = 0.0, w_noar = 0.0;
    check(arqg_wait_ar(common.lambda, common.mu, tau, &w_ar));
    check(arqg_wait_noar(common.lambda, common.mu, tau, &w_noar));
    result["wait_ar"] = num(w_ar);
    result["wait_noar"] = num(w_noar);
  }
  emit(envelope("analyze", std::move(params), std::move(result)));
}

// ---- equilibria ----

void run_equilibria(const CLI::App& cmd, CommonFlags common, double cost) {
  const json cfg = read_merged_config(cmd, common);
  merge(cfg, cmd, "cost", cost);
  require_set(cost, "cost");

  double thresholds[2] = {0.0, 0.0};
  int count = 0, none = 0, tangent = 0;
  check(arqg_find_equilibria(common.lambda, common.mu, cost, thresholds, &count, &none,
                             &tangent));

  ordered_json result;
  result["thresholds"] = ordered_json::array();
  for (int i = 0; i < count; ++i) result["thresholds"].push_back(num(thresholds[i]));
  result["none_make_ar"] = none != 0;
  result["tangent"] = tangent != 0;
  emit(envelope("equilibria",
                {{"lambda", num(common.lambda)}, {"mu", num(common.mu)}, {"cost", num(cost)}},
                std::move(result)));
}

// ---- sweep ----

void run_sweep(const CLI::App& cmd, CommonFlags common, std::string what, long points,
               std::string out_path) {
  const json cfg = read_merged_config(cmd, common);
  merge(cfg, cmd, "what", what);
  merge(cfg, cmd, "points", points);
  merge(cfg, cmd, "out", out_path);
  if (points < 2) die(kExitParam, "--points must be >= 2");

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file = open_out(out_path);
    out = &file;
  }

  if (what == "cost-curve") {
    *out << "tau,cost\n";
    for (long i = 0; i < points; ++i) {
      const double tau = static_cast<double>(i) / static_cast<double>(points - 1);
      double cost = 0.0;
      check(arqg_cost_for_threshold(common.lambda, common.mu, tau, &cost));
      *out << num_str(tau) << "," << num_str(cost) << "\n";
    }
  } else if (what == "revenue") {
    *out << "tau,revenue\n";
    for (long i = 1; i <= points; ++i) {
      const double tau = static_cast<double>(i) / static_cast<double>(points);
      double revenue = 0.0;
      check(arqg_revenue_at(common.lambda, common.mu, tau, &revenue));
      *out << num_str(tau) << "," << num_str(revenue) << "\n";
    }
  } else if (what == "poc") {
    *out << "rho,poc\n";
    for (long i = 1; i <= points; ++i) {
      const double rho = static_cast<double>(i) / static_cast<double>(points + 1);
      double poc = 0.0;
      check(arqg_price_of_conservatism(rho * common.mu, common.mu, &poc));
      *out << num_str(rho) << "," << num_str(poc) << "\n";
    }
  } else {
    die(kExitParam, "--what must be one of cost-curve, revenue, poc");
  }
  if (out == &file && !file) die(kExitIo, "write failed: " + out_path);
}

// ---- learn ----

const char* outcome_name(int outcome) {
  switch (outcome) {
    case ARQG_OUTCOME_CONVERGED: return "converged";
    case ARQG_OUTCOME_CYCLING: return "cycling";
    default: return "max-steps";
  }
}

void write_trace_csv(std::ostream& out, const arqg_trace* trace) {
  out << "index,belief_in,realized_threshold,demand,reservations,belief_out\n";
  const long n = arqg_trace_length(trace);
  for (long i = 0; i < n; ++i) {
    arqg_step_record rec;
    check(arqg_trace_step(trace, i, &rec));
    out << rec.index << "," << num_str(rec.belief_in) << ","
        << num_str(rec.realized_threshold) << ",";
    if (rec.demand < 0) {
      out << "NA,NA,";
    } else {
      out << rec.demand << "," << rec.reservations << ",";
    }
    out << num_str(rec.belief_out) << "\n";
  }
}

void run_learn(const CLI::App& cmd, CommonFlags common, std::string mode, double cost,
               double belief, long steps, double step_duration, std::uint64_t seed,
               long replications, std::string out_path) {
  const json cfg = read_merged_config(cmd, common);
  merge(cfg, cmd, "mode", mode);
  merge(cfg, cmd, "cost", cost);
  merge(cfg, cmd, "belief", belief);
  merge(cfg, cmd, "steps", steps);
  merge(cfg, cmd, "step-duration", step_duration);
  merge(cfg, cmd, "seed", seed);
  merge(cfg, cmd, "replications", replications);
  merge(cfg, cmd, "out", out_path);
  require_set(cost, "cost");
  require_set(belief, "belief");
  int mode_code;
  if (mode == "strategy") {
    mode_code = ARQG_MODE_STRATEGY;
  } else if (mode == "action") {
    mode_code = ARQG_MODE_ACTION;
  } else {
    die(kExitParam, "--mode must be strategy or action");
  }
  if (replications < 1) die(kExitParam, "--replications must be >= 1");

  ordered_json params{{"lambda", num(common.lambda)},
                      {"mu", num(common.mu)},
                      {"cost", num(cost)},
                      {"mode", mode},
                      {"belief", num(belief)},
                      {"steps", steps},
                      {"step_duration", num(step_duration)},
                      {"replications", replications}};

  ordered_json result;
  if (replications == 1) {
    arqg_trace* trace = nullptr;
    check(arqg_learning_run(common.lambda, common.mu, cost, mode_code, belief, steps,
                            step_duration, seed, &trace));
    int outcome = 0, absorbing = 0;
    double limit = 0.0, mean_ar = 0.0;
    check(arqg_trace_outcome(trace, &outcome, &limit, &absorbing));
    check(arqg_trace_mean_ar_fraction(trace, &mean_ar));
    result["outcome"] = outcome_name(outcome);
    if (outcome == ARQG_OUTCOME_CONVERGED) result["limit"] = num(limit);
    result["absorbing"] = absorbing != 0;
    result["steps_run"] = arqg_trace_length(trace);
    result["mean_ar_fraction"] = num(mean_ar);
    if (!out_path.empty()) {
      std::ofstream file = open_out(out_path);
      write_trace_csv(file, trace);
      if (!file) die(kExitIo, "write failed: " + out_path);
    }
    arqg_trace_free(trace);
  } else {
    long converged = 0, cycling = 0, max_steps = 0, absorbed = 0;
    double mean_ar_sum = 0.0;
    for (long rep = 0; rep < replications; ++rep) {
      arqg_trace* trace = nullptr;
      check(arqg_learning_run(common.lambda, common.mu, cost, mode_code, belief, steps,
                              step_duration, seed + static_cast<std::uint64_t>(rep), &trace));
      int outcome = 0, absorbing = 0;
      double limit = 0.0, mean_ar = 0.0;
      check(arqg_trace_outcome(trace, &outcome, &limit, &absorbing));
      check(arqg_trace_mean_ar_fraction(trace, &mean_ar));
      switch (outcome) {
        case ARQG_OUTCOME_CONVERGED: ++converged; break;
        case ARQG_OUTCOME_CYCLING: ++cycling; break;
        default: ++max_steps; break;
      }
      if (absorbing) ++absorbed;
      mean_ar_sum += mean_ar;
      arqg_trace_free(trace);
    }
    result["converged"] = converged;
    result["cycling"] = cycling;
    result["max_steps"] = max_steps;
    result["absorbed"] = absorbed;
    result["mean_ar_fraction"] = num(mean_ar_sum / static_cast<double>(replications));
  }

  ordered_json payload = envelope("learn", std::move(params), std::move(result));
  payload["seed"] = seed;
  emit(payload);
}

// ---- simulate ----

void run_simulate(const CLI::App& cmd, CommonFlags common, double tau, double horizon,
                  double warmup, std::uint64_t seed, std::string engine, double band_width,
                  std::string customers_out) {
  const json cfg = read_merged_config(cmd, common);
  merge(cfg, cmd, "tau", tau);
  merge(cfg, cmd, "horizon", horizon);
  merge(cfg, cmd, "warmup", warmup);
  merge(cfg, cmd, "seed", seed);
  merge(cfg, cmd, "engine", engine);
  merge(cfg, cmd, "band-width", band_width);
  merge(cfg, cmd, "customers-out", customers_out);
  require_set(tau, "tau");
  require_set(horizon, "horizon");
  int engine_code;
  if (engine == "priority") {
    engine_code = ARQG_ENGINE_PRIORITY;
  } else if (engine == "calendar") {
    engine_code = ARQG_ENGINE_CALENDAR;
  } else if (engine == "both") {
    engine_code = ARQG_ENGINE_BOTH;
  } else {
    die(kExitParam, "--engine must be priority, calendar, or both");
  }

  arqg_sim_report* report = nullptr;
  check(arqg_simulate(common.lambda, common.mu, tau, horizon, warmup, seed, engine_code,
                      band_width, &report));

  ordered_json result;
  result["engine"] = engine;
  long total = 0, measured = 0;
  check(arqg_sim_counts(report, &total, &measured));
  result["customers_total"] = total;
  result["customers_measured"] = measured;

  double util = 0.0, util_ci = 0.0;
  check(arqg_sim_utilization(report, &util, &util_ci));
  result["utilization"] = ordered_json{{"estimate", num(util)}, {"ci_half", num(util_ci)}};

  const long band_count = arqg_sim_band_count(report);
  std::vector<int> verdicts(static_cast<std::size_t>(band_count), ARQG_BAND_INCONCLUSIVE);
  int noar_verdict = ARQG_BAND_INCONCLUSIVE, overall = 0;
  check(arqg_sim_validate(report, verdicts.data(), &noar_verdict, &overall));
  const auto verdict_name = [](int v) {
    return v == ARQG_BAND_PASS ? "pass" : v == ARQG_BAND_FAIL ? "fail" : "inconclusive";
  };

  result["ar_bands"] = ordered_json::array();
  for (long i = 0; i < band_count; ++i) {
    arqg_band_stats band;
    check(arqg_sim_band(report, i, &band));
    result["ar_bands"].push_back(ordered_json{{"center", num(band.center)},
                                              {"lo", num(band.lo)},
                                              {"hi", num(band.hi)},
                                              {"count", band.count},
                                              {"mean_wait", num(band.mean_wait)},
                                              {"ci_half", num(band.ci_half)},
                                              {"verdict", verdict_name(verdicts[i])}});
  }
  arqg_band_stats noar;
  check(arqg_sim_noar(report, &noar));
  result["noar"] = ordered_json{{"count", noar.count},
                                {"mean_wait", num(noar.mean_wait)},
                                {"ci_half", num(noar.ci_half)},
                                {"verdict", verdict_name(noar_verdict)}};
  result["validation_pass"] = overall != 0;

  int checked = 0, equivalent = 0;
  double max_delta = 0.0;
  check(arqg_sim_equivalence(report, &checked, &equivalent, &max_delta));
  if (checked) {
    result["equivalence"] =
        ordered_json{{"equivalent", equivalent != 0}, {"max_departure_delta", num(max_delta)}};
  }

  if (!customers_out.empty()) {
    std::ofstream file = open_out(customers_out);
    file << "id,p,action,arrival,departure,wait\n";
    const long n = arqg_sim_customer_count(report);
    for (long i = 0; i < n; ++i) {
      arqg_sim_customer c;
      check(arqg_sim_customer_at(report, i, &c));
      file << c.id << "," << num_str(c.potential_priority) << ","
           << (c.makes_ar ? "AR" : "NOAR") << "," << num_str(c.arrival) << ","
           << num_str(c.departure) << "," << num_str(c.wait) << "\n";
    }
    if (!file) die(kExitIo, "write failed: " + customers_out);
  }
  arqg_sim_report_free(report);

  ordered_json payload = envelope("simulate",
                                  {{"lambda", num(common.lambda)},
                                   {"mu", num(common.mu)},
                                   {"tau", num(tau)},
                                   {"horizon", num(horizon)},
                                   {"warmup", num(warmup)},
                                   {"engine", engine},
                                   {"band_width", num(band_width)}},
                                  std::move(result));
  payload["seed"] = seed;
  emit(payload);
  if (checked && !equivalent) die(kExitInternal, "engine equivalence check failed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"advance-reservation queueing game toolkit"};
  app.require_subcommand(1);

  CommonFlags analyze_common;
  double analyze_tau = NAN;
  CLI::App* analyze = app.add_subcommand("analyze", "waits and regime boundaries");
  add_common(analyze, analyze_common);
  analyze->add_option("--tau", analyze_tau, "threshold to evaluate waits at");

  CommonFlags eq_common;
  double eq_cost = NAN;
  CLI::App* equilibria = app.add_subcommand("equilibria", "equilibrium set for a fee");
  add_common(equilibria, eq_common);
  equilibria->add_option("--cost", eq_cost, "reservation fee");

  CommonFlags sweep_common;
  std::string sweep_what = "cost-curve", sweep_out;
  long sweep_points = 100;
  CLI::App* sweep = app.add_subcommand("sweep", "CSV sweeps for plotting");
  add_common(sweep, sweep_common);
  sweep->add_option("--what", sweep_what, "cost-curve, revenue, or poc");
  sweep->add_option("--points", sweep_points, "number of rows (>= 2)");
  sweep->add_option("--out", sweep_out, "write CSV here instead of stdout");

  CommonFlags learn_common;
  std::string learn_mode = "strategy", learn_out;
  double learn_cost = NAN, learn_belief = NAN, learn_step_duration = 1.0;
  long learn_steps = 1000, learn_replications = 1;
  std::uint64_t learn_seed = default_seed();
  CLI::App* learn = app.add_subcommand("learn", "best-response learning dynamics");
  add_common(learn, learn_common);
  learn->add_option("--mode", learn_mode, "strategy or action");
  learn->add_option("--cost", learn_cost, "reservation fee");
  learn->add_option("--belief", learn_belief, "initial belief");
  learn->add_option("--steps", learn_steps, "step budget");
  learn->add_option("--step-duration", learn_step_duration, "time units per step");
  learn->add_option("--seed", learn_seed, "RNG seed (default from ARQG_SEED)");
  learn->add_option("--replications", learn_replications, "independent replications");
  learn->add_option("--out", learn_out, "write the step trace CSV here");

  CommonFlags sim_common;
  double sim_tau = NAN, sim_horizon = NAN, sim_warmup = 0.2, sim_band_width = 0.05;
  std::uint64_t sim_seed = default_seed();
  std::string sim_engine = "priority", sim_customers_out;
  CLI::App* simulate = app.add_subcommand("simulate", "discrete-event validation run");
  add_common(simulate, sim_common);
  simulate->add_option("--tau", sim_tau, "equilibrium threshold to simulate");
  simulate->add_option("--horizon", sim_horizon, "simulated time span");
  simulate->add_option("--warmup", sim_warmup, "warmup fraction dropped from stats");
  simulate->add_option("--seed", sim_seed, "RNG seed (default from ARQG_SEED)");
  simulate->add_option("--engine", sim_engine, "priority, calendar, or both");
  simulate->add_option("--band-width", sim_band_width, "AR statistics band width");
  simulate->add_option("--customers-out", sim_customers_out, "per-customer CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParam;
  }

  if (analyze->parsed()) {
    run_analyze(*analyze, analyze_common, analyze_tau, analyze->count("--tau") > 0);
  } else if (equilibria->parsed()) {
    run_equilibria(*equilibria, eq_common, eq_cost);
  } else if (sweep->parsed()) {
    run_sweep(*sweep, sweep_common, sweep_what, sweep_points, sweep_out);
  } else if (learn->parsed()) {
    run_learn(*learn, learn_common, learn_mode, learn_cost, learn_belief, learn_steps,
              learn_step_duration, learn_seed, learn_replications, learn_out);
  } else if (simulate->parsed()) {
    run_simulate(*simulate, sim_common, sim_tau, sim_horizon, sim_warmup, sim_seed, sim_engine,
                 sim_band_width, sim_customers_out);
  }
  return 0;
}
