// Copyright 2026 The lindjump authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "lindjump/analytics.hpp"
#include "lindjump/estimators.hpp"
#include "lindjump/manifest.hpp"
#include "lindjump/model.hpp"
#include "lindjump/trajectory.hpp"

namespace {

using namespace lindjump;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfigRejected = 2;
constexpr int kExitComparisonFailed = 3;

class UsageError : public Error {
 public:
  using Error::Error;
};

ModelSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file " + path});
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError({std::string("config is not valid JSON: ") + e.what()});
  }
  return validate_spec(doc);
}

std::uint64_t default_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("LINDJUMP_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw UsageError("LINDJUMP_SEED is not an unsigned integer");
    }
  }
  return 1;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

class WallClock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

int cmd_validate(const std::string& config_path) {
  ModelSpec spec = load_spec(config_path);
  GeneratorSet gens = build_generators(spec);  // runs the split identities
  std::cout << "OK: " << to_string(spec.kind) << " model, "
            << to_string(spec.scheme) << " scheme, " << spec.r_max
            << " configuration(s); spec hash " << spec.hash() << "\n";
  for (std::size_t r = 0; r < spec.r_max; ++r) {
    double intensity =
        markov_intensity(spec.decay[r], spec.rabi[r], spec.detuning[r]);
    std::cout << "  config " << r << ": escape rate " << spec.rate_out_of(r)
              << ", total decay " << spec.decay_tilde(r) << ", intensity "
              << intensity;
    if (intensity > 0.0)
      std::cout << ", switching/emission ratio "
                << spec.rate_out_of(r) / intensity;
    std::cout << "\n";
  }
  if (spec.r_max == 1)
    std::cout << "  note: single configuration; the photon record is a "
                 "renewal process\n";
  (void)gens;
  return kExitOk;
}

int cmd_simulate(const std::string& config_path,
                 std::optional<std::uint64_t> seed_flag,
                 std::optional<std::size_t> events,
                 std::optional<double> time_limit, const std::string& algorithm,
                 const std::string& init_name, double trace_dt, double fine_dt,
                 std::size_t burn_in, const std::string& out_prefix) {
  WallClock clock;
  ModelSpec spec = load_spec(config_path);
  if (events && time_limit)
    throw UsageError("--events and --time are mutually exclusive");
  if (!events && !time_limit)
    throw UsageError("one of --events or --time is required");

  TrajectoryOptions options;
  if (algorithm == "coarse")
    options.algorithm = Algorithm::Coarse;
  else if (algorithm == "fine")
    options.algorithm = Algorithm::Fine;
  else
    throw UsageError("--algorithm must be coarse or fine");
  options.fine_dt = fine_dt;
  options.trace_dt = trace_dt;
  options.burn_in_events = burn_in;

  InitialCondition init;
  if (init_name == "stationary")
    init = InitialCondition::stationary_post_jump();
  else if (init_name == "ground") {
    std::vector<double> uniform(spec.r_max,
                                1.0 / static_cast<double>(spec.r_max));
    init = InitialCondition::from_state(VectorState::ground(uniform));
  } else {
    throw UsageError("--init must be stationary or ground");
  }

  const std::uint64_t seed = default_seed(seed_flag);
  const StopCriterion stop = events ? StopCriterion::events(*events)
                                    : StopCriterion::time(*time_limit);

  TrajectoryEngine engine(spec);
  RunManifest manifest;
  manifest.spec_hash = spec.hash();
  manifest.subcommand = "simulate";
  manifest.seeds = {seed};
  manifest.algorithm = algorithm;
  manifest.stop_criterion = events ? "events=" + std::to_string(*events)
                                   : "time=" + std::to_string(*time_limit);
  manifest.extra = {{"init", init_name},
                    {"trace_dt", trace_dt},
                    {"fine_dt", fine_dt},
                    {"burn_in_events", burn_in}};

  const std::string events_path = out_prefix + ".events.csv";
  const std::string traces_path = out_prefix + ".traces.csv";
  manifest.output_paths = {events_path, traces_path};

  int exit_code = kExitOk;
  TrajectoryResult result;
  try {
    result = engine.simulate(seed, stop, options, init);
  } catch (const DarkStateError& dark) {
    // Nothing useful can follow a dark state; flush what exists and flag it.
    manifest.extra["aborted"] = dark.what();
    manifest.extra["residual_survival"] = dark.residual_survival();
    exit_code = kExitRuntime;
    std::cerr << "lindjump: dark state: " << dark.what() << "\n";
  }

  {
    std::ostringstream os;
    write_csv(result.log, os);
    write_file(events_path, os.str());
  }
  {
    std::ostringstream os;
    os.precision(12);
    os << "time,upper";
    for (std::size_t r = 0; r < spec.r_max; ++r) os << ",P_" << r;
    os << "\n";
    for (std::size_t i = 0; i < result.traces.time.size(); ++i) {
      os << result.traces.time[i] << ',' << result.traces.upper[i];
      for (std::size_t r = 0; r < spec.r_max; ++r)
        os << ',' << result.traces.config[r][i];
      os << "\n";
    }
    write_file(traces_path, os.str());
  }
  manifest.wall_time_seconds = clock.seconds();
  manifest.write(out_prefix + ".manifest.json");
  std::cout << "wrote " << events_path << " (" << result.log.events.size()
            << " events), " << traces_path << "\n";
  return exit_code;
}

std::vector<double> parse_weights(const std::string& csv, std::size_t r_max) {
  std::vector<double> weights;
  std::stringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ',')) weights.push_back(std::stod(token));
  if (weights.size() != r_max)
    throw UsageError("--p needs exactly " + std::to_string(r_max) +
                     " comma-separated weights");
  return weights;
}

int cmd_analytic(const std::string& config_path, const std::string& object,
                 double tau_max, std::size_t tau_points, double t_max,
                 std::size_t t_points, const std::string& p_weights,
                 bool all_channels, const std::string& out_prefix) {
  WallClock clock;
  ModelSpec spec = load_spec(config_path);
  RunManifest manifest;
  manifest.spec_hash = spec.hash();
  manifest.subcommand = "analytic";
  manifest.algorithm = "analytic";
  manifest.stop_criterion = "none";
  manifest.extra = {{"object", object},
                    {"tau_max", tau_max},
                    {"tau_points", tau_points},
                    {"all_channels", all_channels}};

  std::vector<double> grid = uniform_grid(tau_max, tau_points);
  auto emit = [&](const std::string& suffix, const auto& value) {
    std::ostringstream os;
    write_csv(value, os);
    std::string path = out_prefix + "." + suffix + ".csv";
    write_file(path, os.str());
    manifest.output_paths.push_back(path);
  };

  if (object == "w1") {
    emit("w1", w1_stationary(spec, grid, all_channels));
  } else if (object == "w2") {
    emit("w2", w2_stationary(spec, grid, grid, all_channels));
  } else if (object == "lambda") {
    DensityCurve w1 = w1_stationary(spec, grid, all_channels);
    JointDensitySurface w2 = w2_stationary(spec, grid, grid, all_channels);
    emit("lambda", renewal_departure(w1, w2));
  } else if (object == "wst") {
    if (p_weights.empty())
      throw UsageError("--object wst needs --p <w_0,...,w_{R-1}>");
    emit("wst", w_stochastic(spec, parse_weights(p_weights, spec.r_max), grid));
  } else if (object == "master") {
    GeneratorSet gens = build_generators(spec);
    std::vector<double> uniform(spec.r_max,
                                1.0 / static_cast<double>(spec.r_max));
    emit("master", master_evolve(gens, VectorState::ground(uniform),
                                 uniform_grid(t_max, t_points)));
  } else if (object == "slowlimit") {
    if (spec.kind != ModelKind::SelfFluctuating)
      throw UsageError("--object slowlimit applies to self_fluctuating models");
    SlowLimitApproximation approx = slow_limit_approximations(spec, grid, grid);
    emit("slowlimit.w1", approx.w1);
    emit("slowlimit.w2", approx.w2);
    manifest.extra["p_inf_approx"] = approx.p_inf_approx;
    manifest.extra["slowness_ratio"] = approx.slowness_ratio;
  } else {
    throw UsageError("unknown --object " + object);
  }

  manifest.wall_time_seconds = clock.seconds();
  manifest.write(out_prefix + ".manifest.json");
  for (const auto& path : manifest.output_paths)
    std::cout << "wrote " << path << "\n";
  return kExitOk;
}

int cmd_compare(const std::string& config_path,
                const std::string& against_path, std::size_t traj_events,
                std::optional<std::uint64_t> seed_flag,
                const std::string& out_prefix) {
  WallClock clock;
  ModelSpec traj_spec = load_spec(config_path);
  ModelSpec ref_spec =
      against_path.empty() ? traj_spec : load_spec(against_path);
  const std::uint64_t seed = default_seed(seed_flag);

  TrajectoryEngine engine(traj_spec);
  TrajectoryOptions options;
  options.trace_dt = 0.0;
  TrajectoryResult result =
      engine.simulate(seed, StopCriterion::events(traj_events), options);

  WaitingTimeAnalysis analysis(ref_spec);
  nlohmann::json report;
  bool all_pass = true;
  auto score = [&](const std::string& metric, double value, double threshold,
                   bool pass) {
    report["metrics"][metric] = {{"value", value},
                                 {"threshold", threshold},
                                 {"pass", pass}};
    std::cout << (pass ? "pass  " : "FAIL  ") << metric << " = " << value
              << " (threshold " << threshold << ")\n";
    if (!pass) {
      all_pass = false;
      if (!report.contains("first_failure")) report["first_failure"] = metric;
    }
  };

  // Waiting-time histogram against the exact first-interval law.
  std::vector<double> taus = intervals(result.log);
  double ks = ks_distance(
      taus, [&](double t) { return 1.0 - analysis.survival(t); });
  score("w1_ks_distance", ks, 0.02, ks < 0.02);

  // Quadrature consistency of the analytic joint density.
  double worst_marginal = 0.0;
  for (double tau1 : {0.5, 2.0, 5.0, 10.0})
    worst_marginal =
        std::max(worst_marginal, std::abs(analysis.w2_marginal_over_tau2(tau1) -
                                          analysis.w1(tau1)));
  score("w2_marginal_residual", worst_marginal, 1e-6, worst_marginal < 1e-6);

  // Empirical joint marginal against the waiting histogram, per bin.
  HistogramSpec hspec;
  hspec.bin_width = 0.25;
  DensityCurve marginal_hist = waiting_histogram(result.log, hspec);
  JointDensitySurface joint_hist = joint_histogram(result.log, hspec);
  const double n_pairs = static_cast<double>(taus.size() - 1);
  std::size_t band_violations = 0;
  std::size_t band_checked = 0;
  for (std::size_t i = 0; i < marginal_hist.tau.size(); ++i) {
    if (marginal_hist.counts[i] < 100) continue;
    double row = 0.0;
    for (std::size_t j = 0; j < joint_hist.tau2.size(); ++j)
      row += static_cast<double>(joint_hist.counts[i][j]);
    double p_joint = row / n_pairs;
    double p_marg = static_cast<double>(marginal_hist.counts[i]) /
                    static_cast<double>(taus.size());
    double sigma = std::sqrt(p_marg * (1.0 - p_marg) / n_pairs);
    ++band_checked;
    if (std::abs(p_joint - p_marg) >
        3.0 * sigma + marginal_hist.out_of_range_fraction)
      ++band_violations;
  }
  double violation_rate =
      band_checked > 0
          ? static_cast<double>(band_violations) / static_cast<double>(band_checked)
          : 0.0;
  score("joint_marginal_band_violations", violation_rate, 0.01,
        violation_rate <= 0.01);

  // Time-averaged post-detection weights against the stationary ones.
  JumpWeights weights = stationary_jump_weights(ref_spec);
  double mean_first = 0.0;
  std::size_t photon_events = 0;
  for (const Event& e : result.log.events)
    if (e.channel.is_photon()) {
      mean_first += e.post_weights[0];
      ++photon_events;
    }
  mean_first /= static_cast<double>(photon_events);
  double p_error = std::abs(mean_first - weights.p_inf[0]);
  score("stationary_weight_error", p_error, 0.02, p_error < 0.02);

  if (ref_spec.kind == ModelKind::LightAssisted && ref_spec.r_max == 2) {
    double asym = 0.0;
    for (double a : {0.5, 1.5, 4.0})
      for (double b : {0.8, 2.5})
        asym = std::max(asym, std::abs(analysis.w2(a, b) - analysis.w2(b, a)));
    score("w2_symmetry", asym, 1e-10, asym < 1e-10);
  }

  report["pass"] = all_pass;
  report["events"] = traj_events;
  report["seed"] = seed;

  RunManifest manifest;
  manifest.spec_hash = traj_spec.hash();
  manifest.subcommand = "compare";
  manifest.seeds = {seed};
  manifest.algorithm = "coarse";
  manifest.stop_criterion = "events=" + std::to_string(traj_events);
  manifest.extra = {{"against", against_path.empty() ? config_path : against_path}};
  const std::string report_path = out_prefix + ".report.json";
  manifest.output_paths = {report_path};
  manifest.wall_time_seconds = clock.seconds();
  write_file(report_path, report.dump(2) + "\n");
  manifest.write(out_prefix + ".manifest.json");
  std::cout << (all_pass ? "PASS" : "FAIL") << ": report written to "
            << report_path << "\n";
  return all_pass ? kExitOk : kExitComparisonFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon-emission statistics of a driven fluorophore coupled to "
               "a classically fluctuating reservoir"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_prefix = "lindjump_out";

  auto* validate = app.add_subcommand("validate", "Check a model config");
  validate->add_option("config", config_path, "model config (JSON)")->required();

  auto* simulate =
      app.add_subcommand("simulate", "Run one stochastic trajectory");
  std::optional<std::size_t> events;
  std::optional<double> time_limit;
  std::string algorithm = "coarse";
  std::string init_name = "stationary";
  double trace_dt = 0.05;
  double fine_dt = 1e-3;
  std::size_t burn_in = 0;
  simulate->add_option("config", config_path)->required();
  simulate->add_option("--seed", seed, "RNG seed (default: LINDJUMP_SEED or 1)");
  simulate->add_option("--events", events, "stop after this many events");
  simulate->add_option("--time", time_limit, "stop at this time");
  simulate->add_option("--algorithm", algorithm, "coarse | fine");
  simulate->add_option("--init", init_name, "stationary | ground");
  simulate->add_option("--trace-dt", trace_dt,
                       "conditional-state sampling step (0 disables)");
  simulate->add_option("--fine-dt", fine_dt, "fine-algorithm time step");
  simulate->add_option("--burn-in", burn_in, "events to discard first");
  simulate->add_option("--out", out_prefix, "output path prefix");

  auto* analytic = app.add_subcommand("analytic", "Emit exact curves/surfaces");
  std::string object;
  double tau_max = 20.0;
  std::size_t tau_points = 400;
  double t_max = 50.0;
  std::size_t t_points = 501;
  std::string p_weights;
  bool all_channels = false;
  analytic->add_option("config", config_path)->required();
  analytic->add_option("--object", object, "w1|w2|lambda|wst|master|slowlimit")
      ->required();
  analytic->add_option("--tau-max", tau_max, "waiting-time grid end");
  analytic->add_option("--tau-points", tau_points, "waiting-time grid points");
  analytic->add_option("--t-max", t_max, "master-evolution grid end");
  analytic->add_option("--t-points", t_points, "master-evolution grid points");
  analytic->add_option("--p", p_weights,
                       "post-detection weights for wst (comma separated)");
  analytic->add_flag("--all-channels", all_channels,
                     "record every detector, not only the photon counter");
  analytic->add_option("--out", out_prefix, "output path prefix");

  auto* compare = app.add_subcommand(
      "compare", "Simulate, estimate, and score against the exact results");
  std::size_t traj_events = 100000;
  std::string against_path;
  compare->add_option("config", config_path)->required();
  compare->add_option("--traj-events", traj_events, "trajectory length");
  compare->add_option("--seed", seed, "RNG seed (default: LINDJUMP_SEED or 1)");
  compare->add_option("--against", against_path,
                      "score against a different config (negative control)");
  compare->add_option("--out", out_prefix, "output path prefix");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(config_path);
    if (simulate->parsed())
      return cmd_simulate(config_path, seed, events, time_limit, algorithm,
                          init_name, trace_dt, fine_dt, burn_in, out_prefix);
    if (analytic->parsed())
      return cmd_analytic(config_path, object, tau_max, tau_points, t_max,
                          t_points, p_weights, all_channels, out_prefix);
    if (compare->parsed())
      return cmd_compare(config_path, against_path, traj_events, seed,
                         out_prefix);
  } catch (const ConfigError& e) {
    std::cerr << "lindjump: " << e.what() << "\n";
    return kExitConfigRejected;
  } catch (const UsageError& e) {
    std::cerr << "lindjump: usage error: " << e.what() << "\n";
    return kExitConfigRejected;
  } catch (const std::exception& e) {
    std::cerr << "lindjump: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
