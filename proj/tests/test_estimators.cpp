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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lindjump/estimators.hpp"
#include "lindjump/trajectory.hpp"
#include "oracles.hpp"

using namespace lindjump;

namespace {

// Synthetic renewal log with i.i.d. exponential intervals, independent of
// the trajectory machinery.
EventLog exponential_log(std::size_t n_events, double rate, std::uint64_t seed) {
  EventLog log;
  RngStream rng(seed);
  double t = 0.0;
  for (std::size_t i = 0; i < n_events; ++i) {
    t += -std::log(rng.uniform01()) / rate;
    log.events.push_back({t, ChannelLabel::photon(), {1.0}});
  }
  log.meta.event_count = n_events;
  log.meta.total_time = t;
  log.meta.algorithm = "synthetic";
  return log;
}

}  // namespace

TEST_CASE("waiting histogram of an exponential renewal log") {
  EventLog log = exponential_log(100000, 1.0, 11);
  HistogramSpec hspec;
  DensityCurve curve = waiting_histogram(log, hspec);
  double ks = ks_distance(intervals(log),
                          [](double t) { return 1.0 - std::exp(-t); });
  CHECK(ks < 0.02);
  // In-range mass equals 1 - out-of-range fraction exactly, by construction.
  double mass = 0.0;
  for (double d : curve.density) mass += d * hspec.bin_width;
  CHECK(mass == doctest::Approx(1.0 - curve.out_of_range_fraction).epsilon(1e-12));
  CHECK_FALSE(curve.low_statistics);

  // A short range reports the tail mass instead of dropping it silently.
  HistogramSpec narrow = hspec;
  narrow.hi = 2.0;
  DensityCurve clipped = waiting_histogram(log, narrow);
  CHECK(clipped.out_of_range_fraction ==
        doctest::Approx(std::exp(-2.0)).epsilon(0.05));
  double clipped_mass = 0.0;
  for (double d : clipped.density) clipped_mass += d * narrow.bin_width;
  CHECK(clipped_mass ==
        doctest::Approx(1.0 - clipped.out_of_range_fraction).epsilon(1e-12));
}

TEST_CASE("waiting histogram needs at least one interval") {
  EventLog log = exponential_log(1, 1.0, 3);
  CHECK_THROWS_AS(waiting_histogram(log, HistogramSpec{}), Error);
}

TEST_CASE("a single interval gives a degenerate flagged histogram") {
  EventLog log = exponential_log(2, 1.0, 5);
  DensityCurve curve = waiting_histogram(log, HistogramSpec{});
  CHECK(curve.low_statistics);
  std::size_t occupied = 0;
  for (std::size_t c : curve.counts) occupied += c > 0 ? 1 : 0;
  CHECK(occupied <= 1);
}

TEST_CASE("joint histogram of a renewal log has product structure") {
  EventLog log = exponential_log(100000, 1.0, 13);
  HistogramSpec hspec;
  hspec.bin_width = 0.25;
  DensityCurve marginal = waiting_histogram(log, hspec);
  JointDensitySurface joint = joint_histogram(log, hspec);
  LambdaSurface lambda = lambda_estimate(joint, marginal, 100);
  for (std::size_t i = 0; i < lambda.tau1.size(); ++i)
    for (std::size_t j = 0; j < lambda.tau2.size(); ++j)
      if (!lambda.masked[i][j] && joint.counts[i][j] >= 100)
        CHECK(std::abs(lambda.value[i][j]) < 0.35);
}

TEST_CASE("joint histogram marginals match the waiting histogram") {
  EventLog log = exponential_log(50000, 1.0, 17);
  HistogramSpec hspec;
  hspec.bin_width = 0.5;
  DensityCurve marginal = waiting_histogram(log, hspec);
  JointDensitySurface joint = joint_histogram(log, hspec);
  const double n_pairs = static_cast<double>(intervals(log).size() - 1);
  for (std::size_t i = 0; i < marginal.tau.size(); ++i) {
    double joint_row_mass = 0.0;
    for (std::size_t j = 0; j < joint.tau2.size(); ++j)
      joint_row_mass += static_cast<double>(joint.counts[i][j]);
    double p = joint_row_mass / n_pairs;
    double expected =
        marginal.density[i] * hspec.bin_width;  // in-range marginal prob.
    double sigma = std::sqrt(std::max(p * (1.0 - p) / n_pairs, 1e-12));
    // Out-of-range partners deplete the joint row; allow that mass too.
    CHECK(p <= expected + 3.0 * sigma + 1e-9);
    CHECK(p >= expected - 3.0 * sigma - marginal.out_of_range_fraction - 1e-9);
  }
}

TEST_CASE("two intervals give a single-cell flagged surface") {
  EventLog log = exponential_log(3, 1.0, 19);
  JointDensitySurface joint = joint_histogram(log, HistogramSpec{});
  CHECK(joint.low_statistics);
}

TEST_CASE("lambda estimate masks empty bins instead of zeroing them") {
  EventLog log = exponential_log(5000, 1.0, 23);
  HistogramSpec hspec;
  DensityCurve marginal = waiting_histogram(log, hspec);
  JointDensitySurface joint = joint_histogram(log, hspec);
  LambdaSurface lambda = lambda_estimate(joint, marginal, 100);
  bool found_masked_nonempty_marginal = false;
  for (std::size_t i = 0; i < lambda.tau1.size() && !found_masked_nonempty_marginal;
       ++i)
    for (std::size_t j = 0; j < lambda.tau2.size(); ++j)
      if (lambda.masked[i][j] && joint.counts[i][j] == 0) {
        found_masked_nonempty_marginal = true;
        break;
      }
  CHECK(found_masked_nonempty_marginal);
}

TEST_CASE("lambda estimate rejects inconsistent binning") {
  EventLog log = exponential_log(5000, 1.0, 29);
  HistogramSpec a;
  HistogramSpec b;
  b.bin_width = 0.1;
  DensityCurve marginal = waiting_histogram(log, a);
  JointDensitySurface joint = joint_histogram(log, b);
  CHECK_THROWS_AS(lambda_estimate(joint, marginal, 100), DimensionError);
}

TEST_CASE("renewal lambda estimate stays within three propagated errors") {
  EventLog log = exponential_log(100000, 1.0, 31);
  HistogramSpec hspec;
  hspec.bin_width = 0.5;
  hspec.hi = 6.0;
  DensityCurve marginal = waiting_histogram(log, hspec);
  JointDensitySurface joint = joint_histogram(log, hspec);
  LambdaSurface lambda = lambda_estimate(joint, marginal, 500);
  std::size_t checked = 0;
  for (std::size_t i = 0; i < lambda.tau1.size(); ++i)
    for (std::size_t j = 0; j < lambda.tau2.size(); ++j)
      if (!lambda.masked[i][j]) {
        ++checked;
        CHECK(std::abs(lambda.value[i][j]) <= 3.0 * lambda.stderr_[i][j]);
      }
  CHECK(checked > 20);
}

TEST_CASE("intensity trace of the slow-switching model is bimodal") {
  TrajectoryEngine engine(oracles::slow_switching_model());
  TrajectoryOptions options;
  options.trace_dt = 0.0;
  TrajectoryResult res = engine.simulate(3, StopCriterion::events(20000), options);
  StepCurve trace = intensity_trace(res.log, 50.0);
  REQUIRE(trace.value.size() > 100);
  const double bright = markov_intensity(1.0, 1.0, 0.0);   // 1/3
  const double dim = markov_intensity(10.0, 1.0, 0.0);     // 10/102
  double bright_sum = 0.0, dim_sum = 0.0;
  std::size_t bright_n = 0, dim_n = 0;
  for (double v : trace.value) {
    if (std::abs(v - bright) < std::abs(v - dim)) {
      bright_sum += v;
      ++bright_n;
    } else {
      dim_sum += v;
      ++dim_n;
    }
  }
  REQUIRE(bright_n > 10);
  REQUIRE(dim_n > 10);
  CHECK(std::abs(bright_sum / bright_n - bright) / bright < 0.15);
  CHECK(std::abs(dim_sum / dim_n - dim) / dim < 0.15);
}

TEST_CASE("intensity trace of the light-assisted model is unimodal") {
  ModelSpec spec = oracles::light_assisted_model();
  TrajectoryEngine engine(spec);
  TrajectoryOptions options;
  options.trace_dt = 0.0;
  TrajectoryResult res = engine.simulate(5, StopCriterion::events(20000), options);
  StepCurve trace = intensity_trace(res.log, 50.0);
  double mean = 0.0;
  for (double v : trace.value) mean += v;
  mean /= static_cast<double>(trace.value.size());
  CHECK(std::abs(mean - stationary_intensity(spec)) / stationary_intensity(spec) <
        0.15);
}

TEST_CASE("intensity trace of an empty log is empty") {
  EventLog log;
  log.meta.total_time = 0.0;
  StepCurve trace = intensity_trace(log, 10.0);
  CHECK(trace.value.empty());
}

TEST_CASE("counting distribution basics") {
  SUBCASE("no events means P_0 = 1") {
    EventLog log;
    log.meta.total_time = 100.0;
    std::vector<double> pn = counting_distribution({log}, 50.0);
    REQUIRE(pn.size() == 1);
    CHECK(pn[0] == 1.0);
  }
  SUBCASE("t = 0 means P_0 = 1") {
    EventLog log = exponential_log(100, 1.0, 37);
    std::vector<double> pn = counting_distribution({log}, 0.0);
    CHECK(pn[0] == 1.0);
  }
  SUBCASE("coverage violations are rejected") {
    EventLog log = exponential_log(10, 1.0, 41);
    CHECK_THROWS_AS(counting_distribution({log}, log.meta.total_time + 1.0),
                    Error);
  }
  SUBCASE("probabilities sum to one exactly") {
    std::vector<EventLog> logs;
    for (std::uint64_t s = 0; s < 20; ++s)
      logs.push_back(exponential_log(200, 1.0, 100 + s));
    double t = 50.0;
    std::vector<double> pn = counting_distribution(logs, t);
    double sum = 0.0;
    for (double p : pn) sum += p;
    CHECK(sum == 1.0);
  }
}

TEST_CASE("mean counting rate approaches the stationary intensity") {
  ModelSpec spec = oracles::slow_switching_model();
  TrajectoryEngine engine(spec);
  TrajectoryOptions options;
  options.trace_dt = 0.0;
  const double horizon = 2000.0;
  std::vector<EventLog> logs;
  for (std::uint64_t s = 0; s < 50; ++s)
    logs.push_back(
        engine.simulate(1000 + s, StopCriterion::time(horizon), options).log);
  std::vector<double> pn = counting_distribution(logs, horizon);
  double mean = 0.0, second = 0.0;
  for (std::size_t n = 0; n < pn.size(); ++n) {
    mean += static_cast<double>(n) * pn[n];
    second += static_cast<double>(n) * static_cast<double>(n) * pn[n];
  }
  double se = std::sqrt((second - mean * mean) / 50.0);
  double intensity = stationary_intensity(spec);
  CHECK(std::abs(mean / horizon - intensity) < 3.0 * se / horizon + 1e-12);
}

TEST_CASE("time-averaged post-jump weights recover the stationary weights") {
  ModelSpec spec = oracles::slow_switching_model();
  TrajectoryEngine engine(spec);
  TrajectoryOptions options;
  options.trace_dt = 0.0;
  TrajectoryResult res = engine.simulate(8, StopCriterion::events(100000), options);
  double mean_a = 0.0;
  for (const Event& e : res.log.events) mean_a += e.post_weights[0];
  mean_a /= static_cast<double>(res.log.events.size());
  JumpWeights weights = stationary_jump_weights(spec);
  CHECK(std::abs(mean_a - weights.p_inf[0]) < 0.01);
}

TEST_CASE("photon filtering keeps only photon intervals") {
  EventLog log;
  log.events.push_back({1.0, ChannelLabel::photon(), {1.0, 0.0}});
  log.events.push_back({1.5, ChannelLabel::config_to(1), {0.0, 1.0}});
  log.events.push_back({3.0, ChannelLabel::photon(), {0.0, 1.0}});
  log.meta.total_time = 3.0;
  std::vector<double> photon = intervals(log, true);
  REQUIRE(photon.size() == 1);
  CHECK(photon[0] == doctest::Approx(2.0));
  std::vector<double> all = intervals(log, false);
  REQUIRE(all.size() == 2);
  CHECK(all[0] == doctest::Approx(0.5));
}

TEST_CASE("two-sample KS distance of identical samples is zero") {
  std::vector<double> a = {0.1, 0.4, 0.9, 2.0};
  CHECK(ks_distance(a, a) == 0.0);
  std::vector<double> b = {10.0, 11.0, 12.0, 13.0};
  CHECK(ks_distance(a, b) == doctest::Approx(1.0));
}
