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

#pragma once

#include <functional>
#include <vector>

#include "lindjump/analytics.hpp"
#include "lindjump/event_log.hpp"

namespace lindjump {

struct HistogramSpec {
  double bin_width = 0.05;
  double lo = 0.0;
  double hi = 20.0;
  /// Keep only photon events (the experimentally resolved ones) when true.
  bool photon_only = true;
  /// Overlapping pairs (tau_i, tau_{i+1}) for the joint histogram; the
  /// non-overlapping mode serves error-bar studies.
  bool overlapping_pairs = true;
};

/// Inter-event intervals of the filtered event sequence.
std::vector<double> intervals(const EventLog& log, bool photon_only = true);

/// Density estimate of consecutive inter-event intervals, normalized by
/// (interval count x bin width) so that the in-range integral equals
/// 1 - out_of_range_fraction exactly.
DensityCurve waiting_histogram(const EventLog& log, const HistogramSpec& hspec);

/// Joint density estimate of consecutive interval pairs.
JointDensitySurface joint_histogram(const EventLog& log,
                                    const HistogramSpec& hspec);

/// Renewal-departure estimate with Poisson error propagation. Bins with
/// fewer than min_count pair counts are masked, not zeroed.
LambdaSurface lambda_estimate(const JointDensitySurface& joint,
                              const DensityCurve& marginal,
                              std::size_t min_count = 100);

/// Windowed photon count rate I(t) = [n(t+dt) - n(t)] / dt.
struct StepCurve {
  std::vector<double> time;   // window start times
  std::vector<double> value;  // rate in the window
};
StepCurve intensity_trace(const EventLog& log, double window_dt);

/// Empirical distribution of the number of photon events in [0, t] over a
/// set of logs; every log must cover time >= t. Probabilities sum to one
/// exactly.
std::vector<double> counting_distribution(const std::vector<EventLog>& logs,
                                          double t);

/// Kolmogorov-Smirnov distance between a sample and a reference CDF.
double ks_distance(std::vector<double> samples,
                   const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov distance.
double ks_distance(std::vector<double> a, std::vector<double> b);

}  // namespace lindjump
