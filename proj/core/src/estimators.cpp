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

#include "lindjump/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>

namespace lindjump {

namespace {

void check_histogram_spec(const HistogramSpec& hspec) {
  if (!(hspec.bin_width > 0.0)) throw Error("histogram bin width must be > 0");
  if (!(hspec.hi > hspec.lo)) throw Error("histogram range is empty");
}

std::size_t bin_count(const HistogramSpec& hspec) {
  return static_cast<std::size_t>(
      std::ceil((hspec.hi - hspec.lo) / hspec.bin_width - 1e-9));
}

std::vector<double> bin_centers(const HistogramSpec& hspec, std::size_t n) {
  std::vector<double> centers(n);
  for (std::size_t i = 0; i < n; ++i)
    centers[i] = hspec.lo + (static_cast<double>(i) + 0.5) * hspec.bin_width;
  return centers;
}

// Index of the bin holding tau, or npos when out of range.
std::size_t bin_of(const HistogramSpec& hspec, std::size_t n, double tau) {
  if (tau < hspec.lo) return static_cast<std::size_t>(-1);
  auto idx = static_cast<std::size_t>((tau - hspec.lo) / hspec.bin_width);
  return idx < n ? idx : static_cast<std::size_t>(-1);
}

}  // namespace

std::vector<double> intervals(const EventLog& log, bool photon_only) {
  std::vector<double> times;
  times.reserve(log.events.size());
  for (const Event& e : log.events)
    if (!photon_only || e.channel.is_photon()) times.push_back(e.time);
  std::vector<double> out;
  if (times.size() < 2) return out;
  out.reserve(times.size() - 1);
  for (std::size_t i = 1; i < times.size(); ++i)
    out.push_back(times[i] - times[i - 1]);
  return out;
}

DensityCurve waiting_histogram(const EventLog& log, const HistogramSpec& hspec) {
  check_histogram_spec(hspec);
  std::vector<double> taus = intervals(log, hspec.photon_only);
  if (taus.empty())
    throw Error("waiting histogram needs at least two filtered events");

  const std::size_t n = bin_count(hspec);
  DensityCurve curve;
  curve.kind = CurveKind::Estimated;
  curve.tau = bin_centers(hspec, n);
  curve.counts.assign(n, 0);
  std::size_t out_of_range = 0;
  for (double tau : taus) {
    std::size_t idx = bin_of(hspec, n, tau);
    if (idx == static_cast<std::size_t>(-1))
      ++out_of_range;
    else
      ++curve.counts[idx];
  }
  const double total = static_cast<double>(taus.size());
  curve.density.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    curve.density[i] =
        static_cast<double>(curve.counts[i]) / (total * hspec.bin_width);
  curve.out_of_range_fraction = static_cast<double>(out_of_range) / total;
  curve.normalization_residual = curve.out_of_range_fraction;
  curve.low_statistics = taus.size() < 100;
  return curve;
}

JointDensitySurface joint_histogram(const EventLog& log,
                                    const HistogramSpec& hspec) {
  check_histogram_spec(hspec);
  std::vector<double> taus = intervals(log, hspec.photon_only);
  if (taus.size() < 2)
    throw Error("joint histogram needs at least three filtered events");

  const std::size_t n = bin_count(hspec);
  JointDensitySurface surface;
  surface.kind = CurveKind::Estimated;
  std::vector<double> centers = bin_centers(hspec, n);
  surface.tau1 = centers;
  surface.tau2 = centers;
  surface.counts.assign(n, std::vector<std::size_t>(n, 0));
  const std::size_t stride = hspec.overlapping_pairs ? 1 : 2;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i + 1 < taus.size(); i += stride) {
    ++pairs;
    std::size_t b1 = bin_of(hspec, n, taus[i]);
    std::size_t b2 = bin_of(hspec, n, taus[i + 1]);
    if (b1 != static_cast<std::size_t>(-1) && b2 != static_cast<std::size_t>(-1))
      ++surface.counts[b1][b2];
  }
  surface.value.assign(n, std::vector<double>(n, 0.0));
  const double norm =
      static_cast<double>(pairs) * hspec.bin_width * hspec.bin_width;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      surface.value[i][j] = static_cast<double>(surface.counts[i][j]) / norm;
  surface.low_statistics = pairs < 100;
  return surface;
}

LambdaSurface lambda_estimate(const JointDensitySurface& joint,
                              const DensityCurve& marginal,
                              std::size_t min_count) {
  if (joint.tau1.size() != marginal.tau.size() ||
      joint.tau2.size() != marginal.tau.size())
    throw DimensionError("joint and marginal histograms use different binning");
  for (std::size_t i = 0; i < marginal.tau.size(); ++i)
    if (std::abs(joint.tau1[i] - marginal.tau[i]) > 1e-12)
      throw DimensionError("joint and marginal histograms use different binning");
  if (joint.counts.empty() || marginal.counts.empty())
    throw Error("lambda estimation needs counted (estimated) inputs");

  const std::size_t n = marginal.tau.size();
  LambdaSurface out;
  out.tau1 = joint.tau1;
  out.tau2 = joint.tau2;
  out.value.assign(n, std::vector<double>(n, 0.0));
  out.masked.assign(n, std::vector<bool>(n, true));
  out.stderr_.assign(n, std::vector<double>(n, 0.0));
  out.counts.assign(n, std::vector<std::size_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t pair_count = joint.counts[i][j];
      out.counts[i][j] = pair_count;
      if (pair_count < min_count || marginal.counts[i] == 0 ||
          marginal.counts[j] == 0)
        continue;
      double denom = marginal.density[i] * marginal.density[j];
      if (!(denom > 0.0)) continue;
      double ratio = joint.value[i][j] / denom;
      out.masked[i][j] = false;
      out.value[i][j] = ratio - 1.0;
      // Independent-Poisson propagation; the (small, negative) correlation
      // between pair and marginal counts is neglected.
      out.stderr_[i][j] =
          ratio * std::sqrt(1.0 / static_cast<double>(pair_count) +
                            1.0 / static_cast<double>(marginal.counts[i]) +
                            1.0 / static_cast<double>(marginal.counts[j]));
    }
  return out;
}

StepCurve intensity_trace(const EventLog& log, double window_dt) {
  if (!(window_dt > 0.0)) throw Error("intensity window must be > 0");
  StepCurve curve;
  const double total_time = log.meta.total_time;
  if (total_time < window_dt) return curve;

  std::vector<double> photon_times;
  for (const Event& e : log.events)
    if (e.channel.is_photon()) photon_times.push_back(e.time);
  if (photon_times.size() >= 2) {
    double min_gap = photon_times[1] - photon_times[0];
    for (std::size_t i = 2; i < photon_times.size(); ++i)
      min_gap = std::min(min_gap, photon_times[i] - photon_times[i - 1]);
    if (window_dt < min_gap)
      std::cerr << "lindjump: warning: intensity window " << window_dt
                << " is shorter than the smallest photon spacing " << min_gap
                << "\n";
  }

  const auto n_windows = static_cast<std::size_t>(total_time / window_dt);
  std::size_t cursor = 0;
  for (std::size_t w = 0; w < n_windows; ++w) {
    const double lo = static_cast<double>(w) * window_dt;
    const double hi = lo + window_dt;
    while (cursor < photon_times.size() && photon_times[cursor] < lo) ++cursor;
    std::size_t count = 0;
    std::size_t probe = cursor;
    while (probe < photon_times.size() && photon_times[probe] < hi) {
      ++count;
      ++probe;
    }
    curve.time.push_back(lo);
    curve.value.push_back(static_cast<double>(count) / window_dt);
  }
  return curve;
}

std::vector<double> counting_distribution(const std::vector<EventLog>& logs,
                                          double t) {
  if (!(t >= 0.0)) throw Error("counting distribution needs t >= 0");
  std::vector<std::size_t> counts;
  counts.reserve(logs.size());
  std::size_t max_n = 0;
  for (const EventLog& log : logs) {
    if (log.meta.total_time < t)
      throw Error("an event log covers only t = " +
                  std::to_string(log.meta.total_time) +
                  ", shorter than the requested " + std::to_string(t));
    std::size_t n = 0;
    for (const Event& e : log.events)
      if (e.channel.is_photon() && e.time <= t) ++n;
    counts.push_back(n);
    max_n = std::max(max_n, n);
  }
  std::vector<double> pn(max_n + 1, 0.0);
  for (std::size_t n : counts) pn[n] += 1.0;
  for (double& p : pn) p /= static_cast<double>(counts.size());
  // Every log contributes exactly one count, so the distribution must sum to
  // one; push the rounding residue into the largest entry.
  double sum = 0.0;
  for (double p : pn) sum += p;
  auto largest = std::max_element(pn.begin(), pn.end());
  *largest += 1.0 - sum;
  return pn;
}

double ks_distance(std::vector<double> samples,
                   const std::function<double(double)>& cdf) {
  if (samples.empty()) throw Error("KS distance needs samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double f = cdf(samples[i]);
    ks = std::max(ks, std::abs(static_cast<double>(i + 1) / n - f));
    ks = std::max(ks, std::abs(static_cast<double>(i) / n - f));
  }
  return ks;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error("KS distance needs samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double ks = 0.0;
  std::size_t ia = 0, ib = 0;
  while (ia < a.size() && ib < b.size()) {
    double x = std::min(a[ia], b[ib]);
    while (ia < a.size() && a[ia] <= x) ++ia;
    while (ib < b.size() && b[ib] <= x) ++ib;
    ks = std::max(ks, std::abs(static_cast<double>(ia) / na -
                               static_cast<double>(ib) / nb));
  }
  return ks;
}

}  // namespace lindjump
