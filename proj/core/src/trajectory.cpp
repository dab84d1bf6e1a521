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

#include "lindjump/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

namespace lindjump {

namespace {

constexpr double kRateTolerance = 1e-12;
// The first-order conditional update carries a global O(dt * stretch) error
// and the upper population touches exact zeros, so fine-path states can dip
// below the physical cone by far more than roundoff. Those rates mean "no
// event"; only excursions beyond this bound indicate real corruption.
constexpr double kFineRateTolerance = 0.5;

Eigen::RowVectorXcd trace_row(std::size_t dim) {
  Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(dim);
  for (std::size_t r = 0; 4 * r < dim; ++r) {
    row[4 * r + 0] = 1.0;
    row[4 * r + 3] = 1.0;
  }
  return row;
}

double clipped_rate(Complex raw, const std::string& what,
                    double tolerance = kRateTolerance) {
  double rate = raw.real();
  if (rate < -tolerance)
    throw NumericalError(what + " rate is negative beyond tolerance: " +
                         std::to_string(rate));
  return rate < 0.0 ? 0.0 : rate;
}

std::vector<double> block_weights(const Eigen::VectorXcd& flat,
                                  double tolerance) {
  std::vector<double> w(static_cast<std::size_t>(flat.size() / 4));
  double sum = 0.0;
  for (std::size_t r = 0; r < w.size(); ++r) {
    double value = (flat[4 * r] + flat[4 * r + 3]).real();
    if (value < -tolerance)
      throw NumericalError("post-jump block weight is negative: " +
                           std::to_string(value));
    w[r] = value < 0.0 ? 0.0 : value;
    sum += w[r];
  }
  for (double& x : w) x /= sum;
  return w;
}

}  // namespace

std::string to_string(Algorithm algorithm) {
  return algorithm == Algorithm::Coarse ? "coarse" : "fine";
}

TrajectoryEngine::TrajectoryEngine(const ModelSpec& spec)
    : spec_(spec),
      gens_(build_generators(spec)),
      no_jump_prop_(gens_.no_jump) {
  const Eigen::RowVectorXcd row = trace_row(gens_.liouvillian.dim());
  total_rate_row_ = Eigen::RowVectorXcd::Zero(gens_.liouvillian.dim());
  for (const auto& [label, j] : gens_.channels) {
    rate_rows_.push_back(row * j.matrix());
    total_rate_row_ += rate_rows_.back();
  }
}

std::size_t TrajectoryEngine::channel_index(const ChannelLabel& label) const {
  for (std::size_t i = 0; i < gens_.channels.size(); ++i)
    if (gens_.channels[i].first == label) return i;
  throw DimensionError("no channel " + label.str() + " in this model");
}

double TrajectoryEngine::event_rate(const ChannelLabel& channel,
                                    const VectorState& v) const {
  return event_rate(channel_index(channel), vectorize(v));
}

double TrajectoryEngine::event_rate(std::size_t channel_index,
                                    const Eigen::VectorXcd& v) const {
  return clipped_rate((rate_rows_.at(channel_index) * v).value(),
                      "channel " + gens_.channels[channel_index].first.str());
}

double TrajectoryEngine::total_rate(const Eigen::VectorXcd& v) const {
  return clipped_rate((total_rate_row_ * v).value(), "total event");
}

VectorState TrajectoryEngine::conditional_step(const VectorState& v,
                                               double tau) const {
  if (tau == 0.0) return v;
  Eigen::VectorXcd u = no_jump_prop_.apply(tau, vectorize(v));
  double norm = trace_functional(u);
  if (!(norm > 1e-300))
    throw UnderflowError(
        "conditional propagation lost all norm; take a shorter step");
  VectorState out = devectorize(u / norm, v.r_max());
  PhysicalityReport report = check_physical(out);
  if (report.min_eigenvalue < -1e-9)
    throw NumericalError("conditional state left the physical cone");
  return out;
}

double TrajectoryEngine::survival_probability(const VectorState& v,
                                              double tau) const {
  double s = trace_functional(no_jump_prop_.apply(tau, vectorize(v)));
  if (s > 1.0 + 1e-9)
    throw NumericalError("survival probability " + std::to_string(s) +
                         " exceeds one");
  if (s < -kRateTolerance)
    throw NumericalError("survival probability is negative: " + std::to_string(s));
  return s < 0.0 ? 0.0 : s;
}

TrajectoryEngine::WaitingSample TrajectoryEngine::sample_waiting_time(
    const VectorState& v_post, RngStream& rng) const {
  return sample_waiting_time(vectorize(v_post), rng);
}

TrajectoryEngine::WaitingSample TrajectoryEngine::sample_waiting_time(
    const Eigen::VectorXcd& v_post, RngStream& rng) const {
  const double target = rng.uniform01();
  const ConditionalFlow flow(no_jump_prop_, v_post);
  const double cap = 1e4;

  // Bracket [lo, hi] with survival(lo) >= target > survival(hi).
  double lo = 0.0;
  double hi = 0.1;
  double s_hi = flow.survival(hi);
  while (s_hi >= target) {
    lo = hi;
    hi *= 2.0;
    if (hi > cap) {
      double residual = flow.survival(cap);
      if (residual >= target)
        throw DarkStateError(
            "no event within the time cap; residual survival " +
                std::to_string(residual),
            residual);
      hi = cap;
      break;
    }
    s_hi = flow.survival(hi);
  }

  double mid = 0.5 * (lo + hi);
  double s_mid = flow.survival(mid);
  while (hi - lo > 1e-9 && std::abs(s_mid - target) >= 1e-10) {
    if (s_mid >= target)
      lo = mid;
    else
      hi = mid;
    mid = 0.5 * (lo + hi);
    s_mid = flow.survival(mid);
  }
  return {mid, s_mid, flow.state(mid)};
}

TrajectoryEngine::FineStep TrajectoryEngine::step_fine(const Eigen::VectorXcd& v,
                                                       double dt,
                                                       RngStream& rng) const {
  const double total = clipped_rate((total_rate_row_ * v).value(), "total event",
                                    kFineRateTolerance);
  const double event_probability = dt * total;
  if (!(event_probability < 0.1))
    throw StepSizeError("dt * total rate = " + std::to_string(event_probability) +
                        " violates the first-order accuracy guard (< 0.1)");
  if (total > 0.0 && rng.uniform01() < event_probability) {
    std::size_t channel = pick_channel(v, rng, kFineRateTolerance);
    JumpResult jump = apply_jump_flat(channel, v, kFineRateTolerance);
    return {vectorize(jump.state), gens_.channels[channel].first};
  }
  Eigen::VectorXcd u = v + dt * (gens_.no_jump.matrix() * v);
  double norm = trace_functional(u);
  if (!(norm > 1e-300))
    throw UnderflowError("first-order update lost all norm");
  u /= norm;
  if (u.cwiseAbs().maxCoeff() > 10.0)
    throw StepSizeError(
        "first-order conditional state left the physical regime; reduce dt");
  return {u, std::nullopt};
}

std::size_t TrajectoryEngine::pick_channel(const Eigen::VectorXcd& v,
                                           RngStream& rng,
                                           double tolerance) const {
  if (gens_.channels.size() == 1) {
    if (clipped_rate((rate_rows_[0] * v).value(), "channel", tolerance) <= 0.0)
      throw NoEventError("all channel rates vanish; no event to select");
    return 0;
  }
  std::vector<double> rates(gens_.channels.size());
  double total = 0.0;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    rates[i] = clipped_rate((rate_rows_[i] * v).value(),
                            "channel " + gens_.channels[i].first.str(),
                            tolerance);
    total += rates[i];
  }
  if (!(total > 0.0))
    throw NoEventError("all channel rates vanish; no event to select");
  double u = rng.uniform01() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    acc += rates[i];
    if (u <= acc) return i;
  }
  return gens_.channels.size() - 1;
}

ChannelLabel TrajectoryEngine::select_channel(const Eigen::VectorXcd& v,
                                              RngStream& rng) const {
  return gens_.channels[pick_channel(v, rng, kRateTolerance)].first;
}

TrajectoryEngine::JumpResult TrajectoryEngine::apply_jump_flat(
    std::size_t channel_index, const Eigen::VectorXcd& v,
    double weight_tolerance) const {
  Eigen::VectorXcd u = gens_.channels[channel_index].second.matrix() * v;
  double norm = trace_functional(u);
  if (!(norm > 1e-300))
    throw NoEventError("channel " + gens_.channels[channel_index].first.str() +
                       " has zero weight on this state");
  u /= norm;
  return {devectorize(u, gens_.r_max), block_weights(u, weight_tolerance)};
}

TrajectoryEngine::JumpResult TrajectoryEngine::apply_jump(
    const ChannelLabel& channel, const VectorState& v) const {
  return apply_jump_flat(channel_index(channel), vectorize(v));
}

VectorState TrajectoryEngine::stationary_post_jump_state() const {
  VectorState stationary = stationary_null_state(gens_.liouvillian);
  Eigen::VectorXcd u = gens_.jump_total.matrix() * vectorize(stationary);
  double norm = trace_functional(u);
  if (!(norm > 1e-300))
    throw DarkStateError("stationary state never triggers any detector", 1.0);
  return devectorize(u / norm, gens_.r_max);
}

Eigen::VectorXcd TrajectoryEngine::realize_initial(const InitialCondition& init,
                                                   RngStream& rng) const {
  Eigen::VectorXcd v;
  if (init.kind == InitialCondition::Kind::State) {
    if (!init.state) throw Error("initial condition carries no state");
    if (init.state->r_max() != gens_.r_max)
      throw DimensionError("initial state has the wrong number of blocks");
    v = vectorize(*init.state);
  } else {
    v = vectorize(stationary_post_jump_state());
  }
  double norm = trace_functional(v);
  if (std::abs(norm - 1.0) > 1e-8)
    throw NumericalError("initial state is not normalized");

  if (spec_.scheme == Scheme::PhotonAndConfig) {
    // A configuration-resolved trajectory must know its configuration with
    // certainty, so a configuration-mixed start is realized by sampling the
    // configuration marginal once.
    std::vector<double> weights = block_weights(v, kRateTolerance);
    double top = *std::max_element(weights.begin(), weights.end());
    if (top < 1.0 - 1e-12) {
      double u = rng.uniform01();
      double acc = 0.0;
      std::size_t pick = weights.size() - 1;
      for (std::size_t r = 0; r < weights.size(); ++r) {
        acc += weights[r];
        if (u <= acc) {
          pick = r;
          break;
        }
      }
      Eigen::VectorXcd one_hot = Eigen::VectorXcd::Zero(v.size());
      one_hot.segment<4>(4 * pick) = v.segment<4>(4 * pick) / weights[pick];
      v = one_hot;
    }
  }
  return v;
}

TrajectoryResult TrajectoryEngine::simulate(std::uint64_t seed,
                                            const StopCriterion& stop,
                                            const TrajectoryOptions& options,
                                            const InitialCondition& init) const {
  RngStream rng(seed);
  Eigen::VectorXcd v = realize_initial(init, rng);

  const bool explicit_grid = !options.sample_times.empty();
  const bool want_traces = explicit_grid || options.trace_dt > 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  std::size_t sample_idx = 0;
  auto next_sample_time = [&]() -> double {
    if (!want_traces) return inf;
    if (explicit_grid)
      return sample_idx < options.sample_times.size()
                 ? options.sample_times[sample_idx]
                 : inf;
    return static_cast<double>(sample_idx) * options.trace_dt;
  };

  TrajectoryResult result;
  result.traces.config.assign(gens_.r_max, {});
  auto record_sample = [&](const Eigen::VectorXcd& state) {
    result.traces.time.push_back(next_sample_time());
    double upper = 0.0;
    for (std::size_t r = 0; r < gens_.r_max; ++r) {
      upper += state[4 * r].real();
      result.traces.config[r].push_back((state[4 * r] + state[4 * r + 3]).real());
    }
    result.traces.upper.push_back(upper);
    ++sample_idx;
  };

  const double max_time = stop.kind == StopCriterion::Kind::MaxTime
                              ? stop.max_time
                              : inf;
  const std::size_t max_events = stop.kind == StopCriterion::Kind::MaxEvents
                                     ? stop.max_events
                                     : std::numeric_limits<std::size_t>::max();
  std::size_t burn_remaining = options.burn_in_events;
  double time_offset = 0.0;  // subtracted once burn-in completes
  double t = 0.0;

  auto stop_reached = [&]() {
    if (stop.kind == StopCriterion::Kind::MaxEvents)
      return result.log.events.size() >= max_events;
    return t >= max_time;
  };

  if (options.algorithm == Algorithm::Coarse) {
    while (!stop_reached()) {
      WaitingSample next = sample_waiting_time(v, rng);
      const double event_time = t + next.tau;
      const ConditionalFlow flow(no_jump_prop_, v);
      double limit = std::min(event_time, max_time);
      while (burn_remaining == 0 && next_sample_time() <= limit - time_offset) {
        double s = next_sample_time() + time_offset - t;
        Eigen::VectorXcd u = flow.state(s);
        record_sample(u / trace_functional(u));
      }
      if (event_time > max_time) {
        t = max_time;
        break;
      }
      t = event_time;
      Eigen::VectorXcd pre_jump = next.state / next.survival;
      ChannelLabel channel = select_channel(pre_jump, rng);
      JumpResult jump = apply_jump_flat(channel_index(channel), pre_jump);
      v = vectorize(jump.state);
      if (burn_remaining > 0) {
        --burn_remaining;
        if (burn_remaining == 0) time_offset = t;
      } else {
        result.log.events.push_back(
            {t - time_offset, channel, std::move(jump.post_weights)});
      }
    }
  } else {
    const double dt = options.fine_dt;
    if (!(dt > 0.0)) throw StepSizeError("fine stepping needs dt > 0");
    // Precomputed first-order update; one matrix-vector product per step.
    const Eigen::MatrixXcd stepper =
        Eigen::MatrixXcd::Identity(v.size(), v.size()) +
        dt * gens_.no_jump.matrix();
    while (!stop_reached()) {
      if (burn_remaining == 0 && next_sample_time() <= t - time_offset) {
        record_sample(v);
        continue;
      }
      if (t >= max_time) break;
      const double total = clipped_rate((total_rate_row_ * v).value(),
                                        "total event", kFineRateTolerance);
      const double event_probability = dt * total;
      if (!(event_probability < 0.1))
        throw StepSizeError("dt * total rate = " +
                            std::to_string(event_probability) +
                            " violates the first-order accuracy guard (< 0.1)");
      t += dt;
      if (total > 0.0 && rng.uniform01() < event_probability) {
        std::size_t channel = pick_channel(v, rng, kFineRateTolerance);
        JumpResult jump = apply_jump_flat(channel, v, kFineRateTolerance);
        v = vectorize(jump.state);
        if (burn_remaining > 0) {
          --burn_remaining;
          if (burn_remaining == 0) time_offset = t;
        } else {
          result.log.events.push_back({t - time_offset,
                                       gens_.channels[channel].first,
                                       std::move(jump.post_weights)});
        }
      } else {
        Eigen::VectorXcd u = stepper * v;
        double norm = trace_functional(u);
        if (!(norm > 1e-300))
          throw UnderflowError("first-order update lost all norm");
        v = u / norm;
        if (v.cwiseAbs().maxCoeff() > 10.0)
          throw StepSizeError(
              "first-order conditional state left the physical regime; "
              "reduce dt");
      }
    }
    while (burn_remaining == 0 && next_sample_time() <= t - time_offset)
      record_sample(v);
  }

  result.log.meta.seed = seed;
  result.log.meta.algorithm = to_string(options.algorithm);
  result.log.meta.spec_hash = spec_.hash();
  result.log.meta.total_time =
      stop.kind == StopCriterion::Kind::MaxTime
          ? max_time
          : (result.log.events.empty() ? 0.0 : result.log.events.back().time);
  result.log.meta.event_count = result.log.events.size();
  result.log.meta.scheme = spec_.scheme;
  result.log.validate();
  return result;
}

EnsembleCurves ensemble_average(const ModelSpec& spec, std::size_t n_traj,
                                const std::vector<double>& t_grid,
                                std::uint64_t master_seed,
                                const InitialCondition& init,
                                const TrajectoryOptions& options,
                                std::size_t jobs) {
  if (n_traj < 1) throw Error("ensemble needs at least one trajectory");
  if (t_grid.empty()) throw Error("ensemble needs a sampling grid");

  const TrajectoryEngine engine(spec);
  TrajectoryOptions per_traj = options;
  per_traj.sample_times = t_grid;
  const StopCriterion stop = StopCriterion::time(t_grid.back());

  const std::size_t n_grid = t_grid.size();
  const std::size_t r_max = spec.r_max;
  std::vector<std::vector<double>> upper(n_traj);
  std::vector<std::vector<std::vector<double>>> config(n_traj);

  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, n_traj);

  auto worker = [&](std::size_t thread_id) {
    for (std::size_t i = thread_id; i < n_traj; i += jobs) {
      TrajectoryResult res = engine.simulate(RngStream::derive(master_seed, i),
                                             stop, per_traj, init);
      if (res.traces.time.size() != n_grid)
        throw NumericalError("trajectory sampled an unexpected grid size");
      upper[i] = std::move(res.traces.upper);
      config[i] = std::move(res.traces.config);
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t k = 0; k < jobs; ++k) pool.emplace_back(worker, k);
    for (auto& th : pool) th.join();
  }

  EnsembleCurves out;
  out.time = t_grid;
  out.n_trajectories = n_traj;
  out.upper_mean.assign(n_grid, 0.0);
  out.upper_se.assign(n_grid, 0.0);
  out.config_mean.assign(r_max, std::vector<double>(n_grid, 0.0));
  out.config_se.assign(r_max, std::vector<double>(n_grid, 0.0));

  auto reduce = [n_traj](auto getter, std::vector<double>& mean,
                         std::vector<double>& se) {
    const std::size_t n_grid = mean.size();
    for (std::size_t g = 0; g < n_grid; ++g) {
      double m = 0.0;
      for (std::size_t i = 0; i < n_traj; ++i) m += getter(i, g);
      m /= static_cast<double>(n_traj);
      double var = 0.0;
      for (std::size_t i = 0; i < n_traj; ++i) {
        double d = getter(i, g) - m;
        var += d * d;
      }
      mean[g] = m;
      se[g] = n_traj > 1 ? std::sqrt(var / (static_cast<double>(n_traj) *
                                            static_cast<double>(n_traj - 1)))
                         : 0.0;
    }
  };
  reduce([&](std::size_t i, std::size_t g) { return upper[i][g]; },
         out.upper_mean, out.upper_se);
  for (std::size_t r = 0; r < r_max; ++r)
    reduce([&](std::size_t i, std::size_t g) { return config[i][r][g]; },
           out.config_mean[r], out.config_se[r]);
  return out;
}

}  // namespace lindjump
