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

#include <cstdint>
#include <optional>
#include <vector>

#include "lindjump/event_log.hpp"
#include "lindjump/model.hpp"
#include "lindjump/rng.hpp"
#include "lindjump/superoperator.hpp"

namespace lindjump {

struct StopCriterion {
  enum class Kind { MaxEvents, MaxTime };
  Kind kind = Kind::MaxEvents;
  std::size_t max_events = 0;
  double max_time = 0.0;

  static StopCriterion events(std::size_t n) {
    return {Kind::MaxEvents, n, 0.0};
  }
  static StopCriterion time(double t) { return {Kind::MaxTime, 0, t}; }
};

enum class Algorithm {
  /// Root-find the next event time on the survival probability (default).
  Coarse,
  /// First-order stepping with a fixed small time step.
  Fine,
};

std::string to_string(Algorithm algorithm);

struct InitialCondition {
  enum class Kind {
    /// Start from an explicit vectorial state.
    State,
    /// Start from the average post-detection state of the stationary regime.
    StationaryPostJump,
  };
  Kind kind = Kind::StationaryPostJump;
  std::optional<VectorState> state;

  static InitialCondition stationary_post_jump() { return {}; }
  static InitialCondition from_state(VectorState v) {
    return {Kind::State, std::move(v)};
  }
};

struct TrajectoryOptions {
  Algorithm algorithm = Algorithm::Coarse;
  double fine_dt = 1e-3;
  /// Spacing of the sampling grid for the conditional-state traces,
  /// decoupled from the event times. <= 0 disables trace sampling.
  double trace_dt = 0.05;
  /// Explicit sampling times (sorted, nonnegative); overrides trace_dt.
  std::vector<double> sample_times;
  /// Discard this many initial events (validation aid; the stationary
  /// initial condition makes burn-in unnecessary). Trace sampling starts
  /// after the burn-in window, with the clock reset to its end.
  std::size_t burn_in_events = 0;
};

/// Uniformly sampled traces of the conditional state along one trajectory.
struct StateTraces {
  std::vector<double> time;
  std::vector<double> upper;                       // <+|rho_S^st|+>
  std::vector<std::vector<double>> config;         // config[r][i] = (R|P^st)
};

struct TrajectoryResult {
  EventLog log;
  StateTraces traces;
};

/// Stochastic unraveling engine for one model: piecewise-deterministic
/// conditional evolution with jumps sampled by either algorithm. Construction
/// precomputes the generator set, the spectral form of the no-jump generator
/// and per-channel rate functionals; the engine is immutable afterwards and
/// safe to share across threads (each trajectory owns its RngStream).
class TrajectoryEngine {
 public:
  explicit TrajectoryEngine(const ModelSpec& spec);

  const ModelSpec& spec() const { return spec_; }
  const GeneratorSet& generators() const { return gens_; }
  const Propagator& no_jump_propagator() const { return no_jump_prop_; }

  /// F_mu[v] = Tr_S[(1|J_mu|v)], clipped to zero within -1e-12.
  double event_rate(const ChannelLabel& channel, const VectorState& v) const;
  double event_rate(std::size_t channel_index, const Eigen::VectorXcd& v) const;
  double total_rate(const Eigen::VectorXcd& v) const;

  /// Normalized conditional state e^{D tau} v / Tr_S[(1|e^{D tau}|v)].
  VectorState conditional_step(const VectorState& v, double tau) const;

  /// P0[tau; v] = Tr_S[(1|e^{D tau}|v)] for a normalized physical v.
  double survival_probability(const VectorState& v, double tau) const;

  struct WaitingSample {
    double tau = 0.0;
    double survival = 0.0;           // survival at the sampled tau
    Eigen::VectorXcd state;          // unnormalized e^{D tau} v_post
  };
  /// Solve P0(tau) = r for a uniform r in (0,1): bracket by doubling from
  /// tau = 0.1, then bisect to |dP0| < 1e-10 or |dtau| < 1e-9.
  WaitingSample sample_waiting_time(const VectorState& v_post,
                                    RngStream& rng) const;
  WaitingSample sample_waiting_time(const Eigen::VectorXcd& v_post,
                                    RngStream& rng) const;

  struct FineStep {
    Eigen::VectorXcd state;
    std::optional<ChannelLabel> event;
  };
  /// One first-order step: an event fires with probability dt * sum_mu F_mu,
  /// otherwise the normalized (1 + D dt) update is taken. The step must
  /// respect dt * sum_mu F_mu < 0.1.
  FineStep step_fine(const Eigen::VectorXcd& v, double dt,
                     RngStream& rng) const;

  /// Draw a channel with probability F_mu / sum F.
  ChannelLabel select_channel(const Eigen::VectorXcd& v, RngStream& rng) const;

  struct JumpResult {
    VectorState state;
    std::vector<double> post_weights;
  };
  /// v' = J_mu v / Tr_S[(1|J_mu|v)] plus its configurational weights.
  JumpResult apply_jump(const ChannelLabel& channel, const VectorState& v) const;

  /// Average post-detection state of the stationary regime, M rho_infinity.
  VectorState stationary_post_jump_state() const;

  /// Run one trajectory. Deterministic given (seed, spec, options, stop).
  TrajectoryResult simulate(std::uint64_t seed, const StopCriterion& stop,
                            const TrajectoryOptions& options = {},
                            const InitialCondition& init = {}) const;

 private:
  Eigen::VectorXcd realize_initial(const InitialCondition& init,
                                   RngStream& rng) const;
  JumpResult apply_jump_flat(std::size_t channel_index, const Eigen::VectorXcd& v,
                             double weight_tolerance = 1e-12) const;
  std::size_t channel_index(const ChannelLabel& label) const;
  std::size_t pick_channel(const Eigen::VectorXcd& v, RngStream& rng,
                           double tolerance) const;

  ModelSpec spec_;
  GeneratorSet gens_;
  Propagator no_jump_prop_;
  // rate_rows_[mu] * v = F_mu[v] (up to the discarded imaginary residue)
  std::vector<Eigen::RowVectorXcd> rate_rows_;
  Eigen::RowVectorXcd total_rate_row_;
};

/// Pointwise mean and standard error of the trajectory traces over an
/// ensemble; trajectories are merged deterministically by index regardless
/// of the number of worker threads.
struct EnsembleCurves {
  std::vector<double> time;
  std::vector<double> upper_mean, upper_se;
  std::vector<std::vector<double>> config_mean, config_se;  // [r][i]
  std::size_t n_trajectories = 0;
};

EnsembleCurves ensemble_average(const ModelSpec& spec, std::size_t n_traj,
                                const std::vector<double>& t_grid,
                                std::uint64_t master_seed,
                                const InitialCondition& init,
                                const TrajectoryOptions& options = {},
                                std::size_t jobs = 0);

}  // namespace lindjump
