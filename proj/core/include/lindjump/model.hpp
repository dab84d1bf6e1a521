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

#include <cstddef>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "lindjump/superoperator.hpp"

namespace lindjump {

/// How the environment switches between its configurational states.
enum class ModelKind {
  /// Transitions happen on their own, independently of the system state
  /// (classical master equation for the configurational populations).
  SelfFluctuating,
  /// Transitions only happen together with a photon emission.
  LightAssisted,
};

/// Which events the detection apparatus resolves.
enum class Scheme {
  /// A single photon counter; nothing is known about the configuration.
  PhotonOnly,
  /// Photon counter plus one detector per configurational transition target,
  /// so the configuration is known with certainty at all times.
  PhotonAndConfig,
};

std::string to_string(ModelKind kind);
std::string to_string(Scheme scheme);

/// Full parameterization of the fluorophore + reservoir. All rates and
/// frequencies are dimensionless (units of the reference Rabi frequency),
/// times are in inverse Rabi units. Everything lives in the frame rotating
/// at the laser frequency, so only the detunings enter.
struct ModelSpec {
  ModelKind kind = ModelKind::SelfFluctuating;
  Scheme scheme = Scheme::PhotonOnly;
  std::size_t r_max = 1;
  std::vector<double> rabi;      // Omega_R >= 0
  std::vector<double> detuning;  // delta_R = omega_L - omega_0 - dOmega_R
  std::vector<double> decay;     // gamma_R > 0
  /// config_rates[dest][src] is the rate of the transition src -> dest.
  /// The diagonal must be exactly zero.
  std::vector<std::vector<double>> config_rates;

  /// Total escape rate out of configuration r (column sum of config_rates).
  double rate_out_of(std::size_t r) const;
  /// decay[r] plus the total light-assisted switching rate out of r.
  double decay_tilde(std::size_t r) const;

  nlohmann::json to_json() const;
  /// FNV-1a hash of the canonical serialization; stable across runs and
  /// platforms, recorded in event logs and manifests.
  std::uint64_t hash() const;
};

/// Parse and validate a model document. Every violation is collected and
/// reported at once via ConfigError; unknown keys are violations too.
ModelSpec validate_spec(const nlohmann::json& document);

/// Identifies a measurement channel: the photon counter, or the detector for
/// configurational transitions into state `config`.
struct ChannelLabel {
  enum class Type { Photon, Config };
  Type type = Type::Photon;
  std::size_t config = 0;

  static ChannelLabel photon() { return {Type::Photon, 0}; }
  static ChannelLabel config_to(std::size_t r) { return {Type::Config, r}; }
  bool is_photon() const { return type == Type::Photon; }

  /// "ph" or "cfg:<R>"; the encoding used in event-log files.
  std::string str() const;

  bool operator==(const ChannelLabel& other) const {
    return type == other.type && (type == Type::Photon || config == other.config);
  }
};

/// The generator split {L, {J_mu}, D} of a model under a measurement scheme.
/// L generates the full dissipative evolution, each J_mu is the unnormalized
/// transformation of one detection channel, and D = L - sum_mu J_mu drives
/// the conditional no-event evolution.
struct GeneratorSet {
  Superoperator liouvillian;
  std::vector<std::pair<ChannelLabel, Superoperator>> channels;
  Superoperator no_jump;
  Superoperator jump_total;  // sum over channels, == liouvillian - no_jump
  std::size_t r_max = 1;

  const Superoperator& channel(const ChannelLabel& label) const;
};

/// Build the generator set for both model kinds and both schemes. The
/// no-jump part is assembled from its own closed form and then verified
/// entrywise (to 1e-14) against L - sum_mu J_mu.
GeneratorSet build_generators(const ModelSpec& spec);

/// Freeze the environment in configuration r: the single-configuration model
/// with that configuration's parameters (using the light-assisted total decay
/// rate when applicable).
ModelSpec reduce_to_markov(const ModelSpec& spec, std::size_t r);

/// Effective Markovian parameters in the fast-fluctuation limit, together
/// with the stationary distribution of the classical configuration chain.
struct FastLimitParams {
  double decay_bar = 0.0;
  double rabi_bar = 0.0;
  double detuning_bar = 0.0;
  std::vector<double> stationary_config;
};

/// Self-fluctuating models only. Raises StationaryAmbiguityError when the
/// classical chain has no unique stationary distribution.
FastLimitParams fast_limit_params(const ModelSpec& spec);

}  // namespace lindjump
