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
//
// Test-only oracles, independent of the library code paths they check.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "lindjump/model.hpp"
#include "lindjump/vector_state.hpp"

namespace oracles {

// Classical fixed-step RK4 for dv/dt = G v.
inline Eigen::VectorXcd rk4_flow(const Eigen::MatrixXcd& g, double tau,
                                 Eigen::VectorXcd v, double step) {
  const int n = std::max(1, static_cast<int>(std::ceil(tau / step)));
  const double h = tau / n;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXcd k1 = g * v;
    Eigen::VectorXcd k2 = g * (v + 0.5 * h * k1);
    Eigen::VectorXcd k3 = g * (v + 0.5 * h * k2);
    Eigen::VectorXcd k4 = g * (v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return v;
}

// Step-doubling oracle for e^{G tau} v: integrate at h and h/2 and keep the
// Richardson-extrapolated result once the two agree.
inline Eigen::VectorXcd expm_oracle(const Eigen::MatrixXcd& g, double tau,
                                    const Eigen::VectorXcd& v,
                                    double step = 1e-4) {
  Eigen::VectorXcd coarse = rk4_flow(g, tau, v, step);
  Eigen::VectorXcd fine = rk4_flow(g, tau, v, step / 2.0);
  // RK4 halving gains a factor 16; the extrapolation removes the leading term.
  return fine + (fine - coarse) / 15.0;
}

inline std::mt19937_64 test_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Eigen::MatrixXcd random_matrix(std::mt19937_64& rng, int dim,
                                      double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::MatrixXcd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      m(i, j) = std::complex<double>(normal(rng), normal(rng));
  return m;
}

// Random normalized state with Hermitian positive-semidefinite blocks.
inline lindjump::VectorState random_physical_state(std::mt19937_64& rng,
                                                   std::size_t r_max) {
  std::vector<lindjump::Block> blocks(r_max);
  double trace = 0.0;
  for (std::size_t r = 0; r < r_max; ++r) {
    Eigen::Matrix2cd a = random_matrix(rng, 2);
    blocks[r] = a * a.adjoint();
    trace += blocks[r].trace().real();
  }
  for (auto& b : blocks) b /= trace;
  return lindjump::VectorState(std::move(blocks));
}

// The slow lifetime-switching sample model: two configurations that only
// change the decay rate, switching much slower than the emission rate.
inline lindjump::ModelSpec slow_switching_model(
    lindjump::Scheme scheme = lindjump::Scheme::PhotonOnly) {
  lindjump::ModelSpec spec;
  spec.kind = lindjump::ModelKind::SelfFluctuating;
  spec.scheme = scheme;
  spec.r_max = 2;
  spec.rabi = {1.0, 1.0};
  spec.detuning = {0.0, 0.0};
  spec.decay = {1.0, 10.0};
  spec.config_rates = {{0.0, 0.003}, {0.009, 0.0}};
  return spec;
}

// The light-assisted sample model: configuration changes ride on photon
// emissions.
inline lindjump::ModelSpec light_assisted_model(
    lindjump::Scheme scheme = lindjump::Scheme::PhotonOnly) {
  lindjump::ModelSpec spec;
  spec.kind = lindjump::ModelKind::LightAssisted;
  spec.scheme = scheme;
  spec.r_max = 2;
  spec.rabi = {1.0, 1.0};
  spec.detuning = {0.0, 0.0};
  spec.decay = {1.8, 0.15};
  spec.config_rates = {{0.0, 0.35}, {0.2, 0.0}};
  return spec;
}

inline lindjump::ModelSpec single_config_model(double decay = 1.0,
                                               double rabi = 1.0,
                                               double detuning = 0.0) {
  lindjump::ModelSpec spec;
  spec.kind = lindjump::ModelKind::SelfFluctuating;
  spec.scheme = lindjump::Scheme::PhotonOnly;
  spec.r_max = 1;
  spec.rabi = {rabi};
  spec.detuning = {detuning};
  spec.decay = {decay};
  spec.config_rates = {{0.0}};
  return spec;
}

// Random well-behaved self-fluctuating model.
inline lindjump::ModelSpec random_model(std::mt19937_64& rng, std::size_t r_max,
                                        bool light_assisted = false) {
  std::uniform_real_distribution<double> unit(0.1, 1.0);
  lindjump::ModelSpec spec;
  spec.kind = light_assisted ? lindjump::ModelKind::LightAssisted
                             : lindjump::ModelKind::SelfFluctuating;
  spec.scheme = lindjump::Scheme::PhotonOnly;
  spec.r_max = r_max;
  for (std::size_t r = 0; r < r_max; ++r) {
    spec.rabi.push_back(unit(rng) * 2.0);
    spec.detuning.push_back(unit(rng) - 0.5);
    spec.decay.push_back(unit(rng) * 3.0);
  }
  spec.config_rates.assign(r_max, std::vector<double>(r_max, 0.0));
  for (std::size_t i = 0; i < r_max; ++i)
    for (std::size_t j = 0; j < r_max; ++j)
      if (i != j) spec.config_rates[i][j] = unit(rng) * 0.5;
  return spec;
}

}  // namespace oracles
