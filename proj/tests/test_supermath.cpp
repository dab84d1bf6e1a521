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

#include "lindjump/model.hpp"
#include "lindjump/superoperator.hpp"
#include "lindjump/vector_state.hpp"
#include "oracles.hpp"

using namespace lindjump;

TEST_CASE("vectorize uses the block-major (++, +-, -+, --) layout") {
  VectorState ground = VectorState::ground({1.0});
  Eigen::VectorXcd flat = vectorize(ground);
  CHECK(flat.size() == 4);
  CHECK(flat[0] == Complex(0.0));
  CHECK(flat[1] == Complex(0.0));
  CHECK(flat[2] == Complex(0.0));
  CHECK(flat[3] == Complex(1.0));
}

TEST_CASE("vectorize round-trips a random two-block state exactly") {
  auto rng = oracles::test_rng(7);
  VectorState state = oracles::random_physical_state(rng, 2);
  VectorState back = devectorize(vectorize(state), 2);
  CHECK(back == state);
}

TEST_CASE("identity-scaled blocks land on the diagonal slots") {
  VectorState state(2);
  state.block(0) = 0.25 * Block::Identity();
  state.block(1) = 0.25 * Block::Identity();
  Eigen::VectorXcd flat = vectorize(state);
  for (int r = 0; r < 2; ++r) {
    CHECK(flat[4 * r + 0] == Complex(0.25));
    CHECK(flat[4 * r + 3] == Complex(0.25));
    CHECK(flat[4 * r + 1] == Complex(0.0));
    CHECK(flat[4 * r + 2] == Complex(0.0));
  }
}

TEST_CASE("devectorize rejects mismatched lengths") {
  Eigen::VectorXcd flat = Eigen::VectorXcd::Zero(8);
  CHECK_THROWS_AS(devectorize(flat, 3), DimensionError);
}

TEST_CASE("trace functional") {
  SUBCASE("normalized physical state") {
    auto rng = oracles::test_rng(11);
    VectorState state = oracles::random_physical_state(rng, 3);
    CHECK(trace_functional(state) == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("zero state") { CHECK(trace_functional(VectorState(2)) == 0.0); }
  SUBCASE("mixture of projectors") {
    VectorState state(2);
    state.block(0)(0, 0) = 0.3;  // 0.3 |+><+|
    state.block(1)(1, 1) = 0.7;  // 0.7 |-><-|
    CHECK(trace_functional(state) == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("imaginary residue beyond tolerance is corruption") {
    VectorState state(1);
    state.block(0)(0, 0) = Complex(0.5, 1e-6);
    state.block(0)(1, 1) = 0.5;
    CHECK_THROWS_AS(trace_functional(state), NumericalError);
  }
}

TEST_CASE("expm_action at tau = 0 is the exact identity") {
  auto rng = oracles::test_rng(3);
  Superoperator g(oracles::random_matrix(rng, 8));
  VectorState v = oracles::random_physical_state(rng, 2);
  CHECK(expm_action(g, 0.0, v) == v);
}

TEST_CASE("expm_action on a diagonal generator is scalar decay") {
  const double gamma = 0.7;
  Superoperator g(Eigen::MatrixXcd(-gamma *
                                   Eigen::MatrixXcd::Identity(4, 4)));
  Eigen::VectorXcd basis = Eigen::VectorXcd::Zero(4);
  basis[2] = 1.0;
  Eigen::VectorXcd evolved = expm_action(g, 1.3, basis);
  CHECK(std::abs(evolved[2] - std::exp(-gamma * 1.3)) < 1e-14);
}

TEST_CASE("expm_action matches the step-doubling RK4 oracle") {
  auto rng = oracles::test_rng(21);
  for (int trial = 0; trial < 4; ++trial) {
    Eigen::MatrixXcd g = oracles::random_matrix(rng, 8);
    Eigen::VectorXcd v = oracles::random_matrix(rng, 8).col(0);
    Eigen::VectorXcd expected = oracles::expm_oracle(g, 0.7, v, 1e-4);
    Eigen::VectorXcd got = expm_action(Superoperator(g), 0.7, v);
    CHECK((got - expected).cwiseAbs().maxCoeff() /
              expected.cwiseAbs().maxCoeff() <
          1e-8);
  }
}

TEST_CASE("expm_action rejects non-finite input") {
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(4, 4);
  g(0, 0) = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(4);
  CHECK_THROWS_AS(expm_action(Superoperator(g), 1.0, v), NumericalError);
}

TEST_CASE("propagator spectral path agrees with dense scaling-and-squaring") {
  auto rng = oracles::test_rng(5);
  GeneratorSet gens = build_generators(oracles::slow_switching_model());
  Propagator prop(gens.no_jump);
  CHECK(prop.spectral());
  Eigen::VectorXcd v = vectorize(oracles::random_physical_state(rng, 2));
  for (double tau : {0.05, 0.7, 3.0, 17.0}) {
    Eigen::VectorXcd spectral = prop.apply(tau, v);
    Eigen::VectorXcd dense = expm_action(gens.no_jump, tau, v);
    CHECK((spectral - dense).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("semigroup property of the exponential action") {
  auto rng = oracles::test_rng(13);
  Eigen::MatrixXcd raw = oracles::random_matrix(rng, 8);
  // Shift the spectrum left so long-time products stay bounded.
  Superoperator g(Eigen::MatrixXcd(raw - 2.5 * Eigen::MatrixXcd::Identity(8, 8)));
  Eigen::VectorXcd v = oracles::random_matrix(rng, 8).col(1);
  std::uniform_real_distribution<double> unif(0.0, 2.0);
  for (int trial = 0; trial < 5; ++trial) {
    double s = unif(rng), t = unif(rng);
    Eigen::VectorXcd two_steps = expm_action(g, s, expm_action(g, t, v));
    Eigen::VectorXcd one_step = expm_action(g, s + t, v);
    CHECK((two_steps - one_step).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("linearity of the exponential action") {
  auto rng = oracles::test_rng(17);
  Superoperator g(oracles::random_matrix(rng, 8));
  Eigen::VectorXcd u = oracles::random_matrix(rng, 8).col(0);
  Eigen::VectorXcd v = oracles::random_matrix(rng, 8).col(1);
  const Complex alpha(0.3, -0.2), beta(-1.1, 0.4);
  Eigen::VectorXcd combined = expm_action(g, 0.9, Eigen::VectorXcd(alpha * u + beta * v));
  Eigen::VectorXcd separate =
      alpha * expm_action(g, 0.9, u) + beta * expm_action(g, 0.9, v);
  CHECK((combined - separate).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("undriven atom relaxes to its ground state") {
  GeneratorSet gens = build_generators(oracles::single_config_model(1.0, 0.0));
  VectorState stationary = stationary_null_state(gens.liouvillian);
  CHECK(std::abs(stationary.block(0)(1, 1).real() - 1.0) < 1e-10);
  CHECK(std::abs(stationary.block(0)(0, 0)) < 1e-10);
}

TEST_CASE("stationary state agrees with long-time propagation") {
  auto rng = oracles::test_rng(29);
  ModelSpec spec = oracles::random_model(rng, 2);
  GeneratorSet gens = build_generators(spec);
  VectorState stationary = stationary_null_state(gens.liouvillian);
  VectorState start = oracles::random_physical_state(rng, 2);
  VectorState late = expm_action(gens.liouvillian, 1e4, start);
  double apart =
      (vectorize(late) - vectorize(stationary)).cwiseAbs().maxCoeff();
  CHECK(apart < 1e-6);
}

TEST_CASE("stationary state is a fixed point of the evolution") {
  GeneratorSet gens = build_generators(oracles::slow_switching_model());
  VectorState stationary = stationary_null_state(gens.liouvillian);
  for (double t : {1.0, 10.0, 100.0}) {
    VectorState moved = expm_action(gens.liouvillian, t, stationary);
    CHECK((vectorize(moved) - vectorize(stationary)).cwiseAbs().maxCoeff() <
          1e-8);
  }
}

TEST_CASE("degenerate stationary manifold is reported, with the gap") {
  // Two disconnected configurations, no switching: two stationary states.
  ModelSpec spec = oracles::slow_switching_model();
  spec.config_rates = {{0.0, 0.0}, {0.0, 0.0}};
  GeneratorSet gens = build_generators(spec);
  CHECK_THROWS_AS(stationary_null_state(gens.liouvillian),
                  StationaryAmbiguityError);
}

TEST_CASE("physicality checks accept the stationary state") {
  GeneratorSet gens = build_generators(oracles::light_assisted_model());
  VectorState stationary = stationary_null_state(gens.liouvillian);
  PhysicalityReport report = check_physical(stationary);
  CHECK(report.ok());
  std::vector<double> populations = stationary.config_populations();
  for (double p : populations) {
    CHECK(p >= -1e-10);
    CHECK(p <= 1.0 + 1e-10);
  }
}
