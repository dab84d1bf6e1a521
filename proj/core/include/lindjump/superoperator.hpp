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

#include <Eigen/Dense>
#include <cstddef>

#include "lindjump/vector_state.hpp"

namespace lindjump {

/// Dense linear operator on the flattened system (x) configuration space.
/// Dimension is always 4*r_max.
class Superoperator {
 public:
  explicit Superoperator(Eigen::MatrixXcd matrix);

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  std::size_t r_max() const { return dim() / 4; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& flat) const;
  VectorState apply(const VectorState& v) const;

  Superoperator operator+(const Superoperator& other) const;
  Superoperator operator-(const Superoperator& other) const;
  Superoperator operator*(double scale) const;

  /// Max-abs entrywise distance.
  double distance(const Superoperator& other) const;

 private:
  Eigen::MatrixXcd matrix_;
};

/// e^{G tau} v for tau >= 0, computed with Pade scaling-and-squaring of the
/// dense matrix. tau == 0 returns v bit-exactly.
Eigen::VectorXcd expm_action(const Superoperator& generator, double tau,
                             const Eigen::VectorXcd& v);
VectorState expm_action(const Superoperator& generator, double tau,
                        const VectorState& v);

/// Cached exponential-action engine for repeated-tau workloads. Holds an
/// eigendecomposition of the generator when it is numerically diagonalizable
/// (eigenvector condition number below 1e8 and faithful reconstruction);
/// otherwise every apply() falls back to scaling-and-squaring.
class Propagator {
 public:
  explicit Propagator(Superoperator generator);

  const Superoperator& generator() const { return generator_; }
  bool spectral() const { return spectral_; }

  /// e^{G tau} v.
  Eigen::VectorXcd apply(double tau, const Eigen::VectorXcd& v) const;

  /// Dense e^{G tau}.
  Eigen::MatrixXcd exponential(double tau) const;

  const Eigen::VectorXcd& eigenvalues() const { return evals_; }
  const Eigen::MatrixXcd& eigenvectors() const { return evec_; }
  const Eigen::MatrixXcd& eigenvectors_inverse() const { return evec_inv_; }

 private:
  Superoperator generator_;
  bool spectral_ = false;
  Eigen::VectorXcd evals_;
  Eigen::MatrixXcd evec_;
  Eigen::MatrixXcd evec_inv_;
};

/// Scalar observables of the conditional flow tau -> e^{G tau} v0 from a
/// fixed start state. On a spectral Propagator each survival() evaluation
/// costs O(dim) which is what makes root-finding on the survival cheap.
class ConditionalFlow {
 public:
  ConditionalFlow(const Propagator& propagator, Eigen::VectorXcd v0);

  /// Tr_S[(1| e^{G tau} |v0)].
  double survival(double tau) const;

  /// Unnormalized flat state e^{G tau} v0.
  Eigen::VectorXcd state(double tau) const;

 private:
  const Propagator* propagator_;
  Eigen::VectorXcd v0_;
  // spectral path data: survival(tau) = Re sum_k coeff_k e^{lambda_k tau}
  Eigen::VectorXcd weights_;  // V^{-1} v0
  Eigen::VectorXcd coeffs_;   // (trace row * V) .* weights
};

/// Unique trace-one null state of a trace-preserving generator. Solved twice,
/// by a bordered least-squares system and by the eigenvector of the
/// eigenvalue closest to zero; the two routes must agree to 1e-8. A
/// degenerate stationary manifold raises StationaryAmbiguityError.
VectorState stationary_null_state(const Superoperator& liouvillian);

}  // namespace lindjump
