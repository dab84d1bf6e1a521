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
#include <complex>
#include <cstddef>
#include <vector>

#include "lindjump/errors.hpp"

namespace lindjump {

using Complex = std::complex<double>;

/// One auxiliary 2x2 system block. Basis order is (+ , -): row/column 0 is
/// the upper level |+>, row/column 1 is the lower level |->.
using Block = Eigen::Matrix2cd;

/// State of the system (x) configuration space: an ordered collection of one
/// 2x2 complex block per configurational state R. The flattened view used by
/// superoperators is block-major and row-major inside a block, so element
/// (i,j) of block R lives at index 4*R + 2*i + j, i.e. per block the order is
/// (++, +-, -+, --).
class VectorState {
 public:
  /// Zero state with `r_max` blocks.
  explicit VectorState(std::size_t r_max);
  explicit VectorState(std::vector<Block> blocks);

  /// |-><-| system state with the given configurational weights.
  static VectorState ground(const std::vector<double>& config_weights);
  /// |+><+| system state with the given configurational weights.
  static VectorState excited(const std::vector<double>& config_weights);

  std::size_t r_max() const { return blocks_.size(); }
  const Block& block(std::size_t r) const { return blocks_.at(r); }
  Block& block(std::size_t r) { return blocks_.at(r); }

  /// Tr rho_R for every block (configurational populations of a normalized
  /// physical state). Imaginary parts are not checked here.
  std::vector<double> config_populations() const;

  /// <+| sum_R rho_R |+>, the upper-level population of the system state.
  double upper_population() const;

  bool operator==(const VectorState& other) const;

 private:
  std::vector<Block> blocks_;
};

/// Flatten a state into the documented block-major ordering.
Eigen::VectorXcd vectorize(const VectorState& state);

/// Inverse of vectorize. The flat length must equal 4*r_max.
VectorState devectorize(const Eigen::VectorXcd& flat, std::size_t r_max);

/// Tr_S[(1|v)] = sum_R Tr rho_R. The imaginary residue is checked
/// (|Im| >= 1e-9 raises NumericalError) and then discarded.
double trace_functional(const VectorState& v);
double trace_functional(const Eigen::VectorXcd& flat);

/// Hermiticity / positivity / normalization report for a candidate
/// physical state.
struct PhysicalityReport {
  double hermiticity_defect = 0.0;   // max |rho - rho^dag| over blocks
  double min_eigenvalue = 0.0;       // most negative block eigenvalue
  double trace_defect = 0.0;         // |sum_R Tr rho_R - 1|
  bool ok(double herm_tol = 1e-10, double eig_tol = -1e-10,
          double trace_tol = 1e-10) const {
    return hermiticity_defect <= herm_tol && min_eigenvalue >= eig_tol &&
           trace_defect <= trace_tol;
  }
};

PhysicalityReport check_physical(const VectorState& v);

/// Clip the numerical drift of a physical state at a reporting boundary:
/// hermitize each block and raise eigenvalues in [-1e-10, 0) to 0. States
/// inside propagation loops are never clipped.
VectorState clip_physical(const VectorState& v);

}  // namespace lindjump
