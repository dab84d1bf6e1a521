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

#include "lindjump/vector_state.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

namespace lindjump {

VectorState::VectorState(std::size_t r_max) {
  if (r_max < 1) throw DimensionError("a state needs at least one configuration block");
  blocks_.assign(r_max, Block::Zero());
}

VectorState::VectorState(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw DimensionError("a state needs at least one configuration block");
}

VectorState VectorState::ground(const std::vector<double>& config_weights) {
  VectorState v(config_weights.size());
  for (std::size_t r = 0; r < config_weights.size(); ++r)
    v.blocks_[r](1, 1) = config_weights[r];
  return v;
}

VectorState VectorState::excited(const std::vector<double>& config_weights) {
  VectorState v(config_weights.size());
  for (std::size_t r = 0; r < config_weights.size(); ++r)
    v.blocks_[r](0, 0) = config_weights[r];
  return v;
}

std::vector<double> VectorState::config_populations() const {
  std::vector<double> p(blocks_.size());
  for (std::size_t r = 0; r < blocks_.size(); ++r)
    p[r] = blocks_[r].trace().real();
  return p;
}

double VectorState::upper_population() const {
  double up = 0.0;
  for (const auto& b : blocks_) up += b(0, 0).real();
  return up;
}

bool VectorState::operator==(const VectorState& other) const {
  if (blocks_.size() != other.blocks_.size()) return false;
  for (std::size_t r = 0; r < blocks_.size(); ++r)
    if (blocks_[r] != other.blocks_[r]) return false;
  return true;
}

Eigen::VectorXcd vectorize(const VectorState& state) {
  Eigen::VectorXcd flat(4 * state.r_max());
  for (std::size_t r = 0; r < state.r_max(); ++r) {
    const Block& b = state.block(r);
    flat[4 * r + 0] = b(0, 0);
    flat[4 * r + 1] = b(0, 1);
    flat[4 * r + 2] = b(1, 0);
    flat[4 * r + 3] = b(1, 1);
  }
  return flat;
}

VectorState devectorize(const Eigen::VectorXcd& flat, std::size_t r_max) {
  if (flat.size() != static_cast<Eigen::Index>(4 * r_max))
    throw DimensionError("flat vector of length " + std::to_string(flat.size()) +
                         " does not hold " + std::to_string(r_max) +
                         " configuration blocks");
  VectorState v(r_max);
  for (std::size_t r = 0; r < r_max; ++r) {
    Block& b = v.block(r);
    b(0, 0) = flat[4 * r + 0];
    b(0, 1) = flat[4 * r + 1];
    b(1, 0) = flat[4 * r + 2];
    b(1, 1) = flat[4 * r + 3];
  }
  return v;
}

double trace_functional(const Eigen::VectorXcd& flat) {
  if (flat.size() % 4 != 0)
    throw DimensionError("flat vector length is not a multiple of 4");
  Complex tr = 0.0;
  for (Eigen::Index r = 0; 4 * r < flat.size(); ++r)
    tr += flat[4 * r] + flat[4 * r + 3];
  if (std::abs(tr.imag()) >= 1e-9)
    throw NumericalError("trace functional has imaginary residue " +
                         std::to_string(tr.imag()));
  return tr.real();
}

double trace_functional(const VectorState& v) {
  Complex tr = 0.0;
  for (std::size_t r = 0; r < v.r_max(); ++r) tr += v.block(r).trace();
  if (std::abs(tr.imag()) >= 1e-9)
    throw NumericalError("trace functional has imaginary residue " +
                         std::to_string(tr.imag()));
  return tr.real();
}

PhysicalityReport check_physical(const VectorState& v) {
  PhysicalityReport report;
  double trace = 0.0;
  for (std::size_t r = 0; r < v.r_max(); ++r) {
    const Block& b = v.block(r);
    report.hermiticity_defect = std::max(
        report.hermiticity_defect, (b - b.adjoint()).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Block> es(Block(0.5 * (b + b.adjoint())));
    report.min_eigenvalue = std::min(report.min_eigenvalue,
                                     es.eigenvalues().minCoeff());
    trace += b.trace().real();
  }
  report.trace_defect = std::abs(trace - 1.0);
  return report;
}

VectorState clip_physical(const VectorState& v) {
  VectorState out(v.r_max());
  for (std::size_t r = 0; r < v.r_max(); ++r) {
    Block h = 0.5 * (v.block(r) + v.block(r).adjoint());
    Eigen::SelfAdjointEigenSolver<Block> es(h);
    Eigen::Vector2d evals = es.eigenvalues();
    for (int k = 0; k < 2; ++k)
      if (evals[k] < 0.0 && evals[k] >= -1e-10) evals[k] = 0.0;
    out.block(r) = es.eigenvectors() * evals.asDiagonal() *
                   es.eigenvectors().adjoint();
  }
  return out;
}

}  // namespace lindjump
