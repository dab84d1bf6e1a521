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

#include "lindjump/superoperator.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>

namespace lindjump {

namespace {

Eigen::RowVectorXcd trace_row(std::size_t dim) {
  Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(dim);
  for (std::size_t r = 0; 4 * r < dim; ++r) {
    row[4 * r + 0] = 1.0;
    row[4 * r + 3] = 1.0;
  }
  return row;
}

void require_finite(const Eigen::MatrixXcd& m, const char* what) {
  if (!m.allFinite())
    throw NumericalError(std::string(what) + " contains non-finite entries");
}

}  // namespace

Superoperator::Superoperator(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() % 4 != 0 ||
      matrix_.rows() == 0)
    throw DimensionError("superoperator must be square with dimension 4*r_max");
}

Eigen::VectorXcd Superoperator::apply(const Eigen::VectorXcd& flat) const {
  if (flat.size() != matrix_.rows())
    throw DimensionError("superoperator dimension " + std::to_string(dim()) +
                         " does not match state length " +
                         std::to_string(flat.size()));
  return matrix_ * flat;
}

VectorState Superoperator::apply(const VectorState& v) const {
  return devectorize(apply(vectorize(v)), r_max());
}

Superoperator Superoperator::operator+(const Superoperator& other) const {
  return Superoperator(matrix_ + other.matrix_);
}

Superoperator Superoperator::operator-(const Superoperator& other) const {
  return Superoperator(matrix_ - other.matrix_);
}

Superoperator Superoperator::operator*(double scale) const {
  return Superoperator(matrix_ * scale);
}

double Superoperator::distance(const Superoperator& other) const {
  return (matrix_ - other.matrix_).cwiseAbs().maxCoeff();
}

Eigen::VectorXcd expm_action(const Superoperator& generator, double tau,
                             const Eigen::VectorXcd& v) {
  if (!(tau >= 0.0))
    throw NumericalError("expm_action requires tau >= 0, got " + std::to_string(tau));
  require_finite(generator.matrix(), "generator");
  if (!v.allFinite()) throw NumericalError("state contains non-finite entries");
  if (v.size() != static_cast<Eigen::Index>(generator.dim()))
    throw DimensionError("generator dimension does not match state length");
  if (tau == 0.0) return v;
  Eigen::MatrixXcd scaled = generator.matrix() * tau;
  return scaled.exp() * v;
}

VectorState expm_action(const Superoperator& generator, double tau,
                        const VectorState& v) {
  if (tau == 0.0) return v;
  return devectorize(expm_action(generator, tau, vectorize(v)), generator.r_max());
}

Propagator::Propagator(Superoperator generator) : generator_(std::move(generator)) {
  require_finite(generator_.matrix(), "generator");
  const Eigen::MatrixXcd& g = generator_.matrix();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(g);
  if (es.info() != Eigen::Success) return;
  Eigen::MatrixXcd vecs = es.eigenvectors();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(vecs);
  double smin = svd.singularValues().minCoeff();
  double smax = svd.singularValues().maxCoeff();
  if (smin <= 0.0 || smax / smin >= 1e8) return;
  Eigen::MatrixXcd inv = vecs.inverse();
  double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  Eigen::MatrixXcd rebuilt =
      vecs * es.eigenvalues().asDiagonal() * inv;
  if ((rebuilt - g).cwiseAbs().maxCoeff() > 1e-12 * scale * (smax / smin))
    return;
  spectral_ = true;
  evals_ = es.eigenvalues();
  evec_ = std::move(vecs);
  evec_inv_ = std::move(inv);
}

Eigen::VectorXcd Propagator::apply(double tau, const Eigen::VectorXcd& v) const {
  if (!(tau >= 0.0))
    throw NumericalError("propagation requires tau >= 0, got " + std::to_string(tau));
  if (tau == 0.0) return v;
  if (!spectral_) return expm_action(generator_, tau, v);
  Eigen::VectorXcd w = evec_inv_ * v;
  for (Eigen::Index k = 0; k < w.size(); ++k)
    w[k] *= std::exp(evals_[k] * tau);
  return evec_ * w;
}

Eigen::MatrixXcd Propagator::exponential(double tau) const {
  if (spectral_) {
    Eigen::VectorXcd phases(evals_.size());
    for (Eigen::Index k = 0; k < evals_.size(); ++k)
      phases[k] = std::exp(evals_[k] * tau);
    return evec_ * phases.asDiagonal() * evec_inv_;
  }
  Eigen::MatrixXcd scaled = generator_.matrix() * tau;
  return scaled.exp();
}

ConditionalFlow::ConditionalFlow(const Propagator& propagator, Eigen::VectorXcd v0)
    : propagator_(&propagator), v0_(std::move(v0)) {
  if (v0_.size() != static_cast<Eigen::Index>(propagator.generator().dim()))
    throw DimensionError("flow start state does not match generator dimension");
  if (propagator_->spectral()) {
    weights_ = propagator_->eigenvectors_inverse() * v0_;
    Eigen::RowVectorXcd row =
        trace_row(propagator_->generator().dim()) * propagator_->eigenvectors();
    coeffs_ = row.transpose().cwiseProduct(weights_);
  }
}

double ConditionalFlow::survival(double tau) const {
  if (propagator_->spectral()) {
    Complex s = 0.0;
    const Eigen::VectorXcd& lam = propagator_->eigenvalues();
    for (Eigen::Index k = 0; k < coeffs_.size(); ++k)
      s += coeffs_[k] * std::exp(lam[k] * tau);
    return s.real();
  }
  return trace_functional(propagator_->apply(tau, v0_));
}

Eigen::VectorXcd ConditionalFlow::state(double tau) const {
  if (propagator_->spectral()) {
    Eigen::VectorXcd w = weights_;
    const Eigen::VectorXcd& lam = propagator_->eigenvalues();
    for (Eigen::Index k = 0; k < w.size(); ++k)
      w[k] *= std::exp(lam[k] * tau);
    return propagator_->eigenvectors() * w;
  }
  return propagator_->apply(tau, v0_);
}

VectorState stationary_null_state(const Superoperator& liouvillian) {
  const Eigen::MatrixXcd& L = liouvillian.matrix();
  require_finite(L, "generator");
  const Eigen::Index n = L.rows();
  const double l_scale = std::max(L.cwiseAbs().maxCoeff(), 1e-300);

  // Degeneracy probe: a second near-null singular direction means the
  // stationary manifold is not unique.
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(L);
  const auto& sing = svd.singularValues();
  if (n >= 2) {
    double second_smallest = sing[n - 2];
    double gap = second_smallest / sing[0];
    if (second_smallest < 1e-8 * sing[0])
      throw StationaryAmbiguityError(
          "stationary state is not unique (singular-value gap " +
              std::to_string(gap) + ")",
          gap);
  }

  // Route one: bordered least squares, generator rows plus the
  // trace-normalization row.
  Eigen::MatrixXcd bordered(n + 1, n);
  bordered.topRows(n) = L / l_scale;
  bordered.row(n) = trace_row(n);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n + 1);
  rhs[n] = 1.0;
  Eigen::VectorXcd direct = bordered.colPivHouseholderQr().solve(rhs);

  // Route two: eigenvector of the eigenvalue closest to zero, normalized to
  // unit trace functional.
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(L);
  if (es.info() != Eigen::Success)
    throw NumericalError("eigendecomposition of the generator failed");
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < n; ++k)
    if (std::abs(es.eigenvalues()[k]) < std::abs(es.eigenvalues()[best])) best = k;
  Eigen::VectorXcd spectral = es.eigenvectors().col(best);
  Complex tr = 0.0;
  for (Eigen::Index r = 0; 4 * r < n; ++r) tr += spectral[4 * r] + spectral[4 * r + 3];
  if (std::abs(tr) < 1e-12)
    throw NumericalError("null eigenvector is traceless; cannot normalize");
  spectral /= tr;

  double routes_apart = (direct - spectral).cwiseAbs().maxCoeff();
  if (routes_apart > 1e-8)
    throw NumericalError(
        "stationary solvers disagree by " + std::to_string(routes_apart));

  double residual = (L * direct).cwiseAbs().maxCoeff();
  if (residual > 1e-10 * l_scale)
    throw NumericalError("stationary residual " + std::to_string(residual) +
                         " exceeds tolerance");

  VectorState state = devectorize(direct, static_cast<std::size_t>(n / 4));
  PhysicalityReport report = check_physical(state);
  if (!report.ok())
    throw NumericalError("stationary state fails physicality checks");
  return state;
}

}  // namespace lindjump
