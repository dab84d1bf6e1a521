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
#include <functional>
#include <iosfwd>
#include <vector>

#include "lindjump/model.hpp"
#include "lindjump/superoperator.hpp"

namespace lindjump {

enum class CurveKind { Analytic, Estimated };

/// Tabulated probability density over a uniform tau grid.
struct DensityCurve {
  std::vector<double> tau;
  std::vector<double> density;
  CurveKind kind = CurveKind::Analytic;
  /// |integral - 1| over the support extended until the tail mass is below
  /// 1e-8 (analytic curves), or the stated in-range mass defect (estimates).
  double normalization_residual = 0.0;
  /// Estimated curves only: per-bin event counts and the sample mass that
  /// fell outside the histogram range.
  std::vector<std::size_t> counts;
  double out_of_range_fraction = 0.0;
  bool low_statistics = false;
};

/// Tabulated joint density of two consecutive intervals; tau1 is the earlier
/// one. value(i,j) = w(tau2 = tau2_grid[j], tau1 = tau1_grid[i]).
struct JointDensitySurface {
  std::vector<double> tau1;
  std::vector<double> tau2;
  std::vector<std::vector<double>> value;  // [i1][i2]
  CurveKind kind = CurveKind::Analytic;
  std::vector<std::vector<std::size_t>> counts;
  bool low_statistics = false;
};

/// Renewal-departure surface Lambda = w2 / (w1 (x) w1) - 1 with a mask for
/// grid points where the marginal is below the evaluation floor (or, for
/// estimates, where counts are too small).
struct LambdaSurface {
  std::vector<double> tau1;
  std::vector<double> tau2;
  std::vector<std::vector<double>> value;
  std::vector<std::vector<bool>> masked;
  // Estimates only, else empty:
  std::vector<std::vector<double>> stderr_;
  std::vector<std::vector<std::size_t>> counts;
};

/// Uniform grid helper: n points covering [0, hi].
std::vector<double> uniform_grid(double hi, std::size_t n);

struct MasterCurves {
  std::vector<double> time;
  std::vector<double> upper;                // <+|rho_S(t)|+>
  std::vector<std::vector<double>> config;  // [r][i] = (R|P_t)
};

/// Exact density-matrix evolution on a time grid via exponential action of
/// the full generator. The trace is checked to stay at 1 within 1e-10.
MasterCurves master_evolve(const GeneratorSet& gens, const VectorState& v0,
                           const std::vector<double>& t_grid);

/// Waiting-time density of the Markovian (single-configuration) fluorophore
/// in closed form, evaluated with complex arithmetic. Near the critically
/// damped point (vanishing discriminant) the closed form is replaced by the
/// numerically authoritative single-configuration matrix path.
double markov_waiting_density(double decay, double rabi, double detuning,
                              double tau);

/// Stationary emission intensity of the Markovian fluorophore.
double markov_intensity(double decay, double rabi, double detuning);

/// Stationary intensity of the full model, from its stationary state.
double stationary_intensity(const ModelSpec& spec);

struct JumpWeights {
  /// Configurational populations right after a photon detection in the
  /// stationary regime.
  std::vector<double> p_inf;
  /// Light-assisted branching factors: q[r] = gamma_r / gamma-tilde_r and
  /// q_cross[dest][src] = gamma_{dest,src} / gamma-tilde_src. Empty for
  /// self-fluctuating models.
  std::vector<double> q;
  std::vector<std::vector<double>> q_cross;
};

JumpWeights stationary_jump_weights(const ModelSpec& spec);

/// Matrix-path evaluator for the stationary waiting-time hierarchy of one
/// model. By default the photon-only channel split is used (the object an
/// experiment resolves); with all_channels the scheme's own channels enter
/// and every recorded event may be of any type.
class WaitingTimeAnalysis {
 public:
  explicit WaitingTimeAnalysis(const ModelSpec& spec, bool all_channels = false);

  const std::vector<double>& p_inf() const { return p_inf_; }
  const GeneratorSet& generators() const { return gens_; }

  /// First stationary waiting-time density at tau.
  double w1(double tau) const;
  /// Survival of the first stationary interval; 1 - survival is the CDF
  /// matching w1.
  double survival(double tau) const;
  /// Joint density of two consecutive stationary intervals.
  double w2(double tau2, double tau1) const;
  /// Density of the interval following a detection that left configurational
  /// populations p_post.
  double w_stochastic(double tau, const std::vector<double>& p_post) const;

  DensityCurve w1_curve(const std::vector<double>& grid) const;
  JointDensitySurface w2_surface(const std::vector<double>& grid1,
                                 const std::vector<double>& grid2) const;
  DensityCurve w_stochastic_curve(const std::vector<double>& p_post,
                                  const std::vector<double>& grid) const;

  /// integral_0^inf dtau2 w2(tau2, tau1), evaluated by composite-Simpson
  /// quadrature plus the exact tail.
  double w2_marginal_over_tau2(double tau1, double step = 0.02) const;

 private:
  const Eigen::MatrixXcd& mid_jump() const;

  ModelSpec spec_;
  bool all_channels_;
  GeneratorSet gens_;
  Propagator no_jump_prop_;
  Eigen::RowVectorXcd jump_row_;  // trace row of the leading (total) jump
  Eigen::VectorXcd post_state_;   // M rho_infinity, flattened
  std::vector<double> p_inf_;
};

/// First stationary waiting-time density on a grid (photon statistics).
DensityCurve w1_stationary(const ModelSpec& spec, const std::vector<double>& grid,
                           bool all_channels = false);

/// Second-order stationary waiting-time density on a grid pair.
JointDensitySurface w2_stationary(const ModelSpec& spec,
                                  const std::vector<double>& grid1,
                                  const std::vector<double>& grid2,
                                  bool all_channels = false);

/// Lambda = w2 / (w1 (x) w1) - 1 on the curves' common grid; marginal values
/// below `floor` are masked, never extrapolated.
LambdaSurface renewal_departure(const DensityCurve& w1,
                                const JointDensitySurface& w2,
                                double floor = 1e-12);

/// Waiting-time density following a detection with known post-detection
/// configurational populations.
DensityCurve w_stochastic(const ModelSpec& spec, const std::vector<double>& p_post,
                          const std::vector<double>& grid);

struct SlowLimitApproximation {
  DensityCurve w1;
  JointDensitySurface w2;
  std::vector<double> p_inf_approx;
  /// max_R rate-out-of-R / intensity-of-R; the approximation is good when
  /// this is small.
  double slowness_ratio = 0.0;
};

/// Frozen-configuration approximation of the stationary waiting hierarchy
/// (self-fluctuating models).
SlowLimitApproximation slow_limit_approximations(const ModelSpec& spec,
                                                 const std::vector<double>& grid1,
                                                 const std::vector<double>& grid2);

/// CSV writers: `tau,density`, `tau1,tau2,density` and
/// `tau1,tau2,lambda,masked`. Estimated objects gain `count` (and stderr)
/// columns. All values carry 12 significant digits.
void write_csv(const DensityCurve& curve, std::ostream& out);
void write_csv(const JointDensitySurface& surface, std::ostream& out);
void write_csv(const LambdaSurface& surface, std::ostream& out);
void write_csv(const MasterCurves& curves, std::ostream& out);

}  // namespace lindjump
