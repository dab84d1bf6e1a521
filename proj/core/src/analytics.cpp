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

#include "lindjump/analytics.hpp"

#include <cmath>
#include <iostream>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>

#include "format.hpp"

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

// row * e^{G tau} * v, reduced to sum_k a_k e^{lambda_k tau} on a spectral
// propagator so that grid evaluations cost O(dim).
class RowFlow {
 public:
  RowFlow(const Propagator& prop, Eigen::RowVectorXcd row, Eigen::VectorXcd v)
      : prop_(&prop), row_(std::move(row)), v_(std::move(v)) {
    if (prop_->spectral()) {
      Eigen::VectorXcd weights = prop_->eigenvectors_inverse() * v_;
      Eigen::RowVectorXcd projected = row_ * prop_->eigenvectors();
      coeffs_ = projected.transpose().cwiseProduct(weights);
    }
  }

  double eval(double tau) const {
    if (prop_->spectral()) {
      Complex s = 0.0;
      const Eigen::VectorXcd& lam = prop_->eigenvalues();
      for (Eigen::Index k = 0; k < coeffs_.size(); ++k)
        s += coeffs_[k] * std::exp(lam[k] * tau);
      return s.real();
    }
    return (row_ * prop_->apply(tau, v_)).value().real();
  }

 private:
  const Propagator* prop_;
  Eigen::RowVectorXcd row_;
  Eigen::VectorXcd v_;
  Eigen::VectorXcd coeffs_;
};

// Composite Simpson over [0, hi] with an even number of panels.
double simpson(const std::function<double(double)>& f, double hi,
               double step) {
  std::size_t panels = static_cast<std::size_t>(std::ceil(hi / step / 2.0)) * 2;
  panels = std::max<std::size_t>(panels, 2);
  const double h = hi / static_cast<double>(panels);
  double acc = f(0.0) + f(hi);
  for (std::size_t k = 1; k < panels; ++k)
    acc += f(h * static_cast<double>(k)) * (k % 2 == 1 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// Single-configuration waiting density through the matrix path; the
// authoritative route near the critically damped point. The last parameter
// set is cached since curve evaluations sweep tau at fixed rates.
double markov_density_numeric(double decay, double rabi, double detuning,
                              double tau) {
  struct Cache {
    double decay = -1.0, rabi = -1.0, detuning = 0.0;
    std::unique_ptr<Propagator> prop;
    Eigen::RowVectorXcd jump_row;
    Eigen::VectorXcd ground;
  };
  thread_local Cache cache;
  if (!cache.prop || cache.decay != decay || cache.rabi != rabi ||
      cache.detuning != detuning) {
    ModelSpec reduced;
    reduced.kind = ModelKind::SelfFluctuating;
    reduced.scheme = Scheme::PhotonOnly;
    reduced.r_max = 1;
    reduced.rabi = {rabi};
    reduced.detuning = {detuning};
    reduced.decay = {decay};
    reduced.config_rates = {{0.0}};
    GeneratorSet gens = build_generators(reduced);
    cache.prop = std::make_unique<Propagator>(gens.no_jump);
    cache.jump_row = trace_row(4) * gens.jump_total.matrix();
    cache.ground = vectorize(VectorState::ground({1.0}));
    cache.decay = decay;
    cache.rabi = rabi;
    cache.detuning = detuning;
  }
  return RowFlow(*cache.prop, cache.jump_row, cache.ground).eval(tau);
}

void warn_dark_model_once() {
  static std::once_flag flag;
  std::call_once(flag, [] {
    std::cerr << "lindjump: warning: rabi = 0 gives a dark model; the "
                 "waiting-time density is identically zero\n";
  });
}

}  // namespace

std::vector<double> uniform_grid(double hi, std::size_t n) {
  if (n < 2 || !(hi > 0.0)) throw Error("grid needs hi > 0 and n >= 2");
  std::vector<double> grid(n);
  for (std::size_t k = 0; k < n; ++k)
    grid[k] = hi * static_cast<double>(k) / static_cast<double>(n - 1);
  return grid;
}

MasterCurves master_evolve(const GeneratorSet& gens, const VectorState& v0,
                           const std::vector<double>& t_grid) {
  const Propagator prop(gens.liouvillian);
  const Eigen::VectorXcd flat0 = vectorize(v0);
  MasterCurves out;
  out.time = t_grid;
  out.config.assign(gens.r_max, {});
  for (double t : t_grid) {
    Eigen::VectorXcd u = prop.apply(t, flat0);
    double trace = trace_functional(u);
    if (std::abs(trace - 1.0) > 1e-10)
      throw NumericalError("master evolution lost normalization: trace " +
                           std::to_string(trace));
    double upper = 0.0;
    for (std::size_t r = 0; r < gens.r_max; ++r) {
      upper += u[4 * r].real();
      out.config[r].push_back((u[4 * r] + u[4 * r + 3]).real());
    }
    out.upper.push_back(upper);
  }
  return out;
}

double markov_waiting_density(double decay, double rabi, double detuning,
                              double tau) {
  if (!(decay > 0.0)) throw Error("waiting density needs decay > 0");
  if (!(tau >= 0.0)) throw Error("waiting density needs tau >= 0");
  if (rabi == 0.0) {
    warn_dark_model_once();
    return 0.0;
  }
  const double g2 = decay * decay;
  const double drive = rabi * rabi + detuning * detuning;
  const double a = g2 + 4.0 * drive;
  const Complex zeta = std::sqrt(Complex(a * a - 16.0 * g2 * rabi * rabi));
  if (std::abs(zeta) <
      1e-6 * (g2 + 4.0 * rabi * rabi + 4.0 * detuning * detuning))
    return markov_density_numeric(decay, rabi, detuning, tau);
  const double b = g2 - 4.0 * drive;
  const Complex xi_plus = std::sqrt(Complex(b) + zeta) / (2.0 * std::sqrt(2.0));
  const Complex xi_minus = std::sqrt(Complex(b) - zeta) / (2.0 * std::sqrt(2.0));
  const Complex w = 2.0 * decay * rabi * rabi / zeta *
                    std::exp(-decay * tau / 2.0) *
                    (std::cosh(xi_plus * tau) - std::cosh(xi_minus * tau));
  if (std::abs(w.imag()) >= 1e-9 * std::abs(w.real()) + 1e-12)
    throw NumericalError("waiting density picked up an imaginary part " +
                         std::to_string(w.imag()));
  return w.real();
}

double markov_intensity(double decay, double rabi, double detuning) {
  if (!(decay > 0.0)) throw Error("intensity needs decay > 0");
  return decay * rabi * rabi /
         (decay * decay + 2.0 * rabi * rabi + 4.0 * detuning * detuning);
}

double stationary_intensity(const ModelSpec& spec) {
  ModelSpec probe = spec;
  probe.scheme = Scheme::PhotonOnly;
  GeneratorSet gens = build_generators(probe);
  VectorState stationary = stationary_null_state(gens.liouvillian);
  double intensity = 0.0;
  for (std::size_t r = 0; r < spec.r_max; ++r) {
    double rate = spec.kind == ModelKind::LightAssisted ? spec.decay_tilde(r)
                                                        : spec.decay[r];
    intensity += rate * stationary.block(r)(0, 0).real();
  }
  return intensity;
}

JumpWeights stationary_jump_weights(const ModelSpec& spec) {
  ModelSpec probe = spec;
  probe.scheme = Scheme::PhotonOnly;
  GeneratorSet gens = build_generators(probe);
  VectorState stationary = stationary_null_state(gens.liouvillian);

  JumpWeights out;
  std::vector<double> upper(spec.r_max);
  for (std::size_t r = 0; r < spec.r_max; ++r)
    upper[r] = stationary.block(r)(0, 0).real();

  double norm = 0.0;
  out.p_inf.assign(spec.r_max, 0.0);
  if (spec.kind == ModelKind::SelfFluctuating) {
    for (std::size_t r = 0; r < spec.r_max; ++r) {
      out.p_inf[r] = spec.decay[r] * upper[r];
      norm += out.p_inf[r];
    }
  } else {
    for (std::size_t r = 0; r < spec.r_max; ++r) {
      out.p_inf[r] = spec.decay[r] * upper[r];
      for (std::size_t src = 0; src < spec.r_max; ++src)
        out.p_inf[r] += spec.config_rates[r][src] * upper[src];
      norm += spec.decay_tilde(r) * upper[r];
    }
  }
  if (!(norm > 0.0))
    throw DarkStateError("stationary state never emits", 1.0);
  double total = 0.0;
  for (double& p : out.p_inf) {
    p /= norm;
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw NumericalError("stationary jump weights sum to " + std::to_string(total));

  if (spec.kind == ModelKind::LightAssisted) {
    out.q.assign(spec.r_max, 0.0);
    out.q_cross.assign(spec.r_max, std::vector<double>(spec.r_max, 0.0));
    for (std::size_t src = 0; src < spec.r_max; ++src) {
      const double tilde = spec.decay_tilde(src);
      out.q[src] = spec.decay[src] / tilde;
      double branch = out.q[src];
      for (std::size_t dest = 0; dest < spec.r_max; ++dest) {
        out.q_cross[dest][src] = spec.config_rates[dest][src] / tilde;
        branch += out.q_cross[dest][src];
      }
      if (std::abs(branch - 1.0) > 1e-12)
        throw NumericalError("branching factors of configuration " +
                             std::to_string(src) + " sum to " +
                             std::to_string(branch));
    }
  }
  return out;
}

WaitingTimeAnalysis::WaitingTimeAnalysis(const ModelSpec& spec, bool all_channels)
    : spec_(spec),
      all_channels_(all_channels),
      gens_(build_generators([&] {
        ModelSpec s = spec;
        if (!all_channels) s.scheme = Scheme::PhotonOnly;
        return s;
      }())),
      no_jump_prop_(gens_.no_jump) {
  const Eigen::RowVectorXcd row = trace_row(gens_.liouvillian.dim());
  jump_row_ = row * gens_.jump_total.matrix();

  VectorState stationary = stationary_null_state(gens_.liouvillian);
  Eigen::VectorXcd u = gens_.jump_total.matrix() * vectorize(stationary);
  double norm = trace_functional(u);
  if (!(norm > 1e-300))
    throw DarkStateError("stationary state never triggers any detector", 1.0);
  post_state_ = u / norm;
  p_inf_.resize(gens_.r_max);
  for (std::size_t r = 0; r < gens_.r_max; ++r)
    p_inf_[r] = (post_state_[4 * r] + post_state_[4 * r + 3]).real();
}

double WaitingTimeAnalysis::w1(double tau) const {
  return RowFlow(no_jump_prop_, jump_row_, post_state_).eval(tau);
}

double WaitingTimeAnalysis::survival(double tau) const {
  return RowFlow(no_jump_prop_, trace_row(gens_.liouvillian.dim()), post_state_)
      .eval(tau);
}

const Eigen::MatrixXcd& WaitingTimeAnalysis::mid_jump() const {
  // With every channel recorded, the middle event is "any detector";
  // otherwise it is the photon counter (which, in the photon-only split,
  // is the total jump anyway).
  return all_channels_ ? gens_.jump_total.matrix()
                       : gens_.channel(ChannelLabel::photon()).matrix();
}

double WaitingTimeAnalysis::w2(double tau2, double tau1) const {
  Eigen::VectorXcd mid = mid_jump() * no_jump_prop_.apply(tau1, post_state_);
  return RowFlow(no_jump_prop_, jump_row_, mid).eval(tau2);
}

double WaitingTimeAnalysis::w_stochastic(double tau,
                                         const std::vector<double>& p_post) const {
  if (p_post.size() != gens_.r_max)
    throw DimensionError("post-jump weights have the wrong length");
  double sum = 0.0;
  for (double p : p_post) {
    if (p < 0.0) throw Error("post-jump weights must be nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw Error("post-jump weights must sum to one");
  Eigen::VectorXcd v = vectorize(VectorState::ground(p_post));
  return RowFlow(no_jump_prop_, jump_row_, v).eval(tau);
}

namespace {

// The light-assisted photon process in closed form: a p-weighted mixture of
// single-configuration densities with the total decay rates.
double light_assisted_mixture(const ModelSpec& spec,
                              const std::vector<double>& p, double tau) {
  double value = 0.0;
  for (std::size_t r = 0; r < spec.r_max; ++r)
    value += markov_waiting_density(spec.decay_tilde(r), spec.rabi[r],
                                    spec.detuning[r], tau) *
             p[r];
  return value;
}

void assert_close(double matrix_path, double closed_form, const char* what) {
  if (std::abs(matrix_path - closed_form) >
      1e-8 * std::max(1.0, std::abs(closed_form)))
    throw NumericalError(std::string(what) + " disagrees with its closed form: " +
                         std::to_string(matrix_path) + " vs " +
                         std::to_string(closed_form));
}

}  // namespace

DensityCurve WaitingTimeAnalysis::w1_curve(const std::vector<double>& grid) const {
  RowFlow flow(no_jump_prop_, jump_row_, post_state_);
  DensityCurve curve;
  curve.tau = grid;
  curve.kind = CurveKind::Analytic;
  curve.density.reserve(grid.size());
  const bool check_closed =
      spec_.kind == ModelKind::LightAssisted && p_inf_.size() == spec_.r_max;
  for (double tau : grid) {
    double value = flow.eval(tau);
    if (value < -1e-12)
      throw NumericalError("waiting density is negative at tau = " +
                           std::to_string(tau));
    if (check_closed)
      assert_close(value, light_assisted_mixture(spec_, p_inf_, tau),
                   "first stationary waiting density");
    curve.density.push_back(value);
  }
  // Normalization check: fine Simpson over the grid span plus the exact tail.
  const double hi = grid.back();
  double mass = simpson([&](double t) { return flow.eval(t); }, hi,
                        std::min(0.005, hi / 400.0));
  curve.normalization_residual = std::abs(mass + survival(hi) - 1.0);
  return curve;
}

JointDensitySurface WaitingTimeAnalysis::w2_surface(
    const std::vector<double>& grid1, const std::vector<double>& grid2) const {
  JointDensitySurface surface;
  surface.tau1 = grid1;
  surface.tau2 = grid2;
  surface.kind = CurveKind::Analytic;
  surface.value.assign(grid1.size(), std::vector<double>(grid2.size(), 0.0));
  const Eigen::MatrixXcd& first_event = mid_jump();
  for (std::size_t i = 0; i < grid1.size(); ++i) {
    Eigen::VectorXcd mid = first_event * no_jump_prop_.apply(grid1[i], post_state_);
    RowFlow flow(no_jump_prop_, jump_row_, mid);
    for (std::size_t j = 0; j < grid2.size(); ++j) {
      double value = flow.eval(grid2[j]);
      if (value < -1e-12)
        throw NumericalError("joint waiting density is negative");
      surface.value[i][j] = value;
    }
  }
  return surface;
}

double WaitingTimeAnalysis::w2_marginal_over_tau2(double tau1, double step) const {
  Eigen::VectorXcd mid = mid_jump() * no_jump_prop_.apply(tau1, post_state_);
  RowFlow density(no_jump_prop_, jump_row_, mid);
  RowFlow tail(no_jump_prop_, trace_row(gens_.liouvillian.dim()), mid);
  // The integration horizon only trades quadrature span against the exactly
  // known tail, so any horizon with small enough Simpson error works.
  const double hi = 60.0;
  return simpson([&](double t) { return density.eval(t); }, hi, step) +
         tail.eval(hi);
}

DensityCurve WaitingTimeAnalysis::w_stochastic_curve(
    const std::vector<double>& p_post, const std::vector<double>& grid) const {
  if (p_post.size() != gens_.r_max)
    throw DimensionError("post-jump weights have the wrong length");
  double sum = 0.0;
  for (double p : p_post) {
    if (p < 0.0) throw Error("post-jump weights must be nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw Error("post-jump weights must sum to one");

  Eigen::VectorXcd v = vectorize(VectorState::ground(p_post));
  RowFlow flow(no_jump_prop_, jump_row_, v);
  RowFlow tail(no_jump_prop_, trace_row(gens_.liouvillian.dim()), v);
  DensityCurve curve;
  curve.tau = grid;
  curve.kind = CurveKind::Analytic;
  const bool check_closed = spec_.kind == ModelKind::LightAssisted;
  for (double tau : grid) {
    double value = flow.eval(tau);
    if (check_closed)
      assert_close(value, light_assisted_mixture(spec_, p_post, tau),
                   "stochastic waiting density");
    curve.density.push_back(value);
  }
  const double hi = grid.back();
  double mass = simpson([&](double t) { return flow.eval(t); }, hi,
                        std::min(0.005, hi / 400.0));
  curve.normalization_residual = std::abs(mass + tail.eval(hi) - 1.0);
  return curve;
}

DensityCurve w1_stationary(const ModelSpec& spec, const std::vector<double>& grid,
                           bool all_channels) {
  return WaitingTimeAnalysis(spec, all_channels).w1_curve(grid);
}

JointDensitySurface w2_stationary(const ModelSpec& spec,
                                  const std::vector<double>& grid1,
                                  const std::vector<double>& grid2,
                                  bool all_channels) {
  WaitingTimeAnalysis analysis(spec, all_channels);
  JointDensitySurface surface = analysis.w2_surface(grid1, grid2);
  if (spec.kind == ModelKind::LightAssisted && !all_channels) {
    JumpWeights weights = stationary_jump_weights(spec);
    const std::size_t stride1 = std::max<std::size_t>(1, grid1.size() / 25);
    const std::size_t stride2 = std::max<std::size_t>(1, grid2.size() / 25);
    for (std::size_t i = 0; i < grid1.size(); i += stride1)
      for (std::size_t j = 0; j < grid2.size(); j += stride2) {
        double closed = 0.0;
        for (std::size_t r = 0; r < spec.r_max; ++r) {
          double second = weights.q[r] * markov_waiting_density(
                                             spec.decay_tilde(r), spec.rabi[r],
                                             spec.detuning[r], grid2[j]);
          for (std::size_t dest = 0; dest < spec.r_max; ++dest)
            second += weights.q_cross[dest][r] *
                      markov_waiting_density(spec.decay_tilde(dest),
                                             spec.rabi[dest],
                                             spec.detuning[dest], grid2[j]);
          closed += second *
                    markov_waiting_density(spec.decay_tilde(r), spec.rabi[r],
                                           spec.detuning[r], grid1[i]) *
                    weights.p_inf[r];
        }
        assert_close(surface.value[i][j], closed,
                     "second stationary waiting density");
      }
  }
  return surface;
}

LambdaSurface renewal_departure(const DensityCurve& w1,
                                const JointDensitySurface& w2, double floor) {
  auto grids_match = [](const std::vector<double>& a,
                        const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (std::abs(a[i] - b[i]) > 1e-12) return false;
    return true;
  };
  if (!grids_match(w1.tau, w2.tau1) || !grids_match(w1.tau, w2.tau2))
    throw DimensionError("renewal departure needs matching tau grids");

  LambdaSurface out;
  out.tau1 = w2.tau1;
  out.tau2 = w2.tau2;
  out.value.assign(w2.tau1.size(), std::vector<double>(w2.tau2.size(), 0.0));
  out.masked.assign(w2.tau1.size(), std::vector<bool>(w2.tau2.size(), false));
  for (std::size_t i = 0; i < w2.tau1.size(); ++i)
    for (std::size_t j = 0; j < w2.tau2.size(); ++j) {
      double denom = w1.density[i] * w1.density[j];
      if (w1.density[i] < floor || w1.density[j] < floor) {
        out.masked[i][j] = true;
        continue;
      }
      out.value[i][j] = w2.value[i][j] / denom - 1.0;
    }
  return out;
}

DensityCurve w_stochastic(const ModelSpec& spec, const std::vector<double>& p_post,
                          const std::vector<double>& grid) {
  return WaitingTimeAnalysis(spec).w_stochastic_curve(p_post, grid);
}

SlowLimitApproximation slow_limit_approximations(
    const ModelSpec& spec, const std::vector<double>& grid1,
    const std::vector<double>& grid2) {
  if (spec.kind != ModelKind::SelfFluctuating)
    throw Error("the slow-fluctuation approximation applies to "
                "self-fluctuating models only");

  SlowLimitApproximation out;
  JumpWeights weights = stationary_jump_weights(spec);
  auto w_r = [&](std::size_t r, double tau) {
    return markov_waiting_density(spec.decay[r], spec.rabi[r], spec.detuning[r],
                                  tau);
  };

  out.w1.tau = grid1;
  out.w1.kind = CurveKind::Analytic;
  for (double tau : grid1) {
    double value = 0.0;
    for (std::size_t r = 0; r < spec.r_max; ++r)
      value += w_r(r, tau) * weights.p_inf[r];
    out.w1.density.push_back(value);
  }

  out.w2.tau1 = grid1;
  out.w2.tau2 = grid2;
  out.w2.kind = CurveKind::Analytic;
  out.w2.value.assign(grid1.size(), std::vector<double>(grid2.size(), 0.0));
  for (std::size_t i = 0; i < grid1.size(); ++i)
    for (std::size_t j = 0; j < grid2.size(); ++j) {
      double value = 0.0;
      for (std::size_t r = 0; r < spec.r_max; ++r)
        value += w_r(r, grid2[j]) * w_r(r, grid1[i]) * weights.p_inf[r];
      out.w2.value[i][j] = value;
    }

  // p ~ I_R P_R / sum: intensities weighted by the classical stationary
  // populations.
  FastLimitParams classical = fast_limit_params(spec);
  double norm = 0.0;
  out.p_inf_approx.assign(spec.r_max, 0.0);
  for (std::size_t r = 0; r < spec.r_max; ++r) {
    out.p_inf_approx[r] =
        markov_intensity(spec.decay[r], spec.rabi[r], spec.detuning[r]) *
        classical.stationary_config[r];
    norm += out.p_inf_approx[r];
  }
  for (double& p : out.p_inf_approx) p /= norm;

  out.slowness_ratio = 0.0;
  for (std::size_t r = 0; r < spec.r_max; ++r) {
    double intensity =
        markov_intensity(spec.decay[r], spec.rabi[r], spec.detuning[r]);
    if (intensity > 0.0)
      out.slowness_ratio =
          std::max(out.slowness_ratio, spec.rate_out_of(r) / intensity);
  }
  return out;
}

void write_csv(const DensityCurve& curve, std::ostream& out) {
  const bool with_counts = curve.kind == CurveKind::Estimated;
  out << (with_counts ? "tau,density,count\n" : "tau,density\n");
  for (std::size_t i = 0; i < curve.tau.size(); ++i) {
    out << detail::num12(curve.tau[i]) << ',' << detail::num12(curve.density[i]);
    if (with_counts) out << ',' << (i < curve.counts.size() ? curve.counts[i] : 0);
    out << "\n";
  }
}

void write_csv(const JointDensitySurface& surface, std::ostream& out) {
  const bool with_counts = surface.kind == CurveKind::Estimated;
  out << (with_counts ? "tau1,tau2,density,count\n" : "tau1,tau2,density\n");
  for (std::size_t i = 0; i < surface.tau1.size(); ++i)
    for (std::size_t j = 0; j < surface.tau2.size(); ++j) {
      out << detail::num12(surface.tau1[i]) << ',' << detail::num12(surface.tau2[j])
          << ',' << detail::num12(surface.value[i][j]);
      if (with_counts) out << ',' << surface.counts[i][j];
      out << "\n";
    }
}

void write_csv(const LambdaSurface& surface, std::ostream& out) {
  const bool with_errors = !surface.stderr_.empty();
  out << (with_errors ? "tau1,tau2,lambda,masked,count,stderr\n"
                      : "tau1,tau2,lambda,masked\n");
  for (std::size_t i = 0; i < surface.tau1.size(); ++i)
    for (std::size_t j = 0; j < surface.tau2.size(); ++j) {
      out << detail::num12(surface.tau1[i]) << ',' << detail::num12(surface.tau2[j])
          << ',' << detail::num12(surface.value[i][j]) << ','
          << (surface.masked[i][j] ? 1 : 0);
      if (with_errors)
        out << ',' << surface.counts[i][j] << ','
            << detail::num12(surface.stderr_[i][j]);
      out << "\n";
    }
}

void write_csv(const MasterCurves& curves, std::ostream& out) {
  out << "time,upper";
  for (std::size_t r = 0; r < curves.config.size(); ++r) out << ",P_" << r;
  out << "\n";
  for (std::size_t i = 0; i < curves.time.size(); ++i) {
    out << detail::num12(curves.time[i]) << ',' << detail::num12(curves.upper[i]);
    for (const auto& config : curves.config) out << ',' << detail::num12(config[i]);
    out << "\n";
  }
}

}  // namespace lindjump
