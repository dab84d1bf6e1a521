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

#include "lindjump/model.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <set>
#include <sstream>

namespace lindjump {

namespace {

using Matrix4 = Eigen::Matrix4cd;

// Superoperator of rho -> A rho B on the row-major flattened block:
// M[(2i+j),(2k+l)] = A(i,k) B(l,j).
Matrix4 sandwich(const Block& a, const Block& b) {
  Matrix4 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) m(2 * i + j, 2 * k + l) = a(i, k) * b(l, j);
  return m;
}

Block lowering() {
  Block s = Block::Zero();
  s(1, 0) = 1.0;  // |-><+|
  return s;
}

Block raising() {
  Block s = Block::Zero();
  s(0, 1) = 1.0;  // |+><-|
  return s;
}

// -i [H, rho]
Matrix4 hamiltonian_part(double rabi, double detuning) {
  Block h = Block::Zero();
  h(0, 0) = -0.5 * detuning;
  h(1, 1) = 0.5 * detuning;
  h += 0.5 * rabi * (raising() + lowering());
  const Complex i(0.0, 1.0);
  return -i * (sandwich(h, Block::Identity()) - sandwich(Block::Identity(), h));
}

// sigma rho sigma^dagger
Matrix4 recycling_part() { return sandwich(lowering(), raising()); }

// {sigma^dagger sigma, rho} / 2
Matrix4 anticommutator_part() {
  Block upper = raising() * lowering();
  return 0.5 * (sandwich(upper, Block::Identity()) +
                sandwich(Block::Identity(), upper));
}

struct BlockWriter {
  Eigen::MatrixXcd m;
  explicit BlockWriter(std::size_t r_max)
      : m(Eigen::MatrixXcd::Zero(4 * r_max, 4 * r_max)) {}
  void add(std::size_t dest, std::size_t src, const Matrix4& value) {
    m.block<4, 4>(4 * dest, 4 * src) += value;
  }
};

void verify_generator_set(const GeneratorSet& gens) {
  Eigen::MatrixXcd sum = gens.no_jump.matrix();
  for (const auto& [label, j] : gens.channels) sum += j.matrix();
  double defect = (sum - gens.liouvillian.matrix()).cwiseAbs().maxCoeff();
  if (defect > 1e-14)
    throw NumericalError("generator split defect " + std::to_string(defect));

  const std::size_t dim = gens.liouvillian.dim();
  for (std::size_t k = 0; k < dim; ++k) {
    Eigen::VectorXcd basis = Eigen::VectorXcd::Zero(dim);
    basis[k] = 1.0;
    Complex l_trace = 0.0, d_trace = 0.0, j_trace = 0.0;
    auto sum_trace = [dim](const Eigen::VectorXcd& v) {
      Complex t = 0.0;
      for (std::size_t r = 0; 4 * r < dim; ++r) t += v[4 * r] + v[4 * r + 3];
      return t;
    };
    l_trace = sum_trace(gens.liouvillian.matrix() * basis);
    d_trace = sum_trace(gens.no_jump.matrix() * basis);
    for (const auto& [label, j] : gens.channels)
      j_trace += sum_trace(j.matrix() * basis);
    if (std::abs(l_trace) > 1e-12)
      throw NumericalError("generator is not trace preserving");
    if (std::abs(d_trace + j_trace) > 1e-12)
      throw NumericalError("no-jump / jump trace identity violated");
  }
}

double number_or_nan(const nlohmann::json& j) {
  return j.is_number() ? j.get<double>() : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::string to_string(ModelKind kind) {
  return kind == ModelKind::SelfFluctuating ? "self_fluctuating" : "light_assisted";
}

std::string to_string(Scheme scheme) {
  return scheme == Scheme::PhotonOnly ? "photon_only" : "photon_and_config";
}

double ModelSpec::rate_out_of(std::size_t r) const {
  double total = 0.0;
  for (std::size_t dest = 0; dest < r_max; ++dest) total += config_rates[dest][r];
  return total;
}

double ModelSpec::decay_tilde(std::size_t r) const {
  return decay[r] + rate_out_of(r);
}

nlohmann::json ModelSpec::to_json() const {
  nlohmann::json j;
  j["kind"] = to_string(kind);
  j["scheme"] = to_string(scheme);
  j["r_max"] = r_max;
  j["rabi"] = rabi;
  j["detuning"] = detuning;
  j["decay"] = decay;
  j["config_rates"] = config_rates;
  return j;
}

std::uint64_t ModelSpec::hash() const {
  const std::string canonical = to_json().dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ModelSpec validate_spec(const nlohmann::json& document) {
  std::vector<std::string> violations;
  ModelSpec spec;

  if (!document.is_object()) {
    throw ConfigError({"document root must be an object"});
  }

  static const std::set<std::string> known_keys = {
      "kind", "scheme", "r_max", "rabi", "detuning", "decay", "config_rates"};
  for (const auto& [key, value] : document.items())
    if (!known_keys.count(key)) violations.push_back("unknown key `" + key + "`");
  for (const auto& key : known_keys)
    if (!document.contains(key)) violations.push_back("missing key `" + key + "`");

  if (document.contains("kind")) {
    const auto& k = document["kind"];
    if (k == "self_fluctuating")
      spec.kind = ModelKind::SelfFluctuating;
    else if (k == "light_assisted")
      spec.kind = ModelKind::LightAssisted;
    else
      violations.push_back(
          "kind must be `self_fluctuating` or `light_assisted`, got " + k.dump());
  }
  if (document.contains("scheme")) {
    const auto& s = document["scheme"];
    if (s == "photon_only")
      spec.scheme = Scheme::PhotonOnly;
    else if (s == "photon_and_config")
      spec.scheme = Scheme::PhotonAndConfig;
    else
      violations.push_back(
          "scheme must be `photon_only` or `photon_and_config`, got " + s.dump());
  }

  spec.r_max = 0;
  if (document.contains("r_max")) {
    const auto& r = document["r_max"];
    if (r.is_number_integer() && r.get<long long>() >= 1)
      spec.r_max = r.get<std::size_t>();
    else
      violations.push_back("r_max must be an integer >= 1");
  }

  auto read_list = [&](const char* key, std::vector<double>& out) {
    if (!document.contains(key)) return;
    const auto& arr = document[key];
    if (!arr.is_array()) {
      violations.push_back(std::string(key) + " must be an array");
      return;
    }
    for (const auto& x : arr) out.push_back(number_or_nan(x));
    if (spec.r_max >= 1 && out.size() != spec.r_max)
      violations.push_back(std::string(key) + " must have r_max = " +
                           std::to_string(spec.r_max) + " entries, got " +
                           std::to_string(out.size()));
    for (std::size_t i = 0; i < out.size(); ++i)
      if (!std::isfinite(out[i]))
        violations.push_back(std::string(key) + "[" + std::to_string(i) +
                             "] is not a finite number");
  };
  read_list("rabi", spec.rabi);
  read_list("detuning", spec.detuning);
  read_list("decay", spec.decay);

  for (std::size_t i = 0; i < spec.rabi.size(); ++i)
    if (std::isfinite(spec.rabi[i]) && spec.rabi[i] < 0.0)
      violations.push_back("rabi[" + std::to_string(i) + "] must be >= 0");
  for (std::size_t i = 0; i < spec.decay.size(); ++i)
    if (std::isfinite(spec.decay[i]) && spec.decay[i] <= 0.0)
      violations.push_back("decay[" + std::to_string(i) + "] must be > 0");

  if (document.contains("config_rates")) {
    const auto& rates = document["config_rates"];
    if (!rates.is_array()) {
      violations.push_back("config_rates must be an r_max x r_max matrix");
    } else {
      for (const auto& row : rates) {
        std::vector<double> r;
        if (row.is_array())
          for (const auto& x : row) r.push_back(number_or_nan(x));
        spec.config_rates.push_back(std::move(r));
      }
      bool shape_ok = spec.r_max >= 1 && spec.config_rates.size() == spec.r_max;
      for (const auto& row : spec.config_rates)
        shape_ok = shape_ok && row.size() == spec.r_max;
      if (!shape_ok) {
        violations.push_back("config_rates must be an r_max x r_max matrix");
      } else {
        for (std::size_t i = 0; i < spec.r_max; ++i)
          for (std::size_t j = 0; j < spec.r_max; ++j) {
            double x = spec.config_rates[i][j];
            if (!std::isfinite(x))
              violations.push_back("config_rates[" + std::to_string(i) + "][" +
                                   std::to_string(j) + "] is not a finite number");
            else if (i == j && x != 0.0)
              violations.push_back("config_rates[" + std::to_string(i) + "][" +
                                   std::to_string(i) + "] must be exactly 0");
            else if (x < 0.0)
              violations.push_back("config_rates[" + std::to_string(i) + "][" +
                                   std::to_string(j) + "] must be >= 0");
          }
      }
    }
  }

  if (!violations.empty()) throw ConfigError(std::move(violations));
  return spec;
}

std::string ChannelLabel::str() const {
  if (type == Type::Photon) return "ph";
  std::ostringstream os;
  os << "cfg:" << config;
  return os.str();
}

const Superoperator& GeneratorSet::channel(const ChannelLabel& label) const {
  for (const auto& [l, j] : channels)
    if (l == label) return j;
  throw DimensionError("no channel " + label.str() + " in this generator set");
}

GeneratorSet build_generators(const ModelSpec& spec) {
  const std::size_t n = spec.r_max;
  const Matrix4 recycle = recycling_part();
  const Matrix4 anticomm = anticommutator_part();
  const Matrix4 id4 = Matrix4::Identity();

  BlockWriter liouvillian(n);
  BlockWriter no_jump(n);
  std::vector<std::pair<ChannelLabel, BlockWriter>> channels;
  channels.emplace_back(ChannelLabel::photon(), BlockWriter(n));
  if (spec.scheme == Scheme::PhotonAndConfig)
    for (std::size_t r = 0; r < n; ++r)
      channels.emplace_back(ChannelLabel::config_to(r), BlockWriter(n));

  for (std::size_t r = 0; r < n; ++r) {
    const Matrix4 ham = hamiltonian_part(spec.rabi[r], spec.detuning[r]);
    const double gamma = spec.decay[r];

    if (spec.kind == ModelKind::SelfFluctuating) {
      const double escape = spec.rate_out_of(r);
      liouvillian.add(r, r, ham + gamma * (recycle - anticomm) - escape * id4);
      channels[0].second.add(r, r, gamma * recycle);
      no_jump.add(r, r, ham - gamma * anticomm - escape * id4);
      for (std::size_t dest = 0; dest < n; ++dest) {
        if (dest == r) continue;
        const double hop = spec.config_rates[dest][r];
        liouvillian.add(dest, r, hop * id4);
        if (spec.scheme == Scheme::PhotonAndConfig)
          channels[1 + dest].second.add(dest, r, hop * id4);
        else
          no_jump.add(dest, r, hop * id4);
      }
    } else {
      const double gamma_tilde = spec.decay_tilde(r);
      liouvillian.add(r, r, ham + gamma * recycle - gamma_tilde * anticomm);
      channels[0].second.add(r, r, gamma * recycle);
      no_jump.add(r, r, ham - gamma_tilde * anticomm);
      for (std::size_t dest = 0; dest < n; ++dest) {
        if (dest == r) continue;
        const double hop = spec.config_rates[dest][r];
        liouvillian.add(dest, r, hop * recycle);
        if (spec.scheme == Scheme::PhotonAndConfig)
          channels[1 + dest].second.add(dest, r, hop * recycle);
        else
          channels[0].second.add(dest, r, hop * recycle);
      }
    }
  }

  Eigen::MatrixXcd jump_sum = Eigen::MatrixXcd::Zero(4 * n, 4 * n);
  std::vector<std::pair<ChannelLabel, Superoperator>> built;
  built.reserve(channels.size());
  for (auto& [label, writer] : channels) {
    jump_sum += writer.m;
    built.emplace_back(label, Superoperator(std::move(writer.m)));
  }

  GeneratorSet gens{Superoperator(std::move(liouvillian.m)), std::move(built),
                    Superoperator(std::move(no_jump.m)),
                    Superoperator(std::move(jump_sum)), n};
  verify_generator_set(gens);
  return gens;
}

ModelSpec reduce_to_markov(const ModelSpec& spec, std::size_t r) {
  if (r >= spec.r_max)
    throw DimensionError("configuration index " + std::to_string(r) +
                         " out of range for r_max = " + std::to_string(spec.r_max));
  ModelSpec reduced;
  reduced.kind = spec.kind;
  reduced.scheme = Scheme::PhotonOnly;
  reduced.r_max = 1;
  reduced.rabi = {spec.rabi[r]};
  reduced.detuning = {spec.detuning[r]};
  reduced.decay = {spec.kind == ModelKind::LightAssisted ? spec.decay_tilde(r)
                                                         : spec.decay[r]};
  reduced.config_rates = {{0.0}};
  return reduced;
}

FastLimitParams fast_limit_params(const ModelSpec& spec) {
  if (spec.kind != ModelKind::SelfFluctuating)
    throw Error("fast-limit parameters are defined for self-fluctuating models only");
  const std::size_t n = spec.r_max;

  FastLimitParams out;
  if (n == 1) {
    out.stationary_config = {1.0};
  } else {
    Eigen::MatrixXd rate_matrix = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t dest = 0; dest < n; ++dest)
      for (std::size_t src = 0; src < n; ++src)
        rate_matrix(dest, src) = (dest == src)
                                     ? -spec.rate_out_of(src)
                                     : spec.config_rates[dest][src];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rate_matrix, Eigen::ComputeThinU |
                                                           Eigen::ComputeThinV);
    const auto& sing = svd.singularValues();
    double scale = std::max(sing[0], 1e-300);
    if (sing[n - 2] < 1e-8 * scale)
      throw StationaryAmbiguityError(
          "classical configuration chain has no unique stationary distribution",
          sing[n - 2] / scale);
    Eigen::VectorXd null_dir = svd.matrixV().col(n - 1);
    double total = null_dir.sum();
    if (std::abs(total) < 1e-12)
      throw NumericalError("classical null vector sums to zero");
    null_dir /= total;
    out.stationary_config.assign(null_dir.data(), null_dir.data() + n);
  }

  for (std::size_t r = 0; r < n; ++r) {
    out.decay_bar += spec.decay[r] * out.stationary_config[r];
    out.rabi_bar += spec.rabi[r] * out.stationary_config[r];
    out.detuning_bar += spec.detuning[r] * out.stationary_config[r];
  }
  return out;
}

}  // namespace lindjump
