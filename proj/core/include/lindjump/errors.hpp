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

#include <stdexcept>
#include <string>
#include <vector>

namespace lindjump {

/// Base class for all lindjump errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent array / matrix dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A quantity left its numerically admissible range (trace with a large
/// imaginary part, negative rate beyond tolerance, survival above one, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Model document rejected; carries every violation found, not just the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "invalid model document:";
    for (const auto& s : v) out += "\n  - " + s;
    return out;
  }
  std::vector<std::string> violations_;
};

/// The stationary manifold of a generator is (numerically) degenerate.
class StationaryAmbiguityError : public Error {
 public:
  StationaryAmbiguityError(const std::string& what, double gap)
      : Error(what), gap_(gap) {}
  /// Ratio of the second-smallest singular value to the largest one.
  double gap() const { return gap_; }

 private:
  double gap_;
};

/// Total event rate vanished; the next waiting time is infinite.
class DarkStateError : public Error {
 public:
  DarkStateError(const std::string& what, double residual_survival)
      : Error(what), residual_survival_(residual_survival) {}
  double residual_survival() const { return residual_survival_; }

 private:
  double residual_survival_;
};

/// Conditional propagation lost all norm; the requested step is meaningless.
class UnderflowError : public Error {
 public:
  using Error::Error;
};

/// First-order stepping asked to take a step outside its accuracy guard.
class StepSizeError : public Error {
 public:
  using Error::Error;
};

/// Channel selection requested while every channel rate is zero.
class NoEventError : public Error {
 public:
  using Error::Error;
};

}  // namespace lindjump
