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

#include <cstdint>
#include <random>

namespace lindjump {

/// Deterministic pseudo-random stream. The algorithm (mt19937_64 seeded via
/// splitmix64, doubles from the top 53 bits) is part of the output-file
/// contract: identical seeds give identical streams on every platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Seed of the independent stream for one trajectory of an ensemble.
  static std::uint64_t derive(std::uint64_t master_seed,
                              std::uint64_t trajectory_index) {
    return splitmix64(master_seed) ^
           splitmix64(0x9E3779B97F4A7C15ULL + trajectory_index);
  }

  /// Independent stream for one trajectory of an ensemble.
  static RngStream for_trajectory(std::uint64_t master_seed,
                                  std::uint64_t trajectory_index) {
    return RngStream(derive(master_seed, trajectory_index));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in the open interval (0, 1).
  double uniform01() {
    for (;;) {
      double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace lindjump
