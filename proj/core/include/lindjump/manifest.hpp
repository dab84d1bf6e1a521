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
#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace lindjump {

inline constexpr const char* kToolVersion = "0.1.0";

/// Reproducibility record written alongside every output file. Re-running
/// the recorded invocation reproduces the outputs byte-identically (wall
/// time excepted).
struct RunManifest {
  std::uint64_t spec_hash = 0;
  std::string subcommand;
  std::vector<std::uint64_t> seeds;
  std::string algorithm;
  std::string stop_criterion;
  std::vector<std::string> output_paths;
  std::string tool_version = kToolVersion;
  double wall_time_seconds = 0.0;
  /// Extra subcommand-specific fields (grids, flags, abort diagnostics).
  nlohmann::json extra;

  nlohmann::json to_json() const;
  void write(const std::filesystem::path& path) const;
};

}  // namespace lindjump
