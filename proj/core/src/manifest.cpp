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

#include "lindjump/manifest.hpp"

#include <fstream>

#include "lindjump/errors.hpp"

namespace lindjump {

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["spec_hash"] = spec_hash;
  j["subcommand"] = subcommand;
  j["seeds"] = seeds;
  j["algorithm"] = algorithm;
  j["stop_criterion"] = stop_criterion;
  j["output_paths"] = output_paths;
  j["tool_version"] = tool_version;
  j["wall_time_seconds"] = wall_time_seconds;
  if (!extra.is_null()) j["extra"] = extra;
  return j;
}

void RunManifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write manifest " + path.string());
  out << to_json().dump(2) << "\n";
}

}  // namespace lindjump
