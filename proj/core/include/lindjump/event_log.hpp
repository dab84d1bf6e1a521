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
#include <iosfwd>
#include <string>
#include <vector>

#include "lindjump/model.hpp"

namespace lindjump {

/// One recording event: when it happened, in which detector, and the
/// configurational populations immediately after it.
struct Event {
  double time = 0.0;
  ChannelLabel channel;
  std::vector<double> post_weights;
};

struct EventLogMeta {
  std::uint64_t seed = 0;
  std::string algorithm;  // "coarse" or "fine"
  std::uint64_t spec_hash = 0;
  double total_time = 0.0;
  std::size_t event_count = 0;
  Scheme scheme = Scheme::PhotonOnly;
};

/// The recording record of one trajectory.
struct EventLog {
  std::vector<Event> events;
  EventLogMeta meta;

  /// Enforce the log invariants: strictly increasing times, normalized
  /// nonnegative weights, one-hot weights when the configuration is measured.
  void validate() const;
};

/// CSV with header `event_index,time,channel,p_0,...,p_{R-1}`; channel is
/// `ph` or `cfg:<R>`, times carry 12 significant digits.
void write_csv(const EventLog& log, std::ostream& out);

}  // namespace lindjump
