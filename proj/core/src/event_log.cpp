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

#include "lindjump/event_log.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "format.hpp"

namespace lindjump {

void EventLog::validate() const {
  double last_time = -1.0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event& e = events[i];
    if (!(e.time > last_time))
      throw NumericalError("event times must be strictly increasing (event " +
                           std::to_string(i) + ")");
    last_time = e.time;
    double sum = 0.0;
    std::size_t near_one = 0;
    for (double w : e.post_weights) {
      if (w < 0.0)
        throw NumericalError("negative post-jump weight at event " +
                             std::to_string(i));
      sum += w;
      if (std::abs(w - 1.0) <= 1e-9) ++near_one;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw NumericalError("post-jump weights of event " + std::to_string(i) +
                           " sum to " + std::to_string(sum));
    if (meta.scheme == Scheme::PhotonAndConfig && near_one != 1)
      throw NumericalError(
          "configuration-resolved log must carry one-hot weights (event " +
          std::to_string(i) + ")");
  }
}

void write_csv(const EventLog& log, std::ostream& out) {
  std::size_t r_max = log.events.empty() ? 0 : log.events[0].post_weights.size();
  out << "event_index,time,channel";
  for (std::size_t r = 0; r < r_max; ++r) out << ",p_" << r;
  out << "\n";
  for (std::size_t i = 0; i < log.events.size(); ++i) {
    const Event& e = log.events[i];
    out << i << ',' << detail::num12(e.time) << ',' << e.channel.str();
    for (double w : e.post_weights) out << ',' << detail::num12(w);
    out << "\n";
  }
}

}  // namespace lindjump
