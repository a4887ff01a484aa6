// src/lattice.cpp
//
// Copyright 2026  The ctcalign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ctcalign/lattice.hpp"

namespace ctcalign {

Eigen::Index StatePath::min_frames() const {
  Eigen::Index frames = target_length();
  for (Eigen::Index s = 3; s < size(); s += 2)
    if (states[s] == states[s - 2]) ++frames;
  return frames;
}

StatePath build_state_path(std::span<const int> targets, int blank) {
  if (targets.empty()) throw InputError("cannot build a state path for no targets");
  StatePath path;
  path.blank = blank;
  path.states.reserve(2 * targets.size() + 1);
  path.states.push_back(blank);
  for (const int p : targets) {
    if (p == blank) throw InputError("blank cannot be a target phoneme");
    path.states.push_back(p);
    path.states.push_back(blank);
  }
  return path;
}

std::optional<std::string> check_trace(const StateTrace& trace,
                                       const StatePath& path) {
  const auto& st = trace.state_at_frame;
  const auto n = static_cast<int>(path.size());
  if (st.empty()) return "empty trace";
  if (st.front() != 0 && st.front() != 1)
    return "trace starts at position " + std::to_string(st.front());
  if (st.back() != n - 2 && st.back() != n - 1)
    return "trace ends at position " + std::to_string(st.back());
  std::vector<bool> visited(static_cast<std::size_t>(n), false);
  visited[static_cast<std::size_t>(st.front())] = true;
  for (std::size_t t = 1; t < st.size(); ++t) {
    const int step = st[t] - st[t - 1];
    if (step < 0 || step > 2)
      return "increment " + std::to_string(step) + " at frame " + std::to_string(t);
    if (step == 2 && !path.can_skip_into(st[t]))
      return "illegal skip into position " + std::to_string(st[t]) +
             " at frame " + std::to_string(t);
    visited[static_cast<std::size_t>(st[t])] = true;
  }
  for (int s = 1; s < n; s += 2)
    if (!visited[static_cast<std::size_t>(s)])
      return "target position " + std::to_string(s) + " never visited";
  return std::nullopt;
}

std::vector<OccupancyRun> backtrace_to_occupancy(const StateTrace& trace,
                                                 const StatePath&) {
  std::vector<OccupancyRun> runs;
  const auto& st = trace.state_at_frame;
  for (std::size_t t = 0; t < st.size(); ++t) {
    if (!runs.empty() && runs.back().position == st[t]) {
      runs.back().last_frame = static_cast<Eigen::Index>(t);
    } else {
      runs.push_back({st[t], static_cast<Eigen::Index>(t),
                      static_cast<Eigen::Index>(t)});
    }
  }
  return runs;
}

}  // namespace ctcalign
