// ctcalign/lattice.hpp
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

#ifndef CTCALIGN_LATTICE_HPP
#define CTCALIGN_LATTICE_HPP

#include <Eigen/Core>

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctcalign/errors.hpp"
#include "ctcalign/posterior.hpp"

namespace ctcalign {

/// Blank-interleaved CTC state sequence [blank, p1, blank, ..., pS, blank].
/// Even positions are blanks, odd position 2i+1 holds the i-th target.
struct StatePath {
  std::vector<int> states;
  int blank = -1;

  Eigen::Index size() const { return static_cast<Eigen::Index>(states.size()); }
  Eigen::Index target_length() const { return (size() - 1) / 2; }
  static bool is_blank_position(Eigen::Index s) { return s % 2 == 0; }
  /// Position s may be entered from s-2: a phoneme differing from the
  /// phoneme before the intervening blank.
  bool can_skip_into(Eigen::Index s) const {
    return s >= 2 && !is_blank_position(s) && states[s] != states[s - 2];
  }
  /// Fewest frames of any legal trace: one per target plus one blank
  /// between each pair of identical neighbours.
  Eigen::Index min_frames() const;
};

/// Throws InputError when `targets` is empty or contains `blank`.
StatePath build_state_path(std::span<const int> targets, int blank);

/// Best path through the state lattice, one state position per frame.
struct StateTrace {
  std::vector<int> state_at_frame;
  double score = -std::numeric_limits<double>::infinity();
};

/// Maximal run of consecutive frames on one state position.
struct OccupancyRun {
  int position = 0;
  Eigen::Index first_frame = 0;
  Eigen::Index last_frame = 0;  // inclusive
  bool operator==(const OccupancyRun&) const = default;
};

/// Describes the first violated StateTrace invariant, if any.
std::optional<std::string> check_trace(const StateTrace& trace,
                                       const StatePath& path);

/// Compresses a trace into runs covering [0, T) in order.
std::vector<OccupancyRun> backtrace_to_occupancy(const StateTrace& trace,
                                                 const StatePath& path);

namespace detail {

// Per-cell predecessor step (0 stay, 1 advance, 2 skip) packed four cells per
// byte; a Buckeye-scale table stays near T*(2S+1)/4 bytes.
class StepTable {
 public:
  StepTable(Eigen::Index rows, Eigen::Index cols)
      : cols_(cols),
        bytes_(static_cast<std::size_t>((rows * cols + 3) / 4), 0) {}

  void set(Eigen::Index row, Eigen::Index col, unsigned step) {
    const auto i = static_cast<std::size_t>(row * cols_ + col);
    bytes_[i >> 2] |= static_cast<std::uint8_t>(step << ((i & 3) * 2));
  }
  unsigned get(Eigen::Index row, Eigen::Index col) const {
    const auto i = static_cast<std::size_t>(row * cols_ + col);
    return (bytes_[i >> 2] >> ((i & 3) * 2)) & 3u;
  }

 private:
  Eigen::Index cols_;
  std::vector<std::uint8_t> bytes_;
};

}  // namespace detail

/// Exact Viterbi over the CTC state lattice.
///
///   score_t(s) = max(score_{t-1}(s), score_{t-1}(s-1), score_{t-1}(s-2))
///                + logit(t, path[s])
///
/// with the s-2 predecessor allowed only into a phoneme that differs from
/// the one two positions back. Decoding starts on position 0 or 1 and ends
/// on 2S-1 or 2S. Ties prefer stay, then advance, then skip; at the end the
/// last phoneme wins a tie against the trailing blank. Scores accumulate in
/// double, frame by frame.
///
/// Throws InfeasibleAlignment when there are too few frames or every live
/// state reaches -inf, InputError when a state label is outside the class
/// range.
template <typename Derived>
StateTrace viterbi(const Eigen::MatrixBase<Derived>& logits,
                   const StatePath& path) {
  using Eigen::Index;
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const Index frames = logits.rows();
  const Index n = path.size();
  if (n < 3) throw InputError("state path is empty");
  for (const int label : path.states)
    if (label < 0 || label >= logits.cols())
      throw InputError("state label " + std::to_string(label) +
                       " outside the " + std::to_string(logits.cols()) +
                       "-class posteriorgram");
  if (frames < path.min_frames())
    throw InfeasibleAlignment(
        std::to_string(frames) + " frames cannot hold " +
        std::to_string(path.target_length()) + " target phonemes (need " +
        std::to_string(path.min_frames()) + ")");

  std::vector<double> prev(static_cast<std::size_t>(n), kNegInf);
  std::vector<double> cur(static_cast<std::size_t>(n), kNegInf);
  std::vector<bool> skip(static_cast<std::size_t>(n));
  for (Index s = 0; s < n; ++s) skip[s] = path.can_skip_into(s);
  detail::StepTable steps(frames, n);

  prev[0] = static_cast<double>(logits(0, path.states[0]));
  prev[1] = static_cast<double>(logits(0, path.states[1]));
  if (prev[0] == kNegInf && prev[1] == kNegInf)
    throw InfeasibleAlignment("no live state at frame 0", 0);

  for (Index t = 1; t < frames; ++t) {
    // States beyond 2t+1 are unreachable at frame t.
    const Index reach = std::min<Index>(n, 2 * t + 2);
    bool alive = false;
    for (Index s = 0; s < reach; ++s) {
      double best = prev[s];
      unsigned step = 0;
      if (s >= 1 && prev[s - 1] > best) {
        best = prev[s - 1];
        step = 1;
      }
      if (skip[s] && prev[s - 2] > best) {
        best = prev[s - 2];
        step = 2;
      }
      cur[s] = best + static_cast<double>(logits(t, path.states[s]));
      if (step) steps.set(t, s, step);
      alive = alive || cur[s] != kNegInf;
    }
    if (!alive)
      throw InfeasibleAlignment(
          "every reachable state has -inf score at frame " + std::to_string(t),
          static_cast<long>(t));
    std::swap(prev, cur);
  }

  Index state = n - 2;
  if (prev[n - 1] > prev[n - 2]) state = n - 1;
  if (prev[state] == kNegInf)
    throw InfeasibleAlignment("no legal path reaches the final states by frame " +
                                  std::to_string(frames - 1),
                              static_cast<long>(frames - 1));

  StateTrace trace;
  trace.score = prev[state];
  trace.state_at_frame.resize(static_cast<std::size_t>(frames));
  for (Index t = frames - 1; t > 0; --t) {
    trace.state_at_frame[t] = static_cast<int>(state);
    state -= steps.get(t, state);
  }
  trace.state_at_frame[0] = static_cast<int>(state);
  return trace;
}

template <typename Scalar>
StateTrace viterbi(const BasicPosteriorgram<Scalar>& p, const StatePath& path) {
  return viterbi(p.logits(), path);
}

}  // namespace ctcalign

#endif  // CTCALIGN_LATTICE_HPP
