// ctcalign/pipeline.hpp
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

#ifndef CTCALIGN_PIPELINE_HPP
#define CTCALIGN_PIPELINE_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ctcalign/lattice.hpp"
#include "ctcalign/phoneset.hpp"
#include "ctcalign/posterior.hpp"

namespace ctcalign {

struct AlignConfig {
  double boost_factor = 5.0;
  double floor = 1e-8;
  bool boost_enabled = true;
  bool enforce_completeness = true;
  bool hierarchical = true;
  double gap_tolerance_ms = 0.0;
  double silence_threshold = 0.5;
  double silence_min_duration_ms = 100.0;

  /// Throws InputError when a field is outside its legal range.
  void validate(double frame_hop_ms) const;
};

/// One aligned phoneme; frames are half-open [start_frame, end_frame).
struct PhonemeInterval {
  int label = -1;
  Eigen::Index start_frame = 0;
  Eigen::Index end_frame = 0;
  double start_ms = 0.0;
  double end_ms = 0.0;
  double score = 0.0;  // mean per-frame log-probability of `label`
  bool inserted = false;

  bool operator==(const PhonemeInterval&) const = default;
};

struct Gap {
  std::size_t after = 0;  // index of the interval the gap follows
  double duration_ms = 0.0;
  bool operator==(const Gap&) const = default;
};

enum class DecodeMode { kGlobal, kHierarchical, kFallbackGlobal };

struct Alignment {
  std::vector<PhonemeInterval> intervals;
  std::vector<Gap> gaps;
  std::int64_t hop_tenths = 100;
  std::int64_t offset_tenths = 0;
  Eigen::Index num_frames = 0;
  DecodeMode mode = DecodeMode::kGlobal;

  double frame_time_ms(Eigen::Index t) const {
    return static_cast<double>(offset_tenths + t * hop_tenths) / 10.0;
  }
  double utterance_span_ms() const {
    return static_cast<double>(num_frames * hop_tenths) / 10.0;
  }
  std::vector<int> labels() const;

  /// Equality of the alignment result, ignoring the decode mode tag.
  bool same_result(const Alignment& o) const {
    return intervals == o.intervals && gaps == o.gaps &&
           hop_tenths == o.hop_tenths && offset_tenths == o.offset_tenths &&
           num_frames == o.num_frames;
  }
};

/// Reports the first violated Alignment invariant (ordering, non-overlap,
/// frame-grid timing, gap bookkeeping), if any.
std::optional<std::string> check_alignment(const Alignment& a);

struct FrameSpan {
  Eigen::Index first = 0;
  Eigen::Index end = 0;  // exclusive
  Eigen::Index size() const { return end - first; }
  bool operator==(const FrameSpan&) const = default;
};

/// Distinct phoneme classes named by the targets.
std::set<int> target_classes(const TargetSequence& targets);

/// Adds ln(beta) to every target-class column; other columns untouched.
/// No renormalization. beta == 1 returns an exact copy.
template <typename Scalar>
BasicPosteriorgram<Scalar> boost_targets(const BasicPosteriorgram<Scalar>& p,
                                         const TargetSequence& targets,
                                         double beta) {
  if (!(beta >= 1.0)) throw InputError("boost factor must be >= 1");
  BasicPosteriorgram<Scalar> out = p;
  const double shift = std::log(beta);
  if (shift == 0.0) return out;
  for (const int c : target_classes(targets))
    out.logits().col(c).array() += static_cast<Scalar>(shift);
  return out;
}

/// Raises target-class logits to at least ln(epsilon).
template <typename Scalar>
BasicPosteriorgram<Scalar> apply_floor(const BasicPosteriorgram<Scalar>& p,
                                       const TargetSequence& targets,
                                       double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw InputError("probability floor must lie in (0, 1)");
  BasicPosteriorgram<Scalar> out = p;
  const auto floor = static_cast<Scalar>(std::log(epsilon));
  for (const int c : target_classes(targets))
    out.logits().col(c) = out.logits().col(c).cwiseMax(floor);
  return out;
}

/// Maximal runs of frames whose silence + blank probability exceeds the
/// threshold and that last at least silence_min_duration_ms.
std::vector<FrameSpan> detect_silence_regions(const Posteriorgram& p,
                                              int silence_id, int blank_id,
                                              const AlignConfig& cfg);

/// Intervals for one decoded span: runs on phoneme positions become
/// intervals, blank runs are left as holes. `first_frame` is the span's
/// offset inside `p`; scores use `p`.
std::vector<PhonemeInterval> extract_intervals(
    const std::vector<OccupancyRun>& runs, const StatePath& path,
    const Posteriorgram& p, Eigen::Index first_frame = 0);

/// Builds the Alignment around a full set of intervals: closes gaps shorter
/// than the tolerance by extending the earlier phoneme, then records every
/// remaining positive gap. Leading and trailing silence are not gaps.
Alignment finalize_alignment(std::vector<PhonemeInterval> intervals,
                             const Posteriorgram& p, const AlignConfig& cfg,
                             DecodeMode mode = DecodeMode::kGlobal);

/// Lattice decode of `phonemes` on frames [span.first, span.end) of `p`.
std::vector<PhonemeInterval> decode_span(const Posteriorgram& p,
                                         const std::vector<int>& phonemes,
                                         int blank_id, FrameSpan span);

/// Single lattice over the whole utterance; silence markers are dropped.
Alignment global_align(const Posteriorgram& p, const TargetSequence& targets,
                       const PhonemeInventory& inventory,
                       const AlignConfig& cfg);

/// Splits at detected interior silences when their count equals the number
/// of marker-separated chunks minus one; each chunk is decoded on its own
/// inter-silence span. Falls back to global_align on a count mismatch or an
/// infeasible chunk. Silence regions are detected on `raw`, decoding uses
/// `p` (the calibrated matrix).
Alignment hierarchical_align(const Posteriorgram& raw, const Posteriorgram& p,
                             const TargetSequence& targets,
                             const PhonemeInventory& inventory,
                             const AlignConfig& cfg);

/// Inserts every target phoneme missing from `a` as a one-frame interval at
/// the frame maximizing its logit between its neighbours. On zero slack the
/// insert takes a boundary frame from the longer-than-one-frame neighbour.
/// Requires `a`'s labels to be a subsequence of the targets.
Alignment enforce_completeness(const Alignment& a, const Posteriorgram& p,
                               const TargetSequence& targets,
                               const AlignConfig& cfg);

/// Full pipeline: floor, boost, hierarchical or global decode, interval
/// extraction, completeness enforcement.
/// Floor, boost, decode (hierarchical or global), then enforce completeness.
/// Interval scores are taken from the floored input without the boost.
Alignment align(const Posteriorgram& p, const TargetSequence& targets,
                const PhonemeInventory& inventory, const AlignConfig& cfg);

/// Floor and (optionally) boost, as applied by align().
Posteriorgram calibrate(const Posteriorgram& p, const TargetSequence& targets,
                        const AlignConfig& cfg);

}  // namespace ctcalign

#endif  // CTCALIGN_PIPELINE_HPP
