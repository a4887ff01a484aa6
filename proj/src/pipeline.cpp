// src/pipeline.cpp
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

#include "ctcalign/pipeline.hpp"

#include <algorithm>

namespace ctcalign {

namespace {

using Eigen::Index;

double mean_logit(const Posteriorgram& p, int label, Index first, Index end) {
  double sum = 0.0;
  for (Index t = first; t < end; ++t) sum += static_cast<double>(p(t, label));
  return sum / static_cast<double>(end - first);
}

void refresh(PhonemeInterval& iv, const Posteriorgram& p) {
  iv.start_ms = p.frame_time_ms(iv.start_frame);
  iv.end_ms = p.frame_time_ms(iv.end_frame);
  iv.score = mean_logit(p, iv.label, iv.start_frame, iv.end_frame);
}

void check_inputs(const Posteriorgram& p, const TargetSequence& targets,
                  const PhonemeInventory& inventory, const AlignConfig& cfg) {
  if (p.head() != Head::kPhoneme)
    throw InputError("alignment needs a phoneme-head posteriorgram");
  if (p.num_classes() != inventory.phoneme_head_size())
    throw InputError("posteriorgram has " + std::to_string(p.num_classes()) +
                     " classes but the inventory's phoneme head has " +
                     std::to_string(inventory.phoneme_head_size()));
  validate_targets(targets, inventory);
  cfg.validate(p.frame_hop_ms());
}

// Pushes intervals right until ordered and non-empty, then pulls them back
// inside [0, frames). Legal layouts are left unchanged.
void legalize(std::vector<PhonemeInterval>& ivs, Index frames) {
  Index prev_end = 0;
  for (auto& iv : ivs) {
    iv.start_frame = std::max(iv.start_frame, prev_end);
    iv.end_frame = std::max(iv.end_frame, iv.start_frame + 1);
    prev_end = iv.end_frame;
  }
  Index next_start = frames;
  for (auto it = ivs.rbegin(); it != ivs.rend(); ++it) {
    it->end_frame = std::min(it->end_frame, next_start);
    it->start_frame = std::min(it->start_frame, it->end_frame - 1);
    next_start = it->start_frame;
  }
}

}  // namespace

void AlignConfig::validate(double frame_hop_ms) const {
  if (!(boost_factor >= 1.0)) throw InputError("boost factor must be >= 1");
  if (!(floor > 0.0 && floor < 1.0))
    throw InputError("probability floor must lie in (0, 1)");
  if (!(gap_tolerance_ms >= 0.0)) throw InputError("gap tolerance must be >= 0");
  if (!(silence_threshold >= 0.0 && silence_threshold <= 1.0))
    throw InputError("silence threshold must lie in [0, 1]");
  if (!(silence_min_duration_ms >= frame_hop_ms))
    throw InputError("minimum silence duration must be at least one frame hop");
}

std::vector<int> Alignment::labels() const {
  std::vector<int> out;
  out.reserve(intervals.size());
  for (const auto& iv : intervals) out.push_back(iv.label);
  return out;
}

std::optional<std::string> check_alignment(const Alignment& a) {
  std::size_t gap_index = 0;
  for (std::size_t i = 0; i < a.intervals.size(); ++i) {
    const auto& iv = a.intervals[i];
    const auto at = " (interval " + std::to_string(i) + ")";
    if (iv.start_frame >= iv.end_frame) return "empty interval" + at;
    if (iv.start_frame < 0 || iv.end_frame > a.num_frames)
      return "interval outside the utterance" + at;
    if (iv.start_ms != a.frame_time_ms(iv.start_frame) ||
        iv.end_ms != a.frame_time_ms(iv.end_frame))
      return "boundary off the frame grid" + at;
    if (i == 0) continue;
    const auto& prev = a.intervals[i - 1];
    if (prev.end_frame > iv.start_frame) return "overlap" + at;
    if (prev.end_frame < iv.start_frame) {
      if (gap_index >= a.gaps.size() || a.gaps[gap_index].after != i - 1 ||
          a.gaps[gap_index].duration_ms != iv.start_ms - prev.end_ms)
        return "gap record missing or wrong" + at;
      ++gap_index;
    }
  }
  if (gap_index != a.gaps.size()) return "extra gap records";
  return std::nullopt;
}

std::set<int> target_classes(const TargetSequence& targets) {
  std::set<int> out;
  for (const auto& t : targets.items)
    if (t.is_phoneme()) out.insert(t.phoneme);
  return out;
}

std::vector<FrameSpan> detect_silence_regions(const Posteriorgram& p,
                                              int silence_id, int blank_id,
                                              const AlignConfig& cfg) {
  std::vector<FrameSpan> regions;
  const Index frames = p.num_frames();
  Index run_start = -1;
  auto close = [&](Index end) {
    const double duration =
        static_cast<double>((end - run_start) * p.hop_tenths()) / 10.0;
    if (duration >= cfg.silence_min_duration_ms) regions.push_back({run_start, end});
    run_start = -1;
  };
  for (Index t = 0; t < frames; ++t) {
    const double mass = std::exp(static_cast<double>(p(t, silence_id))) +
                        std::exp(static_cast<double>(p(t, blank_id)));
    if (mass > cfg.silence_threshold) {
      if (run_start < 0) run_start = t;
    } else if (run_start >= 0) {
      close(t);
    }
  }
  if (run_start >= 0) close(frames);
  return regions;
}

std::vector<PhonemeInterval> extract_intervals(
    const std::vector<OccupancyRun>& runs, const StatePath& path,
    const Posteriorgram& p, Index first_frame) {
  std::vector<PhonemeInterval> out;
  for (const auto& run : runs) {
    if (StatePath::is_blank_position(run.position)) continue;
    PhonemeInterval iv;
    iv.label = path.states[static_cast<std::size_t>(run.position)];
    iv.start_frame = first_frame + run.first_frame;
    iv.end_frame = first_frame + run.last_frame + 1;
    refresh(iv, p);
    out.push_back(iv);
  }
  return out;
}

Alignment finalize_alignment(std::vector<PhonemeInterval> intervals,
                             const Posteriorgram& p, const AlignConfig& cfg,
                             DecodeMode mode) {
  Alignment a;
  a.hop_tenths = p.hop_tenths();
  a.offset_tenths = p.offset_tenths();
  a.num_frames = p.num_frames();
  a.mode = mode;
  for (std::size_t i = 1; i < intervals.size(); ++i) {
    auto& prev = intervals[i - 1];
    const double gap = p.frame_time_ms(intervals[i].start_frame) -
                       p.frame_time_ms(prev.end_frame);
    if (gap > 0.0 && gap < cfg.gap_tolerance_ms) {
      prev.end_frame = intervals[i].start_frame;
      refresh(prev, p);
    }
  }
  for (std::size_t i = 1; i < intervals.size(); ++i) {
    const double gap = intervals[i].start_ms - intervals[i - 1].end_ms;
    if (gap > 0.0) a.gaps.push_back({i - 1, gap});
  }
  a.intervals = std::move(intervals);
  return a;
}

std::vector<PhonemeInterval> decode_span(const Posteriorgram& p,
                                         const std::vector<int>& phonemes,
                                         int blank_id, FrameSpan span) {
  const auto path = build_state_path(phonemes, blank_id);
  const auto trace = viterbi(p.logits().middleRows(span.first, span.size()), path);
  return extract_intervals(backtrace_to_occupancy(trace, path), path, p,
                           span.first);
}

Alignment global_align(const Posteriorgram& p, const TargetSequence& targets,
                       const PhonemeInventory& inventory,
                       const AlignConfig& cfg) {
  auto intervals = decode_span(p, targets.phonemes(), inventory.blank_id(),
                               {0, p.num_frames()});
  return finalize_alignment(std::move(intervals), p, cfg, DecodeMode::kGlobal);
}

Alignment hierarchical_align(const Posteriorgram& raw, const Posteriorgram& p,
                             const TargetSequence& targets,
                             const PhonemeInventory& inventory,
                             const AlignConfig& cfg) {
  const auto chunks = targets.chunks();
  if (chunks.size() <= 1) return global_align(p, targets, inventory, cfg);

  std::vector<FrameSpan> interior;
  for (const auto& r : detect_silence_regions(raw, inventory.silence_id(),
                                              inventory.blank_id(), cfg))
    if (r.first > 0 && r.end < raw.num_frames()) interior.push_back(r);

  auto fallback = [&] {
    auto a = global_align(p, targets, inventory, cfg);
    a.mode = DecodeMode::kFallbackGlobal;
    return a;
  };
  if (interior.size() != chunks.size() - 1) return fallback();

  std::vector<PhonemeInterval> intervals;
  try {
    for (std::size_t i = 0; i < chunks.size(); ++i) {
      const FrameSpan span{i == 0 ? 0 : interior[i - 1].end,
                           i == interior.size() ? p.num_frames() : interior[i].first};
      auto part = decode_span(p, chunks[i], inventory.blank_id(), span);
      intervals.insert(intervals.end(), part.begin(), part.end());
    }
  } catch (const InfeasibleAlignment&) {
    return fallback();
  }
  return finalize_alignment(std::move(intervals), p, cfg,
                            DecodeMode::kHierarchical);
}

Alignment enforce_completeness(const Alignment& a, const Posteriorgram& p,
                               const TargetSequence& targets,
                               const AlignConfig& cfg) {
  const auto tgt = targets.phonemes();
  const auto n = tgt.size();
  const Index frames = p.num_frames();
  if (frames < static_cast<Index>(n))
    throw InfeasibleAlignment("fewer frames than target phonemes");

  std::vector<std::optional<PhonemeInterval>> slots(n);
  std::size_t j = 0;
  for (const auto& iv : a.intervals) {
    while (j < n && tgt[j] != iv.label) ++j;
    if (j == n)
      throw InputError("alignment labels are not a subsequence of the targets");
    slots[j++] = iv;
  }
  if (std::all_of(slots.begin(), slots.end(),
                  [](const auto& s) { return s.has_value(); }))
    return a;

  for (std::size_t first = 0; first < n;) {
    if (slots[first]) {
      ++first;
      continue;
    }
    std::size_t last = first;
    while (last < n && !slots[last]) ++last;
    Index lo = first > 0 ? slots[first - 1]->end_frame : 0;
    const Index hi = last < n ? slots[last]->start_frame : frames;
    for (std::size_t k = first; k < last; ++k) {
      const auto remaining = static_cast<Index>(last - k - 1);
      const Index upper = hi - remaining;
      Index frame;
      if (upper > lo) {
        frame = lo;
        for (Index t = lo + 1; t < upper; ++t)
          if (p(t, tgt[k]) > p(frame, tgt[k])) frame = t;
      } else {
        // Zero slack: take a boundary frame from a neighbour that can spare one.
        auto* left = k > 0 ? &*slots[k - 1] : nullptr;
        auto* right = last < n ? &*slots[last] : nullptr;
        if (left && left->end_frame - left->start_frame >= 2) {
          frame = --left->end_frame;
        } else if (right && right->end_frame - right->start_frame >= 2 &&
                   lo >= right->start_frame) {
          frame = right->start_frame++;
        } else {
          frame = std::min(lo, frames - 1);
        }
      }
      PhonemeInterval iv;
      iv.label = tgt[k];
      iv.start_frame = frame;
      iv.end_frame = frame + 1;
      iv.inserted = true;
      slots[k] = iv;
      lo = frame + 1;
    }
    first = last;
  }

  std::vector<PhonemeInterval> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(*s);
  legalize(out, frames);
  for (auto& iv : out) refresh(iv, p);
  return finalize_alignment(std::move(out), p, cfg, a.mode);
}

Posteriorgram calibrate(const Posteriorgram& p, const TargetSequence& targets,
                        const AlignConfig& cfg) {
  auto out = apply_floor(p, targets, cfg.floor);
  if (cfg.boost_enabled) out = boost_targets(out, targets, cfg.boost_factor);
  return out;
}

Alignment align(const Posteriorgram& p, const TargetSequence& targets,
                const PhonemeInventory& inventory, const AlignConfig& cfg) {
  check_inputs(p, targets, inventory, cfg);
  const auto floored = apply_floor(p, targets, cfg.floor);
  const auto calibrated =
      cfg.boost_enabled ? boost_targets(floored, targets, cfg.boost_factor) : floored;
  auto a = cfg.hierarchical
               ? hierarchical_align(p, calibrated, targets, inventory, cfg)
               : global_align(calibrated, targets, inventory, cfg);
  if (cfg.enforce_completeness)
    a = enforce_completeness(a, calibrated, targets, cfg);
  // Reported scores leave the boost out.
  for (auto& iv : a.intervals)
    iv.score = mean_logit(floored, iv.label, iv.start_frame, iv.end_frame);
  return a;
}

}  // namespace ctcalign
