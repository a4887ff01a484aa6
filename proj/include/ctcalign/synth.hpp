// ctcalign/synth.hpp
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

#ifndef CTCALIGN_SYNTH_HPP
#define CTCALIGN_SYNTH_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ctcalign/phoneset.hpp"
#include "ctcalign/pipeline.hpp"
#include "ctcalign/posterior.hpp"

namespace ctcalign {

/// Silence block of `frames` silence-class frames placed right after
/// phoneme `after` (before the next phoneme's gap).
struct SilenceBlock {
  int after = 0;
  int frames = 0;
};

/// Scripted utterance: leading blanks, then for each phoneme its gap
/// (blank frames) and its own frames, optional silence blocks, trailing
/// blanks.
struct SynthScenario {
  std::vector<int> labels;
  std::vector<int> durations;    // frames per phoneme, >= 1
  std::vector<int> gaps_before;  // blank frames before phoneme i (i >= 1)
  int leading_frames = 0;
  int trailing_frames = 0;
  std::vector<SilenceBlock> silences;
  bool silence_markers = true;  // emit a SilenceMarker per silence block
  double peak = 1.0;            // probability of the scripted class
  double temperature = 0.2;     // softmax temperature of the off-class noise
  std::uint64_t seed = 0;
  std::int64_t hop_tenths = 100;
  std::int64_t offset_tenths = 0;

  int total_frames() const;
};

struct SynthResult {
  Posteriorgram posteriorgram;
  Alignment reference;
  TargetSequence targets;
};

/// Builds a normalized posteriorgram whose per-frame argmax follows the
/// script. The off-class mass (1 - peak) is spread by a softmax over seeded
/// uniform noise; peak == 1 leaves every other class at -inf. Deterministic
/// in the seed. Throws InputError on an inconsistent scenario.
SynthResult generate(const SynthScenario& s, const PhonemeInventory& inventory);

struct RandomScenarioOptions {
  int num_phonemes = 20;
  int min_duration = 3;
  int max_duration = 12;
  /// Exact number of phonemes (excluding the first) preceded by a gap.
  int gapped_phonemes = 7;
  int min_gap = 1;
  int max_gap = 6;
  int leading_frames = 5;
  int trailing_frames = 5;
  int silence_blocks = 0;
  int silence_frames = 30;
  double peak = 1.0;
  double temperature = 0.2;
  std::uint64_t seed = 0;
};

/// Random scenario over the inventory's non-silence phonemes; neighbouring
/// labels always differ.
SynthScenario random_scenario(const PhonemeInventory& inventory,
                              const RandomScenarioOptions& opts);

/// Scenario JSON: labels as phoneme label strings.
SynthScenario read_scenario(std::istream& in, const PhonemeInventory& inventory);
void write_scenario(std::ostream& out, const SynthScenario& s,
                    const PhonemeInventory& inventory);

}  // namespace ctcalign

#endif  // CTCALIGN_SYNTH_HPP
