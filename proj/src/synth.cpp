// src/synth.cpp
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

#include "ctcalign/synth.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

#include "json.hpp"

namespace ctcalign {

namespace {

// 53 random bits -> [0, 1); independent of the standard library's
// distribution implementations.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

void check_scenario(const SynthScenario& s, const PhonemeInventory& inv) {
  const auto n = s.labels.size();
  if (n == 0) throw InputError("scenario has no phonemes");
  if (s.durations.size() != n)
    throw InputError("scenario needs one duration per phoneme");
  if (!s.gaps_before.empty() && s.gaps_before.size() != n)
    throw InputError("scenario needs one gap entry per phoneme");
  if (!(s.peak > 0.0 && s.peak <= 1.0)) throw InputError("peak must lie in (0, 1]");
  if (s.peak < 1.0 && !(s.temperature > 0.0))
    throw InputError("temperature must be positive");
  if (s.leading_frames < 0 || s.trailing_frames < 0)
    throw InputError("negative edge frames");
  for (std::size_t i = 0; i < n; ++i) {
    if (s.labels[i] < 0 || s.labels[i] >= inv.num_phonemes())
      throw InputError("scenario label outside the inventory");
    if (s.durations[i] < 1) throw InputError("phoneme durations must be >= 1");
    if (!s.gaps_before.empty() && s.gaps_before[i] < 0)
      throw InputError("negative gap");
  }
  for (const auto& b : s.silences) {
    if (b.after < 0 || b.after >= static_cast<int>(n) - 1 || b.frames < 1)
      throw InputError("silence block must sit between two phonemes");
  }
  for (std::size_t i = 1; i < n; ++i) {
    const bool separated =
        (!s.gaps_before.empty() && s.gaps_before[i] > 0) ||
        std::any_of(s.silences.begin(), s.silences.end(),
                    [&](const SilenceBlock& b) { return b.after == static_cast<int>(i) - 1; });
    if (s.labels[i] == s.labels[i - 1] && !separated)
      throw InputError("identical neighbouring phonemes need a gap between them");
  }
}

}  // namespace

int SynthScenario::total_frames() const {
  int total = leading_frames + trailing_frames;
  total += std::accumulate(durations.begin(), durations.end(), 0);
  total += std::accumulate(gaps_before.begin(), gaps_before.end(), 0);
  for (const auto& b : silences) total += b.frames;
  return total;
}

SynthResult generate(const SynthScenario& s, const PhonemeInventory& inventory) {
  check_scenario(s, inventory);
  const int frames = s.total_frames();
  const int classes = inventory.phoneme_head_size();

  // Script: true class per frame, phoneme intervals, target tokens.
  std::vector<int> script;
  script.reserve(static_cast<std::size_t>(frames));
  std::vector<PhonemeInterval> intervals;
  TargetSequence targets;
  script.insert(script.end(), static_cast<std::size_t>(s.leading_frames),
                inventory.blank_id());
  for (std::size_t i = 0; i < s.labels.size(); ++i) {
    if (!s.gaps_before.empty() && i > 0)
      script.insert(script.end(), static_cast<std::size_t>(s.gaps_before[i]),
                    inventory.blank_id());
    PhonemeInterval iv;
    iv.label = s.labels[i];
    iv.start_frame = static_cast<Eigen::Index>(script.size());
    script.insert(script.end(), static_cast<std::size_t>(s.durations[i]), s.labels[i]);
    iv.end_frame = static_cast<Eigen::Index>(script.size());
    intervals.push_back(iv);
    targets.items.push_back(TargetToken::Phoneme(s.labels[i]));
    for (const auto& b : s.silences) {
      if (b.after != static_cast<int>(i)) continue;
      script.insert(script.end(), static_cast<std::size_t>(b.frames),
                    inventory.silence_id());
      if (s.silence_markers) targets.items.push_back(TargetToken::Silence());
    }
  }
  script.insert(script.end(), static_cast<std::size_t>(s.trailing_frames),
                inventory.blank_id());

  std::mt19937_64 rng(s.seed);
  Posteriorgram::Matrix logits(frames, classes);
  const double log_peak = std::log(s.peak);
  std::vector<double> weights(static_cast<std::size_t>(classes));
  for (int t = 0; t < frames; ++t) {
    const int truth = script[static_cast<std::size_t>(t)];
    if (s.peak == 1.0) {
      logits.row(t).setConstant(-std::numeric_limits<float>::infinity());
      logits(t, truth) = 0.0f;
      continue;
    }
    double norm = 0.0;
    for (int c = 0; c < classes; ++c) {
      const double u = uniform01(rng);
      weights[c] = c == truth ? 0.0 : std::exp(u / s.temperature);
      norm += weights[c];
    }
    const double log_off = std::log1p(-s.peak) - std::log(norm);
    for (int c = 0; c < classes; ++c)
      logits(t, c) = static_cast<float>(
          c == truth ? log_peak : log_off + std::log(weights[c]));
  }

  Posteriorgram p(std::move(logits), s.hop_tenths, s.offset_tenths, Head::kPhoneme);
  AlignConfig cfg;
  cfg.gap_tolerance_ms = 0.0;
  for (auto& iv : intervals) {
    iv.start_ms = p.frame_time_ms(iv.start_frame);
    iv.end_ms = p.frame_time_ms(iv.end_frame);
    double sum = 0.0;
    for (auto t = iv.start_frame; t < iv.end_frame; ++t) sum += p(t, iv.label);
    iv.score = sum / static_cast<double>(iv.end_frame - iv.start_frame);
  }
  auto reference = finalize_alignment(std::move(intervals), p, cfg);
  return {std::move(p), std::move(reference), std::move(targets)};
}

SynthScenario random_scenario(const PhonemeInventory& inventory,
                              const RandomScenarioOptions& o) {
  if (o.num_phonemes < 1) throw InputError("need at least one phoneme");
  if (o.gapped_phonemes > o.num_phonemes - 1)
    throw InputError("more gapped phonemes than phoneme boundaries");
  std::vector<int> pool;
  for (int i = 0; i < inventory.num_phonemes(); ++i)
    if (i != inventory.silence_id()) pool.push_back(i);

  std::mt19937_64 rng(o.seed);
  SynthScenario s;
  s.seed = o.seed ^ 0x9E3779B97F4A7C15ULL;
  s.peak = o.peak;
  s.temperature = o.temperature;
  s.leading_frames = o.leading_frames;
  s.trailing_frames = o.trailing_frames;
  const auto n = static_cast<std::size_t>(o.num_phonemes);
  s.gaps_before.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    int label;
    do {
      label = pool[static_cast<std::size_t>(
          uniform_int(rng, 0, static_cast<int>(pool.size()) - 1))];
    } while (pool.size() > 1 && i > 0 && label == s.labels[i - 1]);
    s.labels.push_back(label);
    s.durations.push_back(uniform_int(rng, o.min_duration, o.max_duration));
  }

  // Exactly `gapped_phonemes` of the boundaries 1..n-1 get a gap.
  std::vector<std::size_t> order(n - 1);
  std::iota(order.begin(), order.end(), 1);
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[static_cast<std::size_t>(rng() % i)]);
  for (std::size_t k = 0; k < static_cast<std::size_t>(o.gapped_phonemes); ++k)
    s.gaps_before[order[k]] = uniform_int(rng, o.min_gap, o.max_gap);

  for (int b = 0; b < o.silence_blocks && o.num_phonemes > 1; ++b) {
    const int after = static_cast<int>(
        (static_cast<long>(b) + 1) * (o.num_phonemes - 1) / (o.silence_blocks + 1));
    s.silences.push_back({std::min(after, o.num_phonemes - 2), o.silence_frames});
  }
  return s;
}

SynthScenario read_scenario(std::istream& in, const PhonemeInventory& inventory) {
  try {
    const auto doc = nlohmann::json::parse(in);
    SynthScenario s;
    for (const auto& label : doc.at("labels")) {
      const auto idx = inventory.find_phoneme(label.get<std::string>());
      if (!idx) throw InputError("scenario names unknown phoneme '" +
                                 label.get<std::string>() + "'");
      s.labels.push_back(*idx);
    }
    s.durations = doc.at("durations").get<std::vector<int>>();
    s.gaps_before = doc.value("gaps_before", std::vector<int>{});
    s.leading_frames = doc.value("leading_frames", 0);
    s.trailing_frames = doc.value("trailing_frames", 0);
    for (const auto& b : doc.value("silences", nlohmann::json::array()))
      s.silences.push_back({b.at("after").get<int>(), b.at("frames").get<int>()});
    s.silence_markers = doc.value("silence_markers", true);
    s.peak = doc.value("peak", 1.0);
    s.temperature = doc.value("temperature", 0.2);
    s.seed = doc.value("seed", std::uint64_t{0});
    s.hop_tenths = std::llround(doc.value("frame_hop_ms", 10.0) * 10.0);
    s.offset_tenths = std::llround(doc.value("frame_offset_ms", 0.0) * 10.0);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("scenario JSON: ") + e.what());
  }
}

void write_scenario(std::ostream& out, const SynthScenario& s,
                    const PhonemeInventory& inventory) {
  nlohmann::json labels = nlohmann::json::array();
  for (const int l : s.labels) labels.push_back(inventory.phoneme_label(l));
  nlohmann::json silences = nlohmann::json::array();
  for (const auto& b : s.silences)
    silences.push_back({{"after", b.after}, {"frames", b.frames}});
  const nlohmann::json doc = {
      {"labels", labels},
      {"durations", s.durations},
      {"gaps_before", s.gaps_before},
      {"leading_frames", s.leading_frames},
      {"trailing_frames", s.trailing_frames},
      {"silences", silences},
      {"silence_markers", s.silence_markers},
      {"peak", s.peak},
      {"temperature", s.temperature},
      {"seed", s.seed},
      {"frame_hop_ms", static_cast<double>(s.hop_tenths) / 10.0},
      {"frame_offset_ms", static_cast<double>(s.offset_tenths) / 10.0}};
  out << doc.dump(2) << '\n';
}

}  // namespace ctcalign
