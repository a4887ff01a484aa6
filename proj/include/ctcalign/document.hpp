// ctcalign/document.hpp
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

#ifndef CTCALIGN_DOCUMENT_HPP
#define CTCALIGN_DOCUMENT_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ctcalign/metrics.hpp"
#include "ctcalign/phoneset.hpp"
#include "ctcalign/pipeline.hpp"

namespace ctcalign {

struct DocumentInterval {
  std::string label;
  double start_ms = 0.0;
  double end_ms = 0.0;
  double score = 0.0;
  bool inserted = false;
  bool operator==(const DocumentInterval&) const = default;
};

/// Interchange form of an alignment: labels as strings, times in ms, and
/// the configuration that produced it.
struct AlignmentDocument {
  std::string utterance_id;
  double frame_hop_ms = 10.0;
  double frame_offset_ms = 0.0;
  double utterance_span_ms = 0.0;
  std::vector<DocumentInterval> intervals;
  std::vector<Gap> gaps;
  std::optional<AlignConfig> config;

  std::vector<LabeledSpan> spans() const;
  bool operator==(const AlignmentDocument& o) const;
};

AlignmentDocument to_document(const Alignment& a, const PhonemeInventory& inventory,
                              const std::string& utterance_id,
                              const std::optional<AlignConfig>& config);

std::string write_document_json(const AlignmentDocument& doc);
AlignmentDocument read_document_json(std::istream& in);

/// Praat long-text TextGrid with one interval tier named "phones". Gaps and
/// edge silences become empty-text intervals; times are written in seconds.
std::string write_textgrid(const AlignmentDocument& doc);

/// Reads the first interval tier of a long-text TextGrid. Non-empty
/// intervals become document intervals; times are snapped to the 0.1 ms grid
/// so JSON -> TextGrid -> JSON keeps interval times bit-exact. Labels in
/// `ignore` (for example reference silence marks) are dropped.
AlignmentDocument read_textgrid(std::istream& in,
                                const std::vector<std::string>& ignore = {});

/// Targets file: JSON {"symbols": [...], "text": "...", "g2p_raw": "..."}.
struct TargetsFile {
  std::vector<std::string> symbols;
  std::string text;
  std::string g2p_raw;
};

std::string write_targets_json(const TargetsFile& t);
TargetsFile read_targets_json(std::istream& in);

/// Writes `content` to `path` through a temporary file and a rename.
void write_file_atomic(const std::string& path, const std::string& content);

std::string config_to_json(const AlignConfig& cfg);

}  // namespace ctcalign

#endif  // CTCALIGN_DOCUMENT_HPP
