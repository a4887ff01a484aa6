// ctcalign/phoneset.hpp
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

#ifndef CTCALIGN_PHONESET_HPP
#define CTCALIGN_PHONESET_HPP

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ctcalign {

inline constexpr int kDefaultPhonemeCount = 67;
inline constexpr int kDefaultGroupCount = 17;

/// Phoneme and phoneme-group inventories of the dual-head acoustic model.
///
/// Each head has its CTC blank appended after the regular classes, so the
/// phoneme head has `num_phonemes() + 1` classes and the group head has
/// `num_groups() + 1`. The silence class is a regular phoneme.
///
/// Immutable after construction; share freely between threads.
class PhonemeInventory {
 public:
  /// Builds and validates an inventory. Throws InputError on duplicate
  /// labels, a missing group assignment, IPA entries naming unknown
  /// phonemes, or (unless `permissive`) counts other than 67/17.
  PhonemeInventory(std::vector<std::string> phonemes,
                   std::vector<std::string> groups,
                   std::vector<int> group_of, int silence_id,
                   std::map<std::string, int> ipa_map,
                   std::set<std::string> pause_symbols, bool permissive = false);

  int num_phonemes() const { return static_cast<int>(phonemes_.size()); }
  int num_groups() const { return static_cast<int>(groups_.size()); }
  /// Class count of the phoneme head (phonemes + blank).
  int phoneme_head_size() const { return num_phonemes() + 1; }
  int group_head_size() const { return num_groups() + 1; }

  int blank_id() const { return num_phonemes(); }
  int group_blank_id() const { return num_groups(); }
  int silence_id() const { return silence_id_; }

  const std::string& phoneme_label(int index) const;
  const std::string& group_label(int index) const;
  int group_of(int phoneme) const;
  std::optional<int> find_phoneme(std::string_view label) const;

  const std::vector<std::string>& phonemes() const { return phonemes_; }
  const std::vector<std::string>& groups() const { return groups_; }
  const std::map<std::string, int>& ipa_map() const { return ipa_map_; }
  const std::set<std::string>& pause_symbols() const { return pause_symbols_; }
  bool is_pause(std::string_view symbol) const;

  /// Resolves an IPA symbol: exact entry, then the symbol with diacritics,
  /// length marks and stress marks stripped. Empty when neither resolves.
  std::optional<int> resolve_ipa(std::string_view symbol) const;

 private:
  std::vector<std::string> phonemes_;
  std::vector<std::string> groups_;
  std::vector<int> group_of_;
  int silence_id_;
  std::map<std::string, int> ipa_map_;
  std::set<std::string> pause_symbols_;
  std::map<std::string, int, std::less<>> label_index_;
};

/// Default punctuation treated as a silence marker.
std::set<std::string> default_pause_symbols();

/// Parses the line-oriented inventory document (see data/inventory/README.md).
PhonemeInventory load_inventory(std::istream& in, bool permissive = false);
PhonemeInventory load_inventory_file(const std::string& path,
                                     bool permissive = false);

/// One element of a target transcription.
struct TargetToken {
  enum class Kind { kPhoneme, kSilence };
  Kind kind = Kind::kPhoneme;
  int phoneme = -1;  // valid only for kPhoneme

  static TargetToken Phoneme(int index) { return {Kind::kPhoneme, index}; }
  static TargetToken Silence() { return {Kind::kSilence, -1}; }
  bool is_phoneme() const { return kind == Kind::kPhoneme; }
  bool operator==(const TargetToken&) const = default;
};

/// Target transcription: phonemes interleaved with silence markers.
struct TargetSequence {
  std::vector<TargetToken> items;
  std::string source_text;

  /// Phoneme indices only, in order.
  std::vector<int> phonemes() const;
  /// Phoneme runs separated by silence markers. Leading and trailing markers
  /// are ignored and consecutive markers collapse, so no chunk is empty.
  std::vector<std::vector<int>> chunks() const;
  std::size_t num_phonemes() const;
};

/// Checks the TargetSequence invariants against an inventory: at least one
/// phoneme, every index a regular phoneme (never the blank).
void validate_targets(const TargetSequence& targets,
                      const PhonemeInventory& inventory);

enum class MapMode { kStrict, kLenient };

/// Maps IPA symbols (and pause punctuation) onto a target sequence. A
/// symbol that is not an IPA entry may also name an inventory label.
/// Strict mode throws InputError naming the first unknown symbol and its
/// 1-based position; lenient mode skips it and appends to `warnings`.
TargetSequence map_ipa(const PhonemeInventory& inventory,
                       const std::vector<std::string>& symbols,
                       MapMode mode = MapMode::kStrict,
                       std::vector<std::string>* warnings = nullptr);

/// Splits a UTF-8 string into code points.
std::vector<std::string> utf8_codepoints(std::string_view text);

}  // namespace ctcalign

#endif  // CTCALIGN_PHONESET_HPP
