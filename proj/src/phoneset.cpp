// src/phoneset.cpp
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

#include "ctcalign/phoneset.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include "ctcalign/errors.hpp"

namespace ctcalign {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

// Decodes one code point starting at text[i]; returns its byte length.
std::size_t codepoint_at(std::string_view text, std::size_t i, char32_t* cp) {
  const auto c = static_cast<unsigned char>(text[i]);
  std::size_t len = 1;
  char32_t value = c;
  if (c >= 0xF0) {
    len = 4;
    value = c & 0x07;
  } else if (c >= 0xE0) {
    len = 3;
    value = c & 0x0F;
  } else if (c >= 0xC0) {
    len = 2;
    value = c & 0x1F;
  }
  if (i + len > text.size()) throw InputError("truncated UTF-8 sequence");
  for (std::size_t k = 1; k < len; ++k)
    value = (value << 6) | (static_cast<unsigned char>(text[i + k]) & 0x3F);
  *cp = value;
  return len;
}

// Spacing modifier letters (length, stress, aspiration, palatalization ...)
// and combining diacritics.
bool is_strippable(char32_t cp) {
  return (cp >= 0x02B0 && cp <= 0x02FF) || (cp >= 0x0300 && cp <= 0x036F);
}

std::string strip_diacritics(std::string_view symbol) {
  std::string out;
  for (std::size_t i = 0; i < symbol.size();) {
    char32_t cp = 0;
    const auto len = codepoint_at(symbol, i, &cp);
    if (!is_strippable(cp)) out.append(symbol.substr(i, len));
    i += len;
  }
  return out;
}

}  // namespace

std::vector<std::string> utf8_codepoints(std::string_view text) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < text.size();) {
    char32_t cp = 0;
    const auto len = codepoint_at(text, i, &cp);
    out.emplace_back(text.substr(i, len));
    i += len;
  }
  return out;
}

std::set<std::string> default_pause_symbols() {
  return {".", ",", ";", ":", "!", "?", "—", "…"};
}

PhonemeInventory::PhonemeInventory(std::vector<std::string> phonemes,
                                   std::vector<std::string> groups,
                                   std::vector<int> group_of, int silence_id,
                                   std::map<std::string, int> ipa_map,
                                   std::set<std::string> pause_symbols,
                                   bool permissive)
    : phonemes_(std::move(phonemes)),
      groups_(std::move(groups)),
      group_of_(std::move(group_of)),
      silence_id_(silence_id),
      ipa_map_(std::move(ipa_map)),
      pause_symbols_(std::move(pause_symbols)) {
  if (phonemes_.empty() || groups_.empty())
    throw InputError("inventory needs at least one phoneme and one group");
  if (!permissive && (num_phonemes() != kDefaultPhonemeCount ||
                      num_groups() != kDefaultGroupCount)) {
    throw InputError("inventory has " + std::to_string(num_phonemes()) +
                     " phonemes and " + std::to_string(num_groups()) +
                     " groups; expected 67 and 17 (use the permissive flag "
                     "for other inventories)");
  }
  for (int i = 0; i < num_phonemes(); ++i) {
    if (!label_index_.emplace(phonemes_[i], i).second)
      throw InputError("duplicate phoneme label '" + phonemes_[i] + "'");
  }
  std::set<std::string> seen_groups;
  for (const auto& g : groups_) {
    if (!seen_groups.insert(g).second)
      throw InputError("duplicate group label '" + g + "'");
  }
  if (group_of_.size() != phonemes_.size())
    throw InputError("group map is not total over phonemes");
  for (int i = 0; i < num_phonemes(); ++i) {
    if (group_of_[i] < 0 || group_of_[i] >= num_groups())
      throw InputError("phoneme '" + phonemes_[i] + "' has no group");
  }
  if (silence_id_ < 0 || silence_id_ >= num_phonemes())
    throw InputError("silence class is not a valid phoneme index");
  for (const auto& [symbol, index] : ipa_map_) {
    if (index < 0 || index >= num_phonemes())
      throw InputError("IPA symbol '" + symbol + "' maps outside inventory");
  }
}

const std::string& PhonemeInventory::phoneme_label(int index) const {
  if (index == blank_id()) {
    static const std::string kBlank = "<blank>";
    return kBlank;
  }
  return phonemes_.at(static_cast<std::size_t>(index));
}

const std::string& PhonemeInventory::group_label(int index) const {
  return groups_.at(static_cast<std::size_t>(index));
}

int PhonemeInventory::group_of(int phoneme) const {
  return group_of_.at(static_cast<std::size_t>(phoneme));
}

std::optional<int> PhonemeInventory::find_phoneme(
    std::string_view label) const {
  const auto it = label_index_.find(label);
  if (it == label_index_.end()) return std::nullopt;
  return it->second;
}

bool PhonemeInventory::is_pause(std::string_view symbol) const {
  return pause_symbols_.count(std::string(symbol)) > 0;
}

std::optional<int> PhonemeInventory::resolve_ipa(
    std::string_view symbol) const {
  if (auto it = ipa_map_.find(std::string(symbol)); it != ipa_map_.end())
    return it->second;
  const auto base = strip_diacritics(symbol);
  if (base.empty()) return std::nullopt;
  if (auto it = ipa_map_.find(base); it != ipa_map_.end()) return it->second;
  return std::nullopt;
}

PhonemeInventory load_inventory(std::istream& in, bool permissive) {
  enum class Section { kNone, kPhonemes, kGroups, kGroupMap, kIpaMap,
                       kSpecial, kPauses };
  Section section = Section::kNone;
  std::vector<std::string> phonemes, groups;
  std::vector<std::pair<std::string, std::string>> group_pairs, ipa_pairs;
  std::optional<std::string> silence_label;
  std::optional<std::set<std::string>> pauses;
  int line_no = 0;

  auto fail = [&](const std::string& msg) {
    throw InputError("inventory line " + std::to_string(line_no) + ": " + msg);
  };

  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      const auto name = line.substr(1, line.size() - 2);
      if (name == "PHONEMES") section = Section::kPhonemes;
      else if (name == "GROUPS") section = Section::kGroups;
      else if (name == "GROUPMAP") section = Section::kGroupMap;
      else if (name == "IPAMAP") section = Section::kIpaMap;
      else if (name == "SPECIAL") section = Section::kSpecial;
      else if (name == "PAUSES") { section = Section::kPauses; pauses.emplace(); }
      else fail("unknown section [" + name + "]");
      continue;
    }
    const auto fields = split_ws(line);
    switch (section) {
      case Section::kNone:
        if (fields.size() == 2 && fields[0] == "VERSION") {
          if (fields[1] != "1") fail("unsupported version " + fields[1]);
          break;
        }
        fail("content outside a section");
        break;
      case Section::kPhonemes:
        if (fields.size() != 1) fail("expected one phoneme label");
        phonemes.push_back(fields[0]);
        break;
      case Section::kGroups:
        if (fields.size() != 1) fail("expected one group label");
        groups.push_back(fields[0]);
        break;
      case Section::kGroupMap:
        if (fields.size() != 2) fail("expected '<phoneme> <group>'");
        group_pairs.emplace_back(fields[0], fields[1]);
        break;
      case Section::kIpaMap:
        if (fields.size() != 2) fail("expected '<ipa> <phoneme>'");
        ipa_pairs.emplace_back(fields[0], fields[1]);
        break;
      case Section::kSpecial:
        if (fields.size() != 2) fail("expected '<key> <value>'");
        if (fields[0] == "silence") silence_label = fields[1];
        else if (fields[0] != "blank") fail("unknown special key " + fields[0]);
        break;
      case Section::kPauses:
        for (const auto& f : fields) pauses->insert(f);
        break;
    }
  }

  std::map<std::string, int> phoneme_index, group_index;
  for (int i = 0; i < static_cast<int>(phonemes.size()); ++i)
    if (!phoneme_index.emplace(phonemes[i], i).second)
      throw InputError("duplicate phoneme label '" + phonemes[i] + "'");
  for (int i = 0; i < static_cast<int>(groups.size()); ++i)
    group_index.emplace(groups[i], i);

  std::vector<int> group_of(phonemes.size(), -1);
  for (const auto& [ph, grp] : group_pairs) {
    const auto p = phoneme_index.find(ph);
    const auto g = group_index.find(grp);
    if (p == phoneme_index.end())
      throw InputError("group map names unknown phoneme '" + ph + "'");
    if (g == group_index.end())
      throw InputError("group map names unknown group '" + grp + "'");
    if (group_of[p->second] != -1)
      throw InputError("phoneme '" + ph + "' assigned to two groups");
    group_of[p->second] = g->second;
  }
  for (std::size_t i = 0; i < phonemes.size(); ++i)
    if (group_of[i] == -1)
      throw InputError("missing group assignment for phoneme '" +
                       phonemes[i] + "'");

  std::map<std::string, int> ipa_map;
  for (const auto& [sym, ph] : ipa_pairs) {
    const auto p = phoneme_index.find(ph);
    if (p == phoneme_index.end())
      throw InputError("IPA map names unknown phoneme '" + ph + "'");
    const auto [it, inserted] = ipa_map.emplace(sym, p->second);
    if (!inserted && it->second != p->second)
      throw InputError("IPA symbol '" + sym + "' maps to two phonemes");
  }

  if (!silence_label) throw InputError("inventory lacks a silence designation");
  const auto sil = phoneme_index.find(*silence_label);
  if (sil == phoneme_index.end())
    throw InputError("silence label '" + *silence_label + "' is not a phoneme");

  return PhonemeInventory(std::move(phonemes), std::move(groups),
                          std::move(group_of), sil->second, std::move(ipa_map),
                          pauses ? *pauses : default_pause_symbols(),
                          permissive);
}

PhonemeInventory load_inventory_file(const std::string& path,
                                     bool permissive) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open inventory '" + path + "'");
  return load_inventory(in, permissive);
}

std::vector<int> TargetSequence::phonemes() const {
  std::vector<int> out;
  for (const auto& t : items)
    if (t.is_phoneme()) out.push_back(t.phoneme);
  return out;
}

std::size_t TargetSequence::num_phonemes() const {
  std::size_t n = 0;
  for (const auto& t : items) n += t.is_phoneme() ? 1 : 0;
  return n;
}

std::vector<std::vector<int>> TargetSequence::chunks() const {
  std::vector<std::vector<int>> out(1);
  for (const auto& t : items) {
    if (t.is_phoneme()) {
      out.back().push_back(t.phoneme);
    } else if (!out.back().empty()) {
      out.emplace_back();
    }
  }
  if (out.back().empty()) out.pop_back();
  return out;
}

void validate_targets(const TargetSequence& targets,
                      const PhonemeInventory& inventory) {
  if (targets.num_phonemes() == 0)
    throw InputError("target sequence contains no phonemes");
  for (const auto& t : targets.items) {
    if (!t.is_phoneme()) continue;
    if (t.phoneme < 0 || t.phoneme >= inventory.num_phonemes())
      throw InputError("target phoneme index " + std::to_string(t.phoneme) +
                       " is not a regular phoneme");
  }
}

TargetSequence map_ipa(const PhonemeInventory& inventory,
                       const std::vector<std::string>& symbols, MapMode mode,
                       std::vector<std::string>* warnings) {
  TargetSequence out;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const auto& sym = symbols[i];
    if (inventory.is_pause(sym)) {
      out.items.push_back(TargetToken::Silence());
      continue;
    }
    if (const auto idx = inventory.resolve_ipa(sym)) {
      out.items.push_back(TargetToken::Phoneme(*idx));
      continue;
    }
    if (const auto idx = inventory.find_phoneme(sym)) {
      out.items.push_back(TargetToken::Phoneme(*idx));
      continue;
    }
    const auto msg = "unknown IPA symbol '" + sym + "' at position " +
                     std::to_string(i + 1);
    if (mode == MapMode::kStrict) throw InputError(msg);
    if (warnings) warnings->push_back(msg);
  }
  return out;
}

}  // namespace ctcalign
