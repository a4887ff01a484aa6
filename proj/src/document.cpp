// src/document.cpp
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

#include "ctcalign/document.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace ctcalign {

namespace {

using json = nlohmann::ordered_json;

json score_json(double v) {
  if (std::isfinite(v)) return v;
  return v < 0 ? json("-inf") : json(nullptr);
}

double score_from(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string() && v.get<std::string>() == "-inf")
    return -std::numeric_limits<double>::infinity();
  throw InputError("bad interval score");
}

json config_json(const AlignConfig& c) {
  return {{"beta", c.boost_factor},
          {"floor", c.floor},
          {"boost", c.boost_enabled},
          {"enforce_completeness", c.enforce_completeness},
          {"hierarchical", c.hierarchical},
          {"gap_tolerance_ms", c.gap_tolerance_ms},
          {"silence_threshold", c.silence_threshold},
          {"silence_min_duration_ms", c.silence_min_duration_ms}};
}

AlignConfig config_from(const json& j) {
  AlignConfig c;
  c.boost_factor = j.at("beta").get<double>();
  c.floor = j.at("floor").get<double>();
  c.boost_enabled = j.at("boost").get<bool>();
  c.enforce_completeness = j.at("enforce_completeness").get<bool>();
  c.hierarchical = j.at("hierarchical").get<bool>();
  c.gap_tolerance_ms = j.at("gap_tolerance_ms").get<double>();
  c.silence_threshold = j.at("silence_threshold").get<double>();
  c.silence_min_duration_ms = j.at("silence_min_duration_ms").get<double>();
  return c;
}

bool same_config(const AlignConfig& a, const AlignConfig& b) {
  return a.boost_factor == b.boost_factor && a.floor == b.floor &&
         a.boost_enabled == b.boost_enabled &&
         a.enforce_completeness == b.enforce_completeness &&
         a.hierarchical == b.hierarchical &&
         a.gap_tolerance_ms == b.gap_tolerance_ms &&
         a.silence_threshold == b.silence_threshold &&
         a.silence_min_duration_ms == b.silence_min_duration_ms;
}

std::string seconds(double ms) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, ms / 1000.0);
  return std::string(buf, r.ptr);
}

double snap_ms(double sec) { return static_cast<double>(std::llround(sec * 10000.0)) / 10.0; }

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    out += c;
    if (c == '"') out += '"';
  }
  return out + "\"";
}

std::vector<Gap> derive_gaps(const std::vector<DocumentInterval>& ivs) {
  std::vector<Gap> gaps;
  for (std::size_t i = 1; i < ivs.size(); ++i) {
    const double g = ivs[i].start_ms - ivs[i - 1].end_ms;
    if (g > 0.0) gaps.push_back({i - 1, g});
  }
  return gaps;
}

}  // namespace

std::vector<LabeledSpan> AlignmentDocument::spans() const {
  std::vector<LabeledSpan> out;
  out.reserve(intervals.size());
  for (const auto& iv : intervals) out.push_back({iv.label, iv.start_ms, iv.end_ms});
  return out;
}

bool AlignmentDocument::operator==(const AlignmentDocument& o) const {
  if (config.has_value() != o.config.has_value()) return false;
  if (config && !same_config(*config, *o.config)) return false;
  return utterance_id == o.utterance_id && frame_hop_ms == o.frame_hop_ms &&
         frame_offset_ms == o.frame_offset_ms &&
         utterance_span_ms == o.utterance_span_ms && intervals == o.intervals &&
         gaps == o.gaps;
}

AlignmentDocument to_document(const Alignment& a, const PhonemeInventory& inventory,
                              const std::string& utterance_id,
                              const std::optional<AlignConfig>& config) {
  AlignmentDocument doc;
  doc.utterance_id = utterance_id;
  doc.frame_hop_ms = static_cast<double>(a.hop_tenths) / 10.0;
  doc.frame_offset_ms = static_cast<double>(a.offset_tenths) / 10.0;
  doc.utterance_span_ms = a.utterance_span_ms();
  for (const auto& iv : a.intervals)
    doc.intervals.push_back({inventory.phoneme_label(iv.label), iv.start_ms,
                             iv.end_ms, iv.score, iv.inserted});
  doc.gaps = a.gaps;
  doc.config = config;
  return doc;
}

std::string config_to_json(const AlignConfig& cfg) { return config_json(cfg).dump(); }

std::string write_document_json(const AlignmentDocument& doc) {
  json intervals = json::array();
  for (const auto& iv : doc.intervals)
    intervals.push_back({{"label", iv.label},
                         {"start_ms", iv.start_ms},
                         {"end_ms", iv.end_ms},
                         {"score", score_json(iv.score)},
                         {"inserted", iv.inserted}});
  json gaps = json::array();
  for (const auto& g : doc.gaps)
    gaps.push_back({{"after", g.after}, {"duration_ms", g.duration_ms}});
  json j;
  j["utterance_id"] = doc.utterance_id;
  j["frame_hop_ms"] = doc.frame_hop_ms;
  j["frame_offset_ms"] = doc.frame_offset_ms;
  j["utterance_span_ms"] = doc.utterance_span_ms;
  j["intervals"] = std::move(intervals);
  j["gaps"] = std::move(gaps);
  j["config"] = doc.config ? config_json(*doc.config) : json(nullptr);
  return j.dump(2) + "\n";
}

AlignmentDocument read_document_json(std::istream& in) {
  try {
    const auto j = json::parse(in);
    AlignmentDocument doc;
    doc.utterance_id = j.value("utterance_id", std::string());
    doc.frame_hop_ms = j.value("frame_hop_ms", 10.0);
    doc.frame_offset_ms = j.value("frame_offset_ms", 0.0);
    doc.utterance_span_ms = j.value("utterance_span_ms", 0.0);
    for (const auto& iv : j.at("intervals")) {
      DocumentInterval d;
      d.label = iv.at("label").get<std::string>();
      d.start_ms = iv.at("start_ms").get<double>();
      d.end_ms = iv.at("end_ms").get<double>();
      d.score = iv.contains("score") ? score_from(iv.at("score")) : 0.0;
      d.inserted = iv.value("inserted", false);
      if (!(d.start_ms < d.end_ms))
        throw InputError("interval '" + d.label + "' has start >= end");
      doc.intervals.push_back(std::move(d));
    }
    if (j.contains("gaps")) {
      for (const auto& g : j.at("gaps"))
        doc.gaps.push_back({g.at("after").get<std::size_t>(),
                            g.at("duration_ms").get<double>()});
    } else {
      doc.gaps = derive_gaps(doc.intervals);
    }
    if (j.contains("config") && !j.at("config").is_null())
      doc.config = config_from(j.at("config"));
    return doc;
  } catch (const json::exception& e) {
    throw InputError(std::string("alignment JSON: ") + e.what());
  }
}

std::string write_textgrid(const AlignmentDocument& doc) {
  struct Cell {
    double start, end;
    std::string text;
  };
  const double xmin = 0.0;
  double xmax = doc.frame_offset_ms + doc.utterance_span_ms;
  if (!doc.intervals.empty()) xmax = std::max(xmax, doc.intervals.back().end_ms);
  std::vector<Cell> cells;
  double cursor = xmin;
  for (const auto& iv : doc.intervals) {
    if (iv.start_ms > cursor) cells.push_back({cursor, iv.start_ms, ""});
    cells.push_back({iv.start_ms, iv.end_ms, iv.label});
    cursor = iv.end_ms;
  }
  if (xmax > cursor) cells.push_back({cursor, xmax, ""});

  std::ostringstream os;
  os << "File type = \"ooTextFile\"\n"
     << "Object class = \"TextGrid\"\n\n"
     << "xmin = " << seconds(xmin) << " \n"
     << "xmax = " << seconds(xmax) << " \n"
     << "tiers? <exists> \n"
     << "size = 1 \n"
     << "item []: \n"
     << "    item [1]:\n"
     << "        class = \"IntervalTier\" \n"
     << "        name = \"phones\" \n"
     << "        xmin = " << seconds(xmin) << " \n"
     << "        xmax = " << seconds(xmax) << " \n"
     << "        intervals: size = " << cells.size() << " \n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    os << "        intervals [" << i + 1 << "]:\n"
       << "            xmin = " << seconds(cells[i].start) << " \n"
       << "            xmax = " << seconds(cells[i].end) << " \n"
       << "            text = " << quote(cells[i].text) << " \n";
  }
  return os.str();
}

AlignmentDocument read_textgrid(std::istream& in,
                                const std::vector<std::string>& ignore) {
  AlignmentDocument doc;
  bool in_interval_tier = false, tier_done = false, seen_tier = false;
  double cur_min = 0.0, cur_max = 0.0, tier_max = 0.0;
  bool have_min = false, have_max = false;
  int line_no = 0;

  auto unquote = [&](const std::string& v) {
    const auto first = v.find('"');
    const auto last = v.rfind('"');
    if (first == std::string::npos || last == first)
      throw InputError("TextGrid line " + std::to_string(line_no) + ": expected a string");
    std::string out;
    for (std::size_t i = first + 1; i < last; ++i) {
      out += v[i];
      if (v[i] == '"' && i + 1 < last && v[i + 1] == '"') ++i;
    }
    return out;
  };
  auto number = [&](const std::string& v) {
    try {
      return std::stod(v);
    } catch (const std::exception&) {
      throw InputError("TextGrid line " + std::to_string(line_no) + ": expected a number");
    }
  };

  bool header_ok = false;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find("Object class") != std::string::npos) {
      if (line.find("TextGrid") == std::string::npos)
        throw InputError("not a TextGrid object");
      header_ok = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find("intervals [") != std::string::npos) have_min = have_max = false;
      continue;
    }
    auto key = line.substr(0, eq);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    const auto value = line.substr(eq + 1);
    if (key == "class") {
      if (seen_tier && in_interval_tier) tier_done = true;
      in_interval_tier = !tier_done && unquote(value) == "IntervalTier";
      seen_tier = true;
      have_min = have_max = false;
    } else if (!in_interval_tier || tier_done) {
      continue;
    } else if (key == "xmin") {
      cur_min = number(value);
      have_min = true;
    } else if (key == "xmax") {
      cur_max = number(value);
      if (!have_min) continue;
      have_max = true;
      tier_max = std::max(tier_max, cur_max);
    } else if (key == "text" && have_min && have_max) {
      const auto text = unquote(value);
      const bool skip = text.find_first_not_of(" \t") == std::string::npos ||
                        std::find(ignore.begin(), ignore.end(), text) != ignore.end();
      if (!skip) {
        DocumentInterval iv;
        iv.label = text;
        iv.start_ms = snap_ms(cur_min);
        iv.end_ms = snap_ms(cur_max);
        doc.intervals.push_back(std::move(iv));
      }
      have_min = have_max = false;
    }
  }
  if (!header_ok) throw InputError("missing TextGrid header");
  if (!seen_tier) throw InputError("TextGrid has no interval tier");
  doc.utterance_span_ms = snap_ms(tier_max);
  doc.frame_hop_ms = 0.0;
  doc.gaps = derive_gaps(doc.intervals);
  return doc;
}

std::string write_targets_json(const TargetsFile& t) {
  json j;
  j["symbols"] = t.symbols;
  if (!t.text.empty()) j["text"] = t.text;
  if (!t.g2p_raw.empty()) j["g2p_raw"] = t.g2p_raw;
  return j.dump(2) + "\n";
}

TargetsFile read_targets_json(std::istream& in) {
  try {
    const auto j = json::parse(in);
    TargetsFile t;
    t.symbols = j.at("symbols").get<std::vector<std::string>>();
    t.text = j.value("text", std::string());
    t.g2p_raw = j.value("g2p_raw", std::string());
    return t;
  } catch (const json::exception& e) {
    throw InputError(std::string("targets JSON: ") + e.what());
  }
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const auto tmp = path + ".tmp";
  if (const auto dir = std::filesystem::path(path).parent_path(); !dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
  }
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot create '" + tmp + "'");
    out << content;
    out.flush();
    if (!out) throw InputError("failed writing '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw InputError("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

}  // namespace ctcalign
