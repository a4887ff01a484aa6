// tests/test_document.cpp
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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "ctcalign/document.hpp"
#include "ctcalign/errors.hpp"
#include "ctcalign/synth.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace ctcalign;

namespace {

AlignmentDocument sample_document() {
  AlignmentDocument d;
  d.utterance_id = "utt \"1\"";
  d.frame_hop_ms = 10.0;
  d.frame_offset_ms = 2.5;
  d.utterance_span_ms = 120.0;
  d.intervals = {{"p", 12.5, 42.5, -0.25, false},
                 {"q", 62.5, 82.5, -std::numeric_limits<double>::infinity(), true},
                 {"r", 82.5, 102.5, -1.0 / 3.0, false}};
  d.gaps = {{0, 20.0}};
  d.config = AlignConfig{};
  return d;
}

}  // namespace

TEST_SUITE("document") {

TEST_CASE("JSON round trip is exact, including -inf scores") {
  const auto d = sample_document();
  std::istringstream in(write_document_json(d));
  const auto back = read_document_json(in);
  CHECK(back == d);
  CHECK(std::isinf(back.intervals[1].score));
}

TEST_CASE("JSON carries the configuration echo") {
  AlignConfig cfg;
  cfg.boost_factor = 2.0;
  cfg.gap_tolerance_ms = 25.0;
  cfg.hierarchical = false;
  auto d = sample_document();
  d.config = cfg;
  const auto text = write_document_json(d);
  for (const char* key : {"\"beta\"", "\"floor\"", "\"boost\"", "\"enforce_completeness\"",
                          "\"hierarchical\"", "\"gap_tolerance_ms\"",
                          "\"silence_threshold\"", "\"silence_min_duration_ms\""})
    CHECK(text.find(key) != std::string::npos);
  std::istringstream in(text);
  const auto back = read_document_json(in);
  REQUIRE(back.config);
  CHECK(back.config->boost_factor == 2.0);
  CHECK(back.config->gap_tolerance_ms == 25.0);
  CHECK_FALSE(back.config->hierarchical);
}

TEST_CASE("TextGrid output parses as a Praat long-text file") {
  const auto d = sample_document();
  const auto g = testing::parse_praat_long(write_textgrid(d));
  CHECK(g.xmin == 0.0);
  CHECK(g.xmax == doctest::Approx(0.1225));
  REQUIRE(g.tiers.size() == 1);
  const auto& tier = g.tiers[0];
  CHECK(tier.cls == "IntervalTier");
  CHECK(tier.name == "phones");
  // leading edge, p, gap, q, r, trailing edge
  REQUIRE(tier.intervals.size() == 6);
  const char* texts[] = {"", "p", "", "q", "r", ""};
  for (int i = 0; i < 6; ++i) CHECK(tier.intervals[i].text == texts[i]);
  for (std::size_t i = 1; i < tier.intervals.size(); ++i)
    CHECK(tier.intervals[i].xmin == tier.intervals[i - 1].xmax);
  CHECK(tier.intervals[1].xmin == doctest::Approx(0.0125));
  CHECK(tier.intervals[3].xmax == doctest::Approx(0.0825));
}

TEST_CASE("JSON to TextGrid and back keeps interval times") {
  const auto d = sample_document();
  std::istringstream in(write_textgrid(d));
  const auto back = read_textgrid(in);
  REQUIRE(back.intervals.size() == d.intervals.size());
  for (std::size_t i = 0; i < d.intervals.size(); ++i) {
    CHECK(back.intervals[i].label == d.intervals[i].label);
    CHECK(back.intervals[i].start_ms == d.intervals[i].start_ms);
    CHECK(back.intervals[i].end_ms == d.intervals[i].end_ms);
  }
  CHECK(back.gaps == d.gaps);
}

TEST_CASE("TextGrid reader skips ignored labels and non-interval tiers") {
  const std::string text = R"(File type = "ooTextFile"
Object class = "TextGrid"

xmin = 0
xmax = 0.3
tiers? <exists>
size = 2
item []:
    item [1]:
        class = "TextTier"
        name = "marks"
        xmin = 0
        xmax = 0.3
        points: size = 1
        points [1]:
            number = 0.1
            mark = "x"
    item [2]:
        class = "IntervalTier"
        name = "phones"
        xmin = 0
        xmax = 0.3
        intervals: size = 3
        intervals [1]:
            xmin = 0
            xmax = 0.1
            text = "h#"
        intervals [2]:
            xmin = 0.1
            xmax = 0.2
            text = "aa"
        intervals [3]:
            xmin = 0.2
            xmax = 0.3
            text = "b"
)";
  std::istringstream in(text);
  const auto d = read_textgrid(in, {"h#"});
  REQUIRE(d.intervals.size() == 2);
  CHECK(d.intervals[0].label == "aa");
  CHECK(d.intervals[0].start_ms == 100.0);
  CHECK(d.intervals[1].end_ms == 300.0);
}

TEST_CASE("document from an alignment") {
  const auto inv = testing::toy_inventory();
  SynthScenario s;
  s.labels = {1, 2};
  s.durations = {3, 2};
  s.gaps_before = {0, 1};
  s.offset_tenths = 25;
  const auto r = generate(s, inv);
  const auto d = to_document(r.reference, inv, "u", std::nullopt);
  REQUIRE(d.intervals.size() == 2);
  CHECK(d.intervals[0].label == "p");
  CHECK(d.intervals[0].start_ms == 2.5);
  CHECK(d.intervals[1].start_ms == 42.5);
  CHECK(d.gaps == std::vector<Gap>{{0, 10.0}});
  CHECK(d.utterance_span_ms == 60.0);
}

TEST_CASE("targets file round trip") {
  TargetsFile t{{"k", "æ", "t", "."}, "cat.", "k_æ_t"};
  std::istringstream in(write_targets_json(t));
  const auto back = read_targets_json(in);
  CHECK(back.symbols == t.symbols);
  CHECK(back.text == t.text);
  CHECK(back.g2p_raw == t.g2p_raw);
}

TEST_CASE("atomic write replaces the file") {
  const auto dir = std::filesystem::temp_directory_path() / "ctcalign_doc_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "out.txt").string();
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  std::ifstream in(path);
  std::string content;
  std::getline(in, content);
  CHECK(content == "second");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
