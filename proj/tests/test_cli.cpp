// tests/test_cli.cpp
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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ctcalign/document.hpp"
#include "ctcalign/posterior.hpp"
#include "doctest.h"
#include "json.hpp"
#include "support.hpp"

using namespace ctcalign;
namespace fs = std::filesystem;

namespace {

const std::string kCli = CTCALIGN_CLI;

struct Workspace {
  fs::path dir;
  explicit Workspace(const std::string& name)
      : dir(fs::temp_directory_path() / ("ctcalign_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }
  std::string operator/(const std::string& f) const { return (dir / f).string(); }
};

int run(const std::string& args, const std::string& log = "/dev/null") {
  const std::string cmd = kCli + " " + args + " >" + log + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

AlignmentDocument load_doc(const std::string& path) {
  std::ifstream in(path);
  return read_document_json(in);
}

bool same_intervals(const AlignmentDocument& a, const AlignmentDocument& b) {
  if (a.intervals.size() != b.intervals.size()) return false;
  for (std::size_t i = 0; i < a.intervals.size(); ++i)
    if (a.intervals[i].label != b.intervals[i].label ||
        a.intervals[i].start_ms != b.intervals[i].start_ms ||
        a.intervals[i].end_ms != b.intervals[i].end_ms)
      return false;
  return a.gaps == b.gaps;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("synth then align reproduces the reference") {
  Workspace ws("recover");
  REQUIRE(run("synth --random --seed 5 --out-prefix " + (ws / "u")) == 0);
  REQUIRE(run("align --pgram " + (ws / "u.pgram") + " --targets " + (ws / "u.targets.json") +
              " --out " + (ws / "u.json")) == 0);
  const auto out = load_doc(ws / "u.json");
  CHECK(same_intervals(out, load_doc(ws / "u.ref.json")));
  REQUIRE(out.config);
  CHECK(out.config->boost_factor == 5.0);
  CHECK(out.utterance_id == "u");

  SUBCASE("repeated runs give identical bytes") {
    REQUIRE(run("align --pgram " + (ws / "u.pgram") + " --targets " +
                (ws / "u.targets.json") + " --out " + (ws / "again.json")) == 0);
    CHECK(slurp(ws / "u.json") == slurp(ws / "again.json"));
  }
  SUBCASE("boost and enforcement off change nothing on a clean fixture") {
    REQUIRE(run("align --no-boost --no-enforce --pgram " + (ws / "u.pgram") + " --targets " +
                (ws / "u.targets.json") + " --out " + (ws / "plain.json")) == 0);
    auto plain = load_doc(ws / "plain.json");
    CHECK(same_intervals(plain, out));
    for (std::size_t i = 0; i < out.intervals.size(); ++i)
      CHECK(plain.intervals[i].score == out.intervals[i].score);
  }
  SUBCASE("gap tolerance closes short gaps") {
    REQUIRE(run("align --gap-tolerance 25 --pgram " + (ws / "u.pgram") + " --targets " +
                (ws / "u.targets.json") + " --out " + (ws / "closed.json")) == 0);
    const auto closed = load_doc(ws / "closed.json");
    for (const auto& g : closed.gaps) CHECK(g.duration_ms >= 25.0);
    for (const auto& g : out.gaps)
      if (g.duration_ms < 25.0)
        CHECK(closed.intervals[g.after].end_ms == closed.intervals[g.after + 1].start_ms);
  }
  SUBCASE("TextGrid output") {
    REQUIRE(run("align --format textgrid --pgram " + (ws / "u.pgram") + " --targets " +
                (ws / "u.targets.json") + " --out " + (ws / "u.TextGrid")) == 0);
    const auto g = testing::parse_praat_long(slurp(ws / "u.TextGrid"));
    REQUIRE(g.tiers.size() == 1);
    CHECK(g.tiers[0].name == "phones");
  }
}

TEST_CASE("eval of a directory against itself is perfect") {
  Workspace ws("eval");
  fs::create_directories(ws / "ref");
  for (int seed : {1, 2, 3})
    REQUIRE(run("synth --random --seed " + std::to_string(seed) + " --out-prefix " +
                (ws / ("s" + std::to_string(seed)))) == 0);
  for (int seed : {1, 2, 3}) {
    const auto id = "s" + std::to_string(seed);
    fs::copy_file(ws / (id + ".ref.json"), ws / ("ref/" + id + ".json"));
  }
  REQUIRE(run("eval --pred " + (ws / "ref") + " --ref " + (ws / "ref") + " --out-dir " +
              (ws / "report")) == 0);
  const auto report = nlohmann::json::parse(slurp(ws / "report/report.json"));
  for (const auto& [tol, value] : report.at("recall_at").items()) CHECK(value.get<double>() == 100.0);
  CHECK(report.at("recall_at").size() == 3);
  CHECK(fs::exists(ws / "report/report.txt"));
  CHECK(slurp(ws / "report/histogram.csv").rfind("bin_start_ms,count\n", 0) == 0);

  fs::create_directories(ws / "pred");
  fs::copy_file(ws / "ref/s1.json", ws / "pred/s1.json");
  CHECK(run("eval --pred " + (ws / "pred") + " --ref " + (ws / "ref"), ws / "log.txt") == 2);
  CHECK(slurp(ws / "log.txt").find("s2") != std::string::npos);
}

TEST_CASE("batch alignment matches single runs") {
  Workspace ws("batch");
  std::ofstream manifest(ws / "list.txt");
  manifest << "# id posteriorgram targets\n";
  for (int i = 0; i < 6; ++i) {
    const auto id = "b" + std::to_string(i);
    REQUIRE(run("synth --random --peak 0.8 --seed " + std::to_string(10 + i) +
                " --out-prefix " + (ws / id)) == 0);
    manifest << id << ' ' << id << ".pgram " << id << ".targets.json\n";
  }
  manifest.close();
  REQUIRE(run("align --manifest " + (ws / "list.txt") + " --out-dir " + (ws / "out") +
              " --jobs 4") == 0);
  for (int i = 0; i < 6; ++i) {
    const auto id = "b" + std::to_string(i);
    REQUIRE(run("align --pgram " + (ws / (id + ".pgram")) + " --targets " +
                (ws / (id + ".targets.json")) + " --id " + id + " --out " +
                (ws / (id + ".single.json"))) == 0);
    CHECK(slurp(ws / ("out/" + id + ".json")) == slurp(ws / (id + ".single.json")));
  }
}

TEST_CASE("exit codes") {
  Workspace ws("codes");
  REQUIRE(run("synth --random --seed 2 --out-prefix " + (ws / "u")) == 0);
  CHECK(run("align --pgram " + (ws / "missing.pgram") + " --ipa 'a b'") == 2);
  CHECK(run("align --bogus-flag") == 2);
  CHECK(run("align --pgram " + (ws / "u.pgram") + " --ipa 'k ʘ'") == 2);

  std::string many;
  for (int i = 0; i < 400; ++i) many += (i % 2 ? "a " : "i ");
  CHECK(run("align --pgram " + (ws / "u.pgram") + " --ipa '" + many + "'", ws / "log.txt") == 3);
  CHECK(slurp(ws / "log.txt").find("infeasible") != std::string::npos);

  const std::string env = std::string("ESPEAK_NG_PATH") + "=" + (ws / "nope");
  const int status = std::system((env + " " + kCli + " g2p --text hi >/dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(status) == 4);
}

TEST_CASE("g2p writes a targets file through a stub") {
  Workspace ws("g2p");
  const auto stub = ws / "espeak";
  {
    std::ofstream out(stub);
    out << "#!/bin/sh\nprintf 'k_\\303\\246_t\\n'\n";
  }
  fs::permissions(stub, fs::perms::owner_all);
  const std::string cmd = std::string("ESPEAK_NG_PATH") + "=" + stub + " " + kCli +
                          " g2p --text 'cat.' --out " + (ws / "t.json") + " >/dev/null 2>&1";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  std::ifstream in(ws / "t.json");
  const auto t = read_targets_json(in);
  CHECK(t.symbols == std::vector<std::string>{"k", "æ", "t", "."});
}

TEST_CASE("bench reports a median and a real-time factor") {
  Workspace ws("bench");
  REQUIRE(run("bench --frames 310 --phonemes 40 --reps 5", ws / "log.txt") == 0);
  const auto log = slurp(ws / "log.txt");
  CHECK(log.find("median ms/utt") != std::string::npos);
  CHECK(log.find("RTF") != std::string::npos);
  CHECK(run("bench --reps 2") == 2);
}

}  // TEST_SUITE
