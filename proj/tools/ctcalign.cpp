// tools/ctcalign.cpp
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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ctcalign/document.hpp"
#include "ctcalign/errors.hpp"
#include "ctcalign/g2p.hpp"
#include "ctcalign/metrics.hpp"
#include "ctcalign/phoneset.hpp"
#include "ctcalign/pipeline.hpp"
#include "ctcalign/posterior.hpp"
#include "ctcalign/synth.hpp"

namespace fs = std::filesystem;
using namespace ctcalign;

namespace {

enum ExitCode { kOk = 0, kInputError = 2, kInfeasible = 3, kExternalError = 4 };

#ifndef CTCALIGN_DEFAULT_INVENTORY
#define CTCALIGN_DEFAULT_INVENTORY "data/inventory/ph67.inv"
#endif

struct InventoryFlags {
  std::string path = CTCALIGN_DEFAULT_INVENTORY;
  bool permissive = false;

  void add_to(CLI::App* app) {
    app->add_option("--inventory", path, "Phoneme inventory file")->capture_default_str();
    app->add_flag("--permissive", permissive,
                  "Accept inventories whose class counts differ from 67/17");
  }
  PhonemeInventory load() const { return load_inventory_file(path, permissive); }
};

struct ConfigFlags {
  AlignConfig cfg;
  bool no_boost = false, no_enforce = false, no_hierarchical = false;

  void add_to(CLI::App* app) {
    app->add_option("--beta", cfg.boost_factor, "Target boost factor")->capture_default_str();
    app->add_option("--floor", cfg.floor, "Probability floor on target classes")
        ->capture_default_str();
    app->add_flag("--no-boost", no_boost, "Disable the target boost");
    app->add_flag("--no-enforce", no_enforce, "Disable completeness enforcement");
    app->add_flag("--no-hierarchical", no_hierarchical,
                  "Decode globally instead of splitting at silences");
    app->add_option("--gap-tolerance", cfg.gap_tolerance_ms,
                    "Close gaps shorter than MS milliseconds")
        ->capture_default_str();
    app->add_option("--silence-threshold", cfg.silence_threshold,
                    "Silence probability threshold")
        ->capture_default_str();
    app->add_option("--silence-min-dur", cfg.silence_min_duration_ms,
                    "Minimum silence duration in ms")
        ->capture_default_str();
  }
  AlignConfig get() const {
    AlignConfig c = cfg;
    c.boost_enabled = !no_boost;
    c.enforce_completeness = !no_enforce;
    c.hierarchical = !no_hierarchical;
    return c;
  }
};

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

TargetsFile load_targets(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_targets_json(in);
}

// Per-phoneme symbol that map_ipa resolves back to the same phoneme.
std::string symbol_for(int phoneme, const PhonemeInventory& inv) {
  for (const auto& [ipa, idx] : inv.ipa_map())
    if (idx == phoneme) return ipa;
  return inv.phoneme_label(phoneme);
}

TargetsFile targets_file_for(const TargetSequence& targets, const PhonemeInventory& inv) {
  TargetsFile t;
  const std::string pause =
      inv.pause_symbols().count(".") ? "." : *inv.pause_symbols().begin();
  for (const auto& tok : targets.items)
    t.symbols.push_back(tok.is_phoneme() ? symbol_for(tok.phoneme, inv) : pause);
  t.text = targets.source_text;
  return t;
}

int report_error(const std::string& context, const std::exception_ptr& ep) {
  const std::string prefix = context.empty() ? "" : context + ": ";
  try {
    std::rethrow_exception(ep);
  } catch (const InfeasibleAlignment& e) {
    std::cerr << prefix << "infeasible alignment: " << e.what();
    if (e.frame() >= 0) std::cerr << " (frame " << e.frame() << ")";
    std::cerr << "\n";
    return kInfeasible;
  } catch (const ExternalToolError& e) {
    std::cerr << prefix << e.what() << "\n";
    return kExternalError;
  } catch (const InputError& e) {
    std::cerr << prefix << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << prefix << e.what() << "\n";
    return kInputError;
  }
}

// ---------------------------------------------------------------- align

struct AlignFlags {
  std::string pgram, targets, ipa, id, out, format = "json";
  std::string manifest, out_dir;
  unsigned jobs = 0;
  bool lenient = false, probabilities = false;
};

struct AlignJob {
  std::string id, pgram, targets, out;
};

std::string render(const AlignmentDocument& doc, const std::string& format) {
  return format == "textgrid" ? write_textgrid(doc) : write_document_json(doc);
}

AlignmentDocument run_align(const AlignJob& job, const TargetsFile& tf,
                            const PhonemeInventory& inv, const AlignConfig& cfg,
                            const AlignFlags& flags, std::vector<std::string>* warnings) {
  ReadOptions ro;
  ro.probability_space = flags.probabilities;
  const auto p = read_posteriorgram_file(job.pgram, ro);
  auto targets = map_ipa(inv, tf.symbols, flags.lenient ? MapMode::kLenient : MapMode::kStrict,
                         warnings);
  targets.source_text = tf.text;
  const auto a = align(p, targets, inv, cfg);
  return to_document(a, inv, job.id, cfg);
}

std::vector<AlignJob> read_manifest(const std::string& path, const std::string& out_dir,
                                    const std::string& ext) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open manifest '" + path + "'");
  const fs::path base = fs::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    const fs::path q(p);
    return (q.is_absolute() ? q : base / q).string();
  };
  std::vector<AlignJob> jobs;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const auto fields = split_ws(line);
    if (fields.empty() || fields[0][0] == '#') continue;
    if (fields.size() != 3)
      throw InputError("manifest line " + std::to_string(lineno) +
                       ": expected <id> <posteriorgram> <targets>");
    jobs.push_back({fields[0], resolve(fields[1]), resolve(fields[2]),
                    (fs::path(out_dir) / (fields[0] + ext)).string()});
  }
  return jobs;
}

int cmd_align_batch(const AlignFlags& flags, const PhonemeInventory& inv,
                    const AlignConfig& cfg) {
  if (flags.out_dir.empty()) throw InputError("--manifest requires --out-dir");
  fs::create_directories(flags.out_dir);
  const auto ext = flags.format == "textgrid" ? ".TextGrid" : ".json";
  const auto jobs = read_manifest(flags.manifest, flags.out_dir, ext);

  std::vector<std::exception_ptr> errors(jobs.size());
  std::vector<std::vector<std::string>> warnings(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      try {
        const auto doc =
            run_align(jobs[i], load_targets(jobs[i].targets), inv, cfg, flags, &warnings[i]);
        write_file_atomic(jobs[i].out, render(doc, flags.format));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned n = flags.jobs ? flags.jobs : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  int status = kOk;
  std::size_t failed = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    for (const auto& w : warnings[i]) std::cerr << jobs[i].id << ": warning: " << w << "\n";
    if (!errors[i]) continue;
    ++failed;
    const int code = report_error(jobs[i].id, errors[i]);
    if (status == kOk) status = code;
  }
  std::cerr << jobs.size() - failed << " of " << jobs.size() << " utterances aligned\n";
  return status;
}

int cmd_align(const AlignFlags& flags, const InventoryFlags& invf, const ConfigFlags& cf) {
  const auto inv = invf.load();
  const auto cfg = cf.get();
  if (!flags.manifest.empty()) return cmd_align_batch(flags, inv, cfg);

  if (flags.pgram.empty()) throw InputError("--pgram is required without --manifest");
  if (flags.targets.empty() == flags.ipa.empty())
    throw InputError("give exactly one of --targets and --ipa");
  TargetsFile tf;
  if (!flags.targets.empty()) {
    tf = load_targets(flags.targets);
  } else {
    tf.symbols = split_ws(flags.ipa);
  }
  AlignJob job{flags.id.empty() ? fs::path(flags.pgram).stem().string() : flags.id,
               flags.pgram, flags.targets, flags.out};
  std::vector<std::string> warnings;
  const auto doc = run_align(job, tf, inv, cfg, flags, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  const auto text = render(doc, flags.format);
  if (flags.out.empty() || flags.out == "-") {
    std::cout << text;
  } else {
    write_file_atomic(flags.out, text);
  }
  return kOk;
}

// ---------------------------------------------------------------- eval

struct EvalFlags {
  std::string pred, ref, out_dir;
  std::vector<double> tolerances = {20.0, 40.0, 60.0};
  EvalOptions opts;
  bool onsets_only = false, per_utterance = false;
  std::vector<std::string> ignore = {"", "sil", "SIL", "sp", "pau", "h#", "<blank>"};
};

std::map<std::string, fs::path> alignment_files(const std::string& dir) {
  if (!fs::is_directory(dir)) throw InputError("'" + dir + "' is not a directory");
  std::map<std::string, fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const auto ext = e.path().extension().string();
    if (ext != ".json" && ext != ".TextGrid") continue;
    const auto id = e.path().stem().string();
    if (out.count(id)) throw InputError("duplicate utterance id '" + id + "' in " + dir);
    out[id] = e.path();
  }
  return out;
}

std::vector<LabeledSpan> load_spans(const fs::path& path,
                                    const std::vector<std::string>& ignore) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  auto doc = path.extension() == ".TextGrid" ? read_textgrid(in, ignore)
                                             : read_document_json(in);
  auto spans = doc.spans();
  std::erase_if(spans, [&](const LabeledSpan& s) {
    return std::find(ignore.begin(), ignore.end(), s.label) != ignore.end();
  });
  return spans;
}

int cmd_eval(EvalFlags flags) {
  flags.opts.tolerances = flags.tolerances;
  const auto pred = alignment_files(flags.pred);
  const auto ref = alignment_files(flags.ref);

  std::vector<std::string> only_pred, only_ref;
  for (const auto& [id, _] : pred)
    if (!ref.count(id)) only_pred.push_back(id);
  for (const auto& [id, _] : ref)
    if (!pred.count(id)) only_ref.push_back(id);
  if (!only_pred.empty() || !only_ref.empty()) {
    std::cerr << "utterance ids differ between directories\n";
    for (const auto& id : only_ref) std::cerr << "  missing prediction: " << id << "\n";
    for (const auto& id : only_pred) std::cerr << "  missing reference: " << id << "\n";
    return kInputError;
  }
  if (ref.empty()) throw InputError("no alignment files in '" + flags.ref + "'");

  const bool offsets = !flags.onsets_only;
  EvalAccumulator corpus(flags.opts);
  nlohmann::ordered_json per_utt = nlohmann::ordered_json::object();
  for (const auto& [id, ref_path] : ref) {
    const auto r = load_spans(ref_path, flags.ignore);
    const auto p = load_spans(pred.at(id), flags.ignore);
    try {
      corpus.add(r, offsets, p, offsets);
      if (flags.per_utterance) {
        EvalAccumulator one(flags.opts);
        one.add(r, offsets, p, offsets);
        per_utt[id] = nlohmann::ordered_json::parse(one.report().to_json());
      }
    } catch (const InputError& e) {
      throw InputError(id + ": " + e.what());
    }
  }
  const auto report = corpus.report();
  report.write_table(std::cout, flags.pred);
  if (!flags.out_dir.empty()) {
    fs::create_directories(flags.out_dir);
    const fs::path dir(flags.out_dir);
    write_file_atomic((dir / "report.json").string(), report.to_json() + "\n");
    std::ostringstream table, csv;
    report.write_table(table, flags.pred);
    report.histogram.write_csv(csv);
    write_file_atomic((dir / "report.txt").string(), table.str());
    write_file_atomic((dir / "histogram.csv").string(), csv.str());
    if (flags.per_utterance)
      write_file_atomic((dir / "per_utterance.json").string(), per_utt.dump(2) + "\n");
  }
  return kOk;
}

// ---------------------------------------------------------------- synth

struct SynthFlags {
  std::string scenario, out_prefix;
  bool random = false, json_pgram = false;
  RandomScenarioOptions ropts;
};

int cmd_synth(const SynthFlags& flags, const InventoryFlags& invf) {
  const auto inv = invf.load();
  if (flags.out_prefix.empty()) throw InputError("--out-prefix is required");
  if (flags.random == !flags.scenario.empty())
    throw InputError("give exactly one of --scenario and --random");
  SynthScenario sc;
  if (flags.random) {
    sc = random_scenario(inv, flags.ropts);
  } else {
    std::ifstream in(flags.scenario);
    if (!in) throw InputError("cannot open '" + flags.scenario + "'");
    sc = read_scenario(in, inv);
  }
  const auto res = generate(sc, inv);
  const auto stem = fs::path(flags.out_prefix).filename().string();
  if (const auto dir = fs::path(flags.out_prefix).parent_path(); !dir.empty())
    fs::create_directories(dir);

  std::ostringstream pg;
  if (flags.json_pgram) {
    write_posteriorgram_json(pg, res.posteriorgram);
  } else {
    write_posteriorgram(pg, res.posteriorgram);
  }
  write_file_atomic(flags.out_prefix + (flags.json_pgram ? ".pgram.json" : ".pgram"), pg.str());
  write_file_atomic(flags.out_prefix + ".ref.json",
                    write_document_json(to_document(res.reference, inv, stem, std::nullopt)));
  write_file_atomic(flags.out_prefix + ".targets.json",
                    write_targets_json(targets_file_for(res.targets, inv)));
  if (flags.random) {
    std::ostringstream s;
    write_scenario(s, sc, inv);
    write_file_atomic(flags.out_prefix + ".scenario.json", s.str());
  }
  return kOk;
}

// ---------------------------------------------------------------- g2p

struct G2pFlags {
  std::string text, lang = "en-us", out;
  bool lenient = false;
};

int cmd_g2p(const G2pFlags& flags, const InventoryFlags& invf) {
  const auto inv = invf.load();
  const auto exe = resolve_espeak();
  const auto tf = phonemize(flags.text, flags.lang, inv.pause_symbols(), exe);
  std::vector<std::string> warnings;
  map_ipa(inv, tf.symbols, flags.lenient ? MapMode::kLenient : MapMode::kStrict, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  const auto text = write_targets_json(tf);
  if (flags.out.empty() || flags.out == "-") {
    std::cout << text;
  } else {
    write_file_atomic(flags.out, text);
  }
  return kOk;
}

// ---------------------------------------------------------------- bench

struct BenchFlags {
  int frames = 310, phonemes = 40, reps = 5;
  std::uint64_t seed = 1;
  double hop_ms = 10.0;
};

Posteriorgram bench_input(const BenchFlags& f, int classes, std::mt19937_64& rng) {
  std::normal_distribution<float> noise(0.0f, 1.0f);
  LogitMatrix<float> m(f.frames, classes);
  for (Eigen::Index t = 0; t < m.rows(); ++t) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(t, c) = noise(rng);
    m.row(t).array() -= row_logsumexp(m.row(t));
  }
  return Posteriorgram(std::move(m), std::llround(f.hop_ms * 10.0));
}

int cmd_bench(const BenchFlags& f, const InventoryFlags& invf, const ConfigFlags& cf) {
  if (f.reps < 5) throw InputError("--reps must be at least 5");
  if (f.frames < f.phonemes || f.phonemes < 1) throw InputError("need frames >= phonemes >= 1");
  const auto inv = invf.load();
  const auto cfg = cf.get();
  std::mt19937_64 rng(f.seed);
  const auto p = bench_input(f, inv.phoneme_head_size(), rng);
  TargetSequence targets;
  std::uniform_int_distribution<int> pick(0, inv.num_phonemes() - 1);
  for (int i = 0; i < f.phonemes; ++i) targets.items.push_back(TargetToken::Phoneme(pick(rng)));

  std::vector<double> ms;
  for (int r = 0; r < f.reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto a = align(p, targets, inv, cfg);
    const auto t1 = std::chrono::steady_clock::now();
    if (a.intervals.empty()) throw InputError("empty alignment");
    ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  std::sort(ms.begin(), ms.end());
  const auto n = ms.size();
  const double median = n % 2 ? ms[n / 2] : 0.5 * (ms[n / 2 - 1] + ms[n / 2]);
  const double audio_ms = p.duration_ms();
  std::cout << std::fixed << std::setprecision(3) << "frames " << f.frames << "  phonemes "
            << f.phonemes << "  classes " << p.num_classes() << "  reps " << f.reps << "\n"
            << "median ms/utt " << median << "  min " << ms.front() << "  max "
            << ms.back() << "\n"
            << "audio ms " << audio_ms << "  RTF " << std::setprecision(5)
            << median / audio_ms << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ctcalign: CTC forced alignment on phoneme posteriorgrams"};
  app.require_subcommand(1);

  InventoryFlags invf;
  ConfigFlags cf;

  AlignFlags af;
  auto* align_cmd = app.add_subcommand("align", "Align posteriorgrams to phoneme targets");
  invf.add_to(align_cmd);
  cf.add_to(align_cmd);
  align_cmd->add_option("--pgram", af.pgram, "Posteriorgram (PGRAM binary or JSON)");
  align_cmd->add_option("--targets", af.targets, "Targets JSON file");
  align_cmd->add_option("--ipa", af.ipa, "Inline IPA symbols separated by spaces");
  align_cmd->add_option("--id", af.id, "Utterance id (default: posteriorgram stem)");
  align_cmd->add_option("--out", af.out, "Output path (default: stdout)");
  align_cmd->add_option("--format", af.format, "Output format")
      ->check(CLI::IsMember({"json", "textgrid"}))
      ->capture_default_str();
  align_cmd->add_option("--manifest", af.manifest,
                        "Batch mode: lines of <id> <posteriorgram> <targets>");
  align_cmd->add_option("--out-dir", af.out_dir, "Batch output directory");
  align_cmd->add_option("-j,--jobs", af.jobs, "Batch worker threads (default: all cores)");
  align_cmd->add_flag("--lenient", af.lenient, "Skip unknown IPA symbols with a warning");
  align_cmd->add_flag("--probabilities", af.probabilities,
                      "JSON posteriorgram holds probabilities, not log-probabilities");

  EvalFlags ef;
  auto* eval_cmd = app.add_subcommand("eval", "Score predicted boundaries against references");
  eval_cmd->add_option("--pred", ef.pred, "Directory of predicted alignments")->required();
  eval_cmd->add_option("--ref", ef.ref, "Directory of reference alignments")->required();
  eval_cmd->add_option("--out-dir", ef.out_dir,
                       "Write report.json, report.txt and histogram.csv here");
  eval_cmd->add_option("--tolerances", ef.tolerances, "Tolerances in ms")
      ->delimiter(',')
      ->capture_default_str();
  eval_cmd->add_option("--onset-tolerance", ef.opts.onset_tolerance,
                       "Tolerance of the onset-only precision column")
      ->capture_default_str();
  eval_cmd->add_option("--match-window", ef.opts.match_window,
                       "Deletion/insertion matching window in ms")
      ->capture_default_str();
  eval_cmd->add_option("--bin-width", ef.opts.bin_width, "Histogram bin width in ms")
      ->capture_default_str();
  eval_cmd->add_option("--hist-max", ef.opts.histogram_max, "Histogram overflow edge in ms")
      ->capture_default_str();
  eval_cmd->add_flag("--onsets-only", ef.onsets_only, "Score onsets only");
  eval_cmd->add_flag("--per-utterance", ef.per_utterance,
                     "Also write per_utterance.json to --out-dir");
  eval_cmd->add_option("--ignore-labels", ef.ignore, "Labels treated as non-phonemes")
      ->delimiter(',');

  SynthFlags sf;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic posteriorgram");
  invf.add_to(synth_cmd);
  synth_cmd->add_option("--scenario", sf.scenario, "Scenario JSON");
  synth_cmd->add_flag("--random", sf.random, "Draw a random scenario");
  synth_cmd->add_option("--out-prefix", sf.out_prefix, "Output path prefix")->required();
  synth_cmd->add_flag("--json-pgram", sf.json_pgram, "Write the posteriorgram as JSON");
  synth_cmd->add_option("--seed", sf.ropts.seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("--phonemes", sf.ropts.num_phonemes)->capture_default_str();
  synth_cmd->add_option("--gapped", sf.ropts.gapped_phonemes,
                        "Phonemes preceded by a blank gap")
      ->capture_default_str();
  synth_cmd->add_option("--silences", sf.ropts.silence_blocks, "Interior silence blocks")
      ->capture_default_str();
  synth_cmd->add_option("--peak", sf.ropts.peak)->capture_default_str();
  synth_cmd->add_option("--temperature", sf.ropts.temperature)->capture_default_str();

  G2pFlags gf;
  auto* g2p_cmd = app.add_subcommand("g2p", "Phonemize text with espeak-ng");
  invf.add_to(g2p_cmd);
  g2p_cmd->add_option("--text", gf.text, "Text to phonemize")->required();
  g2p_cmd->add_option("--lang", gf.lang, "espeak-ng voice")->capture_default_str();
  g2p_cmd->add_option("--out", gf.out, "Targets JSON path (default: stdout)");
  g2p_cmd->add_flag("--lenient", gf.lenient, "Only warn about unmappable symbols");
  g2p_cmd->footer(std::string("Environment: ") + kEspeakEnvVar +
                  " overrides the espeak-ng executable.");

  BenchFlags bf;
  auto* bench_cmd = app.add_subcommand("bench", "Time alignment on random posteriorgrams");
  invf.add_to(bench_cmd);
  cf.add_to(bench_cmd);
  bench_cmd->add_option("--frames", bf.frames)->capture_default_str();
  bench_cmd->add_option("--phonemes", bf.phonemes)->capture_default_str();
  bench_cmd->add_option("--reps", bf.reps)->capture_default_str();
  bench_cmd->add_option("--seed", bf.seed)->capture_default_str();
  bench_cmd->add_option("--hop-ms", bf.hop_ms)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (align_cmd->parsed()) return cmd_align(af, invf, cf);
    if (eval_cmd->parsed()) return cmd_eval(ef);
    if (synth_cmd->parsed()) return cmd_synth(sf, invf);
    if (g2p_cmd->parsed()) return cmd_g2p(gf, invf);
    if (bench_cmd->parsed()) return cmd_bench(bf, invf, cf);
  } catch (...) {
    return report_error("", std::current_exception());
  }
  return kOk;
}
