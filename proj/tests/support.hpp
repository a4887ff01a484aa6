// tests/support.hpp
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

// Test-only helpers: fixture loaders and independent reference
// implementations that the library results are checked against.

#ifndef CTCALIGN_TESTS_SUPPORT_HPP
#define CTCALIGN_TESTS_SUPPORT_HPP

#include <cctype>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctcalign/phoneset.hpp"
#include "ctcalign/posterior.hpp"

namespace testing {

inline const std::string kDataDir = CTCALIGN_DATA_DIR;

inline ctcalign::PhonemeInventory toy_inventory() {
  return ctcalign::load_inventory_file(kDataDir + "/inventory/toy.inv", true);
}

inline ctcalign::PhonemeInventory default_inventory() {
  return ctcalign::load_inventory_file(kDataDir + "/inventory/ph67.inv");
}

/// Posteriorgram from rows given in probability space (log taken per entry).
inline ctcalign::Posteriorgram from_probs(const std::vector<std::vector<double>>& rows,
                                          std::int64_t hop_tenths = 100) {
  ctcalign::LogitMatrix<float> m(static_cast<Eigen::Index>(rows.size()),
                                 static_cast<Eigen::Index>(rows.at(0).size()));
  for (std::size_t t = 0; t < rows.size(); ++t)
    for (std::size_t c = 0; c < rows[t].size(); ++c)
      m(t, c) = static_cast<float>(std::log(rows[t][c]));
  return ctcalign::Posteriorgram(std::move(m), hop_tenths);
}

// ------------------------------------------------------------------------
// Exhaustive forced-alignment oracle. Walks every frame-by-frame sequence of
// lattice positions that the trace rules allow and keeps all maximal ones.

struct OracleResult {
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<int>> argmax;  // every trace scoring `best`
  std::size_t legal = 0;                 // number of legal traces
};

inline bool oracle_legal(const std::vector<int>& seq, const std::vector<int>& states) {
  const int n = static_cast<int>(states.size());
  if (seq.front() > 1) return false;
  if (seq.back() != n - 1 && seq.back() != n - 2) return false;
  std::vector<bool> seen(states.size(), false);
  for (std::size_t t = 0; t < seq.size(); ++t) {
    seen[seq[t]] = true;
    if (t == 0) continue;
    const int d = seq[t] - seq[t - 1];
    if (d < 0 || d > 2) return false;
    if (d == 2 && (seq[t] % 2 == 0 || states[seq[t]] == states[seq[t] - 2])) return false;
  }
  for (int s = 1; s < n; s += 2)
    if (!seen[s]) return false;
  return true;
}

template <typename Matrix>
void oracle_walk(const Matrix& logits, const std::vector<int>& states,
                 std::vector<int>& seq, OracleResult& out) {
  const auto frames = static_cast<std::size_t>(logits.rows());
  if (seq.size() == frames) {
    if (!oracle_legal(seq, states)) return;
    ++out.legal;
    double score = 0.0;
    for (std::size_t t = 0; t < frames; ++t)
      score += static_cast<double>(logits(static_cast<Eigen::Index>(t), states[seq[t]]));
    if (out.argmax.empty() || score > out.best) {
      out.best = score;
      out.argmax = {seq};
    } else if (score == out.best) {
      out.argmax.push_back(seq);
    }
    return;
  }
  const int n = static_cast<int>(states.size());
  const int from = seq.empty() ? 0 : seq.back();
  const int to = seq.empty() ? 1 : std::min(n - 1, seq.back() + 2);
  const auto left = static_cast<int>(frames - seq.size() - 1);
  for (int s = from; s <= to; ++s) {
    if (n - 2 - s > 2 * left) continue;  // cannot reach the end any more
    seq.push_back(s);
    oracle_walk(logits, states, seq, out);
    seq.pop_back();
  }
}

/// Brute force over targets (blank-interleaved inside the oracle).
template <typename Matrix>
OracleResult oracle_align(const Matrix& logits, const std::vector<int>& targets, int blank) {
  std::vector<int> states{blank};
  for (int p : targets) {
    states.push_back(p);
    states.push_back(blank);
  }
  OracleResult out;
  std::vector<int> seq;
  oracle_walk(logits, states, seq, out);
  return out;
}

// ------------------------------------------------------------------------
// Minimal reader for Praat long-text TextGrids, written from the format
// description: a stream of `key = value` tokens with quoted strings.

struct PraatInterval {
  double xmin = 0.0, xmax = 0.0;
  std::string text;
};

struct PraatTier {
  std::string cls, name;
  double xmin = 0.0, xmax = 0.0;
  std::vector<PraatInterval> intervals;
};

struct PraatTextGrid {
  double xmin = 0.0, xmax = 0.0;
  std::vector<PraatTier> tiers;
};

class PraatTokens {
 public:
  explicit PraatTokens(const std::string& text) {
    std::size_t i = 0;
    while (i < text.size()) {
      const char c = text[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (c == '"') {
        std::string s;
        ++i;
        for (;;) {
          if (i >= text.size()) throw std::runtime_error("unterminated string");
          if (text[i] == '"') {
            if (i + 1 < text.size() && text[i + 1] == '"') {
              s += '"';
              i += 2;
              continue;
            }
            ++i;
            break;
          }
          s += text[i++];
        }
        tokens_.push_back({s, true});
      } else {
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
               text[j] != '"')
          ++j;
        tokens_.push_back({text.substr(i, j - i), false});
        i = j;
      }
    }
  }

  std::string next_string() {
    const auto& t = take();
    if (!t.quoted) throw std::runtime_error("expected string, got " + t.text);
    return t.text;
  }
  double next_number() {
    const auto& t = take();
    if (t.quoted) throw std::runtime_error("expected number");
    std::size_t used = 0;
    const double v = std::stod(t.text, &used);
    if (used != t.text.size()) throw std::runtime_error("bad number " + t.text);
    return v;
  }
  void expect(const std::string& word) {
    const auto& t = take();
    if (t.quoted || t.text != word)
      throw std::runtime_error("expected '" + word + "', got '" + t.text + "'");
  }
  void expect_words(std::initializer_list<const char*> words) {
    for (const char* w : words) expect(w);
  }
  bool done() const { return pos_ == tokens_.size(); }

 private:
  struct Token {
    std::string text;
    bool quoted;
  };
  const Token& take() {
    if (pos_ >= tokens_.size()) throw std::runtime_error("unexpected end of TextGrid");
    return tokens_[pos_++];
  }
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

inline PraatTextGrid parse_praat_long(const std::string& text) {
  PraatTokens tk(text);
  PraatTextGrid g;
  tk.expect_words({"File", "type", "="});
  if (tk.next_string() != "ooTextFile") throw std::runtime_error("not an ooTextFile");
  tk.expect_words({"Object", "class", "="});
  if (tk.next_string() != "TextGrid") throw std::runtime_error("not a TextGrid");
  tk.expect_words({"xmin", "="});
  g.xmin = tk.next_number();
  tk.expect_words({"xmax", "="});
  g.xmax = tk.next_number();
  tk.expect_words({"tiers?", "<exists>", "size", "="});
  const int tiers = static_cast<int>(tk.next_number());
  tk.expect_words({"item", "[]:"});
  for (int i = 1; i <= tiers; ++i) {
    PraatTier tier;
    tk.expect("item");
    tk.expect("[" + std::to_string(i) + "]:");
    tk.expect_words({"class", "="});
    tier.cls = tk.next_string();
    tk.expect_words({"name", "="});
    tier.name = tk.next_string();
    tk.expect_words({"xmin", "="});
    tier.xmin = tk.next_number();
    tk.expect_words({"xmax", "="});
    tier.xmax = tk.next_number();
    tk.expect_words({"intervals:", "size", "="});
    const int n = static_cast<int>(tk.next_number());
    for (int k = 1; k <= n; ++k) {
      PraatInterval iv;
      tk.expect("intervals");
      tk.expect("[" + std::to_string(k) + "]:");
      tk.expect_words({"xmin", "="});
      iv.xmin = tk.next_number();
      tk.expect_words({"xmax", "="});
      iv.xmax = tk.next_number();
      tk.expect_words({"text", "="});
      iv.text = tk.next_string();
      tier.intervals.push_back(iv);
    }
    g.tiers.push_back(tier);
  }
  if (!tk.done()) throw std::runtime_error("trailing tokens after TextGrid");
  return g;
}

}  // namespace testing

#endif  // CTCALIGN_TESTS_SUPPORT_HPP
