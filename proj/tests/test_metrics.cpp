// tests/test_metrics.cpp
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
#include <random>
#include <sstream>

#include "ctcalign/errors.hpp"
#include "ctcalign/metrics.hpp"
#include "doctest.h"

using namespace ctcalign;

namespace {

BoundarySet onsets(std::vector<double> xs, std::vector<std::string> labels = {}) {
  BoundarySet b;
  b.onsets = std::move(xs);
  b.labels = labels.empty() ? std::vector<std::string>(b.onsets.size(), "x") : labels;
  return b;
}

// Brute-force share of `from` having some element of `to` within tol.
double share_within(const std::vector<double>& from, const std::vector<double>& to,
                    double tol) {
  std::size_t hit = 0;
  for (double a : from)
    for (double b : to)
      if (std::abs(a - b) <= tol) {
        ++hit;
        break;
      }
  return 100.0 * static_cast<double>(hit) / static_cast<double>(from.size());
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("recall and precision on three boundaries") {
  const auto ref = onsets({100, 200, 300});
  const auto pred = onsets({105, 190, 500});
  CHECK(recall_at(ref, pred, 20) == doctest::Approx(200.0 / 3.0));
  CHECK(precision_at(ref, pred, 20, true) == doctest::Approx(200.0 / 3.0));
  CHECK(recall_at(ref, ref, 20) == 100.0);
  CHECK(precision_at(ref, onsets({100, 300}), 20, false) == 100.0);
  CHECK_THROWS_AS(recall_at(onsets({}), pred, 20), InputError);
  CHECK_THROWS_AS(precision_at(ref, onsets({}), 20, false), InputError);
}

TEST_CASE("tolerance is inclusive") {
  CHECK(recall_at(onsets({100}), onsets({120}), 20) == 100.0);
  CHECK(recall_at(onsets({100}), onsets({120.5}), 20) == 0.0);
}

TEST_CASE("offsets pool only when both sides carry them") {
  const auto ref = BoundarySet::from_spans({{"a", 0, 50}, {"b", 60, 100}}, true);
  const auto pred_on = BoundarySet::from_spans({{"a", 0, 55}, {"b", 60, 100}}, false);
  const auto pred_off = BoundarySet::from_spans({{"a", 0, 55}, {"b", 60, 100}}, true);
  CHECK(reference_pool(ref, pred_on).size() == 2);
  CHECK(reference_pool(ref, pred_off).size() == 4);
}

TEST_CASE("offset predictions against onset-only references lower precision") {
  const auto ref = BoundarySet::from_spans({{"a", 0, 40}, {"b", 80, 120}}, false);
  const auto pred = BoundarySet::from_spans({{"a", 0, 40}, {"b", 80, 120}}, true);
  CHECK(precision_at(ref, pred, 20, false) <= precision_at(ref, pred, 20, true));
  CHECK(precision_at(ref, pred, 20, false) == 50.0);
}

TEST_CASE("boundary distances") {
  auto d = boundary_distances(onsets({100}), onsets({110}));
  CHECK(d.known_to_aligned.mean == 10.0);
  CHECK(d.known_to_aligned.median == 10.0);
  CHECK(d.aligned_to_known.mean == 10.0);
  CHECK(d.aligned_to_known.median == 10.0);

  d = boundary_distances(onsets({100, 200}), onsets({100, 200, 900}));
  CHECK(d.known_to_aligned.mean == 0.0);
  CHECK(d.aligned_to_known.mean == doctest::Approx(700.0 / 3.0));
  CHECK(d.aligned_to_known.median == 0.0);

  d = boundary_distances(onsets({5, 50}), onsets({5, 50}));
  CHECK(d.known_to_aligned.mean == 0.0);
  CHECK(d.aligned_to_known.median == 0.0);
}

TEST_CASE("gap statistics") {
  auto g = gap_stats({{"p", 0, 30}, {"q", 50, 70}, {"r", 70, 90}});
  CHECK(g.median_ms == 20.0);
  CHECK(g.std_ms == 0.0);
  CHECK(g.pct_gap_per_phone == doctest::Approx(100.0 / 3.0));

  g = gap_stats({{"p", 0, 30}, {"q", 30, 70}});
  CHECK(g.median_ms == 0.0);
  CHECK(g.std_ms == 0.0);
  CHECK(g.pct_gap_per_phone == 0.0);

  // gaps 10, 30: median 20, sample std sqrt(200)
  g = gap_stats({{"p", 0, 10}, {"q", 20, 30}, {"r", 60, 70}});
  CHECK(g.median_ms == 20.0);
  CHECK(g.std_ms == doctest::Approx(std::sqrt(200.0)));
}

TEST_CASE("deletions and insertions") {
  const auto ref = onsets({100, 200}, {"p", "q"});
  auto r = deletions_insertions(ref, onsets({105, 190, 600}, {"p", "q", "q"}), 100);
  CHECK(r.deletions_pct == 0.0);
  CHECK(r.insertions_pct == doctest::Approx(100.0 / 3.0));

  r = deletions_insertions(ref, ref, 100);
  CHECK(r.deletions_pct == 0.0);
  CHECK(r.insertions_pct == 0.0);

  r = deletions_insertions(ref, onsets({100}, {"p"}), 100);
  CHECK(r.deletions_pct == 50.0);
  CHECK(r.insertions_pct == 0.0);
}

TEST_CASE("error histogram") {
  const auto h = error_histogram(onsets({100, 200}), onsets({100, 230}), 10, 200);
  REQUIRE(h.counts.size() == 21);
  CHECK(h.counts[0] == 1);
  CHECK(h.counts[3] == 1);
  CHECK(h.total() == 2);

  const auto same = error_histogram(onsets({1, 2, 3}), onsets({1, 2, 3}), 10, 200);
  CHECK(same.counts[0] == 3);

  const auto far = error_histogram(onsets({0}), onsets({1000}), 10, 200);
  CHECK(far.counts.back() == 1);

  std::ostringstream csv;
  h.write_csv(csv);
  CHECK(csv.str().rfind("bin_start_ms,count\n0,1\n10,0\n20,0\n30,1\n", 0) == 0);
}

TEST_CASE("randomized properties") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 2000.0);
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<double> a(1 + rng() % 15), b(1 + rng() % 15);
    for (auto& x : a) x = u(rng);
    for (auto& x : b) x = u(rng);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const auto ref = onsets(a), pred = onsets(b);
    double last_r = 0.0, last_p = 0.0;
    for (double tol : {5.0, 10.0, 20.0, 40.0, 60.0, 200.0}) {
      const double r = recall_at(ref, pred, tol), p = precision_at(ref, pred, tol, false);
      CHECK(r == doctest::Approx(share_within(a, b, tol)));
      CHECK(p == doctest::Approx(share_within(b, a, tol)));
      CHECK(r >= last_r);
      CHECK(p >= last_p);
      last_r = r;
      last_p = p;
    }
    CHECK(error_histogram(ref, pred, 1.0 + static_cast<double>(rng() % 50), 200).total() ==
          a.size());
  }
}

TEST_CASE("corpus accumulation merges in a fixed order") {
  const std::vector<LabeledSpan> ref{{"p", 0, 30}, {"q", 50, 70}, {"r", 70, 90}};
  const std::vector<LabeledSpan> pred{{"p", 0, 30}, {"q", 45, 70}, {"r", 75, 90}};
  EvalAccumulator whole;
  whole.add(ref, true, pred, true);
  whole.add(ref, true, ref, true);
  EvalAccumulator a, b;
  a.add(ref, true, pred, true);
  b.add(ref, true, ref, true);
  a.merge(b);
  CHECK(a.report().to_json() == whole.report().to_json());

  EvalAccumulator self;
  self.add(ref, true, ref, true);
  const auto rep = self.report();
  for (const auto& [tol, value] : rep.recall_at) CHECK(value == 100.0);
  for (const auto& [tol, value] : rep.precision_at) CHECK(value == 100.0);
  CHECK(rep.known_to_aligned.mean == 0.0);
  CHECK(rep.aligned_to_known.mean == 0.0);
  CHECK(rep.histogram.total() == 6);
  CHECK(rep.recall_at.size() == 3);
  CHECK(rep.recall_at.count(20.0) == 1);
  CHECK(rep.recall_at.count(40.0) == 1);
  CHECK(rep.recall_at.count(60.0) == 1);
}

}  // TEST_SUITE
