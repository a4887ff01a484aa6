// ctcalign/metrics.hpp
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

#ifndef CTCALIGN_METRICS_HPP
#define CTCALIGN_METRICS_HPP

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ctcalign {

/// A labelled time span in milliseconds.
struct LabeledSpan {
  std::string label;
  double start_ms = 0.0;
  double end_ms = 0.0;
  bool operator==(const LabeledSpan&) const = default;
};

/// Phoneme boundaries of one utterance. Onsets are sorted with labels
/// parallel to them; offsets, when present, are sorted independently.
struct BoundarySet {
  std::vector<double> onsets;
  std::optional<std::vector<double>> offsets;
  std::vector<std::string> labels;

  /// Onsets (and offsets when `with_offsets`) of spans sorted by start.
  static BoundarySet from_spans(std::vector<LabeledSpan> spans, bool with_offsets);

  /// Onsets plus offsets (when carried), sorted: every boundary.
  std::vector<double> all() const;
  std::size_t size() const { return onsets.size() + (offsets ? offsets->size() : 0); }
};

/// Reference boundaries scored by recall: onsets, plus offsets when both
/// sets carry them.
std::vector<double> reference_pool(const BoundarySet& ref, const BoundarySet& pred);

/// Distance from `x` to the nearest element of the sorted `pool`.
double nearest_distance(const std::vector<double>& pool, double x);

/// Percent of reference boundaries with a predicted boundary within `tol`
/// (inclusive). Predicted candidates are all predicted boundaries.
double recall_at(const BoundarySet& ref, const BoundarySet& pred, double tol);

/// Percent of predicted boundaries (onsets only when `onset_only`) with a
/// reference boundary within `tol`.
double precision_at(const BoundarySet& ref, const BoundarySet& pred, double tol,
                    bool onset_only);

struct MeanMedian {
  double mean = 0.0;
  double median = 0.0;
};

struct BoundaryDistances {
  MeanMedian known_to_aligned;
  MeanMedian aligned_to_known;
};

BoundaryDistances boundary_distances(const BoundarySet& ref, const BoundarySet& pred);

struct GapStats {
  double median_ms = 0.0;
  double std_ms = 0.0;  // sample standard deviation
  double pct_gap_per_phone = 0.0;
};

/// Statistics over positive gaps between consecutive spans; percent of
/// phonemes preceded by a gap. The first phoneme never counts.
GapStats gap_stats(const std::vector<LabeledSpan>& spans);

struct EditRates {
  double deletions_pct = 0.0;
  double insertions_pct = 0.0;
};

/// Greedy in-order matching of same-label phonemes whose onsets lie within
/// `window` ms of each other.
EditRates deletions_insertions(const BoundarySet& ref, const BoundarySet& pred,
                               double window = 100.0);

struct Histogram {
  double bin_width = 10.0;
  std::vector<double> edges;          // left edge of each regular bin
  std::vector<std::size_t> counts;    // regular bins then one overflow bin
  std::size_t total() const;
  void write_csv(std::ostream& out) const;
};

Histogram make_histogram(double bin_width, double max);
void add_to_histogram(Histogram& h, double distance);

/// Nearest-predicted distance of every reference boundary, binned.
Histogram error_histogram(const BoundarySet& ref, const BoundarySet& pred,
                          double bin_width, double max);

struct EvalOptions {
  std::vector<double> tolerances = {20.0, 40.0, 60.0};
  double onset_tolerance = 20.0;  // tolerance of the onset-only precision column
  double match_window = 100.0;
  double bin_width = 10.0;
  double histogram_max = 200.0;
};

struct EvalReport {
  std::map<double, double> recall_at;
  std::map<double, double> precision_at;
  double precision_onset = 0.0;  // at EvalOptions::onset_tolerance
  double onset_tolerance = 20.0;
  MeanMedian known_to_aligned;
  MeanMedian aligned_to_known;
  GapStats gaps;
  std::size_t annotated = 0;
  std::size_t predicted = 0;
  double deletions_pct = 0.0;
  double insertions_pct = 0.0;
  std::size_t utterances = 0;
  Histogram histogram;

  std::string to_json() const;
  void write_table(std::ostream& out, const std::string& title = "") const;
};

/// Corpus-level accumulation of sufficient statistics; utterances are merged
/// in the order they are added.
class EvalAccumulator {
 public:
  explicit EvalAccumulator(EvalOptions opts = {});

  /// Throws InputError when either side has no boundaries.
  void add(const std::vector<LabeledSpan>& ref_spans, bool ref_offsets,
           const std::vector<LabeledSpan>& pred_spans, bool pred_offsets);
  void merge(const EvalAccumulator& other);
  EvalReport report() const;

 private:
  EvalOptions opts_;
  std::vector<std::size_t> recall_hits_, precision_hits_;
  std::size_t onset_hits_ = 0, onset_total_ = 0;
  std::size_t ref_total_ = 0, pred_total_ = 0;
  std::vector<double> k2a_, a2k_, gaps_;
  std::size_t phonemes_ = 0, gapped_ = 0;
  std::size_t ref_phones_ = 0, pred_phones_ = 0, deleted_ = 0, inserted_ = 0;
  std::size_t utterances_ = 0;
  Histogram histogram_;
};

}  // namespace ctcalign

#endif  // CTCALIGN_METRICS_HPP
