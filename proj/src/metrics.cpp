// src/metrics.cpp
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

#include "ctcalign/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "ctcalign/errors.hpp"
#include "json.hpp"

namespace ctcalign {

namespace {

double percent(std::size_t hits, std::size_t total) {
  return total == 0 ? 0.0
                    : 100.0 * static_cast<double>(hits) / static_cast<double>(total);
}

std::size_t count_within(const std::vector<double>& from,
                         const std::vector<double>& to, double tol) {
  std::size_t hits = 0;
  for (const double x : from) hits += nearest_distance(to, x) <= tol ? 1 : 0;
  return hits;
}

MeanMedian mean_median(std::vector<double> v) {
  if (v.empty()) return {};
  MeanMedian out;
  out.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  out.median = n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
  return out;
}

GapStats summarize_gaps(std::vector<double> gaps, std::size_t phonemes) {
  GapStats out;
  out.pct_gap_per_phone = percent(gaps.size(), phonemes);
  if (gaps.empty()) return out;
  const auto mm = mean_median(gaps);
  out.median_ms = mm.median;
  if (gaps.size() >= 2) {
    double ss = 0.0;
    for (const double g : gaps) ss += (g - mm.mean) * (g - mm.mean);
    out.std_ms = std::sqrt(ss / static_cast<double>(gaps.size() - 1));
  }
  return out;
}

std::vector<double> positive_gaps(const std::vector<LabeledSpan>& spans) {
  std::vector<double> gaps;
  for (std::size_t i = 1; i < spans.size(); ++i) {
    const double g = spans[i].start_ms - spans[i - 1].end_ms;
    if (g > 0.0) gaps.push_back(g);
  }
  return gaps;
}

std::string fmt_tol(double t) {
  std::ostringstream os;
  os << t;
  return os.str();
}

}  // namespace

BoundarySet BoundarySet::from_spans(std::vector<LabeledSpan> spans,
                                    bool with_offsets) {
  std::stable_sort(spans.begin(), spans.end(),
                   [](const LabeledSpan& a, const LabeledSpan& b) {
                     return a.start_ms < b.start_ms;
                   });
  BoundarySet out;
  if (with_offsets) out.offsets.emplace();
  for (const auto& s : spans) {
    out.onsets.push_back(s.start_ms);
    out.labels.push_back(s.label);
    if (with_offsets) out.offsets->push_back(s.end_ms);
  }
  if (out.offsets) std::sort(out.offsets->begin(), out.offsets->end());
  return out;
}

std::vector<double> BoundarySet::all() const {
  std::vector<double> out = onsets;
  if (offsets) out.insert(out.end(), offsets->begin(), offsets->end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> reference_pool(const BoundarySet& ref, const BoundarySet& pred) {
  if (ref.offsets && pred.offsets) return ref.all();
  return ref.onsets;
}

double nearest_distance(const std::vector<double>& pool, double x) {
  if (pool.empty()) return std::numeric_limits<double>::infinity();
  const auto it = std::lower_bound(pool.begin(), pool.end(), x);
  double best = std::numeric_limits<double>::infinity();
  if (it != pool.end()) best = *it - x;
  if (it != pool.begin()) best = std::min(best, x - *std::prev(it));
  return best;
}

double recall_at(const BoundarySet& ref, const BoundarySet& pred, double tol) {
  if (!(tol > 0.0)) throw InputError("tolerance must be positive");
  const auto refs = reference_pool(ref, pred);
  if (refs.empty()) throw InputError("recall is undefined for an empty reference");
  return percent(count_within(refs, pred.all(), tol), refs.size());
}

double precision_at(const BoundarySet& ref, const BoundarySet& pred, double tol,
                    bool onset_only) {
  if (!(tol > 0.0)) throw InputError("tolerance must be positive");
  const auto preds = onset_only ? pred.onsets : pred.all();
  if (preds.empty()) throw InputError("precision is undefined for an empty prediction");
  return percent(count_within(preds, ref.all(), tol), preds.size());
}

BoundaryDistances boundary_distances(const BoundarySet& ref, const BoundarySet& pred) {
  const auto refs = reference_pool(ref, pred);
  const auto preds = pred.all();
  const auto ref_all = ref.all();
  if (refs.empty() || preds.empty())
    throw InputError("boundary distances need non-empty sets");
  std::vector<double> k2a, a2k;
  for (const double r : refs) k2a.push_back(nearest_distance(preds, r));
  for (const double p : preds) a2k.push_back(nearest_distance(ref_all, p));
  return {mean_median(std::move(k2a)), mean_median(std::move(a2k))};
}

GapStats gap_stats(const std::vector<LabeledSpan>& spans) {
  return summarize_gaps(positive_gaps(spans), spans.size());
}

namespace {

std::pair<std::size_t, std::size_t> greedy_unmatched(const BoundarySet& ref,
                                                     const BoundarySet& pred,
                                                     double window) {
  std::size_t matched = 0, next = 0;
  for (std::size_t i = 0; i < ref.onsets.size(); ++i) {
    for (std::size_t k = next; k < pred.onsets.size(); ++k) {
      if (pred.onsets[k] > ref.onsets[i] + window) break;
      if (pred.labels[k] == ref.labels[i] &&
          std::abs(pred.onsets[k] - ref.onsets[i]) <= window) {
        ++matched;
        next = k + 1;
        break;
      }
    }
  }
  return {ref.onsets.size() - matched, pred.onsets.size() - matched};
}

}  // namespace

EditRates deletions_insertions(const BoundarySet& ref, const BoundarySet& pred,
                               double window) {
  const auto [del, ins] = greedy_unmatched(ref, pred, window);
  return {percent(del, ref.onsets.size()), percent(ins, pred.onsets.size())};
}

std::size_t Histogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

void Histogram::write_csv(std::ostream& out) const {
  out << "bin_start_ms,count\n";
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double edge = i < edges.size()
                            ? edges[i]
                            : static_cast<double>(edges.size()) * bin_width;
    out << edge << ',' << counts[i] << '\n';
  }
}

Histogram make_histogram(double bin_width, double max) {
  if (!(bin_width > 0.0)) throw InputError("histogram bin width must be positive");
  Histogram h;
  h.bin_width = bin_width;
  const auto bins = static_cast<std::size_t>(std::max(1.0, std::ceil(max / bin_width)));
  for (std::size_t i = 0; i < bins; ++i) h.edges.push_back(static_cast<double>(i) * bin_width);
  h.counts.assign(bins + 1, 0);
  return h;
}

void add_to_histogram(Histogram& h, double distance) {
  const double bin = std::floor(distance / h.bin_width);
  const auto regular = h.edges.size();
  const auto index = bin < static_cast<double>(regular) ? static_cast<std::size_t>(bin)
                                                        : regular;
  ++h.counts[index];
}

Histogram error_histogram(const BoundarySet& ref, const BoundarySet& pred,
                          double bin_width, double max) {
  auto h = make_histogram(bin_width, max);
  const auto refs = reference_pool(ref, pred);
  if (refs.empty()) throw InputError("histogram needs reference boundaries");
  const auto preds = pred.all();
  for (const double r : refs) add_to_histogram(h, nearest_distance(preds, r));
  return h;
}

EvalAccumulator::EvalAccumulator(EvalOptions opts)
    : opts_(std::move(opts)),
      recall_hits_(opts_.tolerances.size(), 0),
      precision_hits_(opts_.tolerances.size(), 0),
      histogram_(make_histogram(opts_.bin_width, opts_.histogram_max)) {
  for (const double t : opts_.tolerances)
    if (!(t > 0.0)) throw InputError("tolerance must be positive");
}

void EvalAccumulator::add(const std::vector<LabeledSpan>& ref_spans, bool ref_offsets,
                          const std::vector<LabeledSpan>& pred_spans,
                          bool pred_offsets) {
  const auto ref = BoundarySet::from_spans(ref_spans, ref_offsets);
  const auto pred = BoundarySet::from_spans(pred_spans, pred_offsets);
  const auto refs = reference_pool(ref, pred);
  const auto preds = pred.all();
  const auto ref_all = ref.all();
  if (refs.empty()) throw InputError("reference has no boundaries");
  if (preds.empty()) throw InputError("prediction has no boundaries");

  for (std::size_t i = 0; i < opts_.tolerances.size(); ++i) {
    recall_hits_[i] += count_within(refs, preds, opts_.tolerances[i]);
    precision_hits_[i] += count_within(preds, ref_all, opts_.tolerances[i]);
  }
  onset_hits_ += count_within(pred.onsets, ref_all, opts_.onset_tolerance);
  onset_total_ += pred.onsets.size();
  ref_total_ += refs.size();
  pred_total_ += preds.size();
  for (const double r : refs) {
    const double d = nearest_distance(preds, r);
    k2a_.push_back(d);
    add_to_histogram(histogram_, d);
  }
  for (const double p : preds) a2k_.push_back(nearest_distance(ref_all, p));

  std::vector<LabeledSpan> ordered = pred_spans;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.start_ms < b.start_ms; });
  const auto gaps = positive_gaps(ordered);
  gaps_.insert(gaps_.end(), gaps.begin(), gaps.end());
  gapped_ += gaps.size();
  phonemes_ += ordered.size();

  const auto [del, ins] = greedy_unmatched(ref, pred, opts_.match_window);
  deleted_ += del;
  inserted_ += ins;
  ref_phones_ += ref.onsets.size();
  pred_phones_ += pred.onsets.size();
  ++utterances_;
}

void EvalAccumulator::merge(const EvalAccumulator& o) {
  if (o.opts_.tolerances != opts_.tolerances)
    throw InputError("cannot merge evaluations with different tolerances");
  for (std::size_t i = 0; i < recall_hits_.size(); ++i) {
    recall_hits_[i] += o.recall_hits_[i];
    precision_hits_[i] += o.precision_hits_[i];
  }
  onset_hits_ += o.onset_hits_;
  onset_total_ += o.onset_total_;
  ref_total_ += o.ref_total_;
  pred_total_ += o.pred_total_;
  k2a_.insert(k2a_.end(), o.k2a_.begin(), o.k2a_.end());
  a2k_.insert(a2k_.end(), o.a2k_.begin(), o.a2k_.end());
  gaps_.insert(gaps_.end(), o.gaps_.begin(), o.gaps_.end());
  phonemes_ += o.phonemes_;
  gapped_ += o.gapped_;
  ref_phones_ += o.ref_phones_;
  pred_phones_ += o.pred_phones_;
  deleted_ += o.deleted_;
  inserted_ += o.inserted_;
  utterances_ += o.utterances_;
  for (std::size_t i = 0; i < histogram_.counts.size(); ++i)
    histogram_.counts[i] += o.histogram_.counts[i];
}

EvalReport EvalAccumulator::report() const {
  EvalReport r;
  for (std::size_t i = 0; i < opts_.tolerances.size(); ++i) {
    r.recall_at[opts_.tolerances[i]] = percent(recall_hits_[i], ref_total_);
    r.precision_at[opts_.tolerances[i]] = percent(precision_hits_[i], pred_total_);
  }
  r.precision_onset = percent(onset_hits_, onset_total_);
  r.onset_tolerance = opts_.onset_tolerance;
  r.known_to_aligned = mean_median(k2a_);
  r.aligned_to_known = mean_median(a2k_);
  r.gaps = summarize_gaps(gaps_, phonemes_);
  r.annotated = ref_total_;
  r.predicted = pred_total_;
  r.deletions_pct = percent(deleted_, ref_phones_);
  r.insertions_pct = percent(inserted_, pred_phones_);
  r.utterances = utterances_;
  r.histogram = histogram_;
  return r;
}

std::string EvalReport::to_json() const {
  nlohmann::ordered_json recall = nlohmann::ordered_json::object();
  nlohmann::ordered_json precision = nlohmann::ordered_json::object();
  for (const auto& [t, v] : recall_at) recall[fmt_tol(t)] = v;
  for (const auto& [t, v] : precision_at) precision[fmt_tol(t)] = v;
  nlohmann::ordered_json bins = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < histogram.counts.size(); ++i) {
    const double edge = i < histogram.edges.size()
                            ? histogram.edges[i]
                            : static_cast<double>(histogram.edges.size()) * histogram.bin_width;
    bins.push_back({{"bin_start_ms", edge},
                    {"overflow", i >= histogram.edges.size()},
                    {"count", histogram.counts[i]}});
  }
  nlohmann::ordered_json doc;
  doc["utterances"] = utterances;
  doc["recall_at"] = recall;
  doc["precision_at"] = precision;
  doc["precision_onset_only"] = {{"tolerance_ms", onset_tolerance},
                                 {"percent", precision_onset}};
  doc["known_to_aligned_ms"] = {{"mean", known_to_aligned.mean},
                                {"median", known_to_aligned.median}};
  doc["aligned_to_known_ms"] = {{"mean", aligned_to_known.mean},
                                {"median", aligned_to_known.median}};
  doc["gaps"] = {{"median_ms", gaps.median_ms},
                 {"std_ms", gaps.std_ms},
                 {"pct_gap_per_phone", gaps.pct_gap_per_phone}};
  doc["totals"] = {{"annotated", annotated}, {"predicted", predicted}};
  doc["errors_pct"] = {{"deletions", deletions_pct}, {"insertions", insertions_pct}};
  doc["histogram"] = {{"bin_width_ms", histogram.bin_width}, {"bins", bins}};
  return doc.dump(2);
}

void EvalReport::write_table(std::ostream& out, const std::string& title) const {
  const auto flags = out.flags();
  const auto prec = out.precision();
  out << std::fixed << std::setprecision(2);
  if (!title.empty()) out << title << '\n';
  out << "utterances: " << utterances << "\n\n";

  out << std::left << std::setw(12) << "Recall (%)";
  for (const auto& [t, v] : recall_at) out << std::right << std::setw(9) << fmt_tol(t) + "ms";
  out << '\n' << std::left << std::setw(12) << "";
  for (const auto& [t, v] : recall_at) out << std::right << std::setw(9) << v;
  out << "\n\n" << std::left << std::setw(12) << "Precision(%)" << std::right
      << std::setw(9) << fmt_tol(onset_tolerance) + "ms*";
  for (const auto& [t, v] : precision_at) out << std::setw(9) << fmt_tol(t) + "ms";
  out << '\n' << std::left << std::setw(12) << "" << std::right << std::setw(9)
      << precision_onset;
  for (const auto& [t, v] : precision_at) out << std::setw(9) << v;
  out << "\n  * onset boundaries only\n\n";

  out << std::left << std::setw(12) << "Totals" << std::right << std::setw(12)
      << "annotated" << std::setw(12) << "predicted" << '\n'
      << std::left << std::setw(12) << "" << std::right << std::setw(12) << annotated
      << std::setw(12) << predicted << "\n";
  out << std::left << std::setw(12) << "Errors (%)" << std::right << std::setw(12)
      << "deletions" << std::setw(12) << "insertions" << '\n'
      << std::left << std::setw(12) << "" << std::right << std::setw(12)
      << deletions_pct << std::setw(12) << insertions_pct << "\n\n";

  out << std::left << std::setw(20) << "Distance (ms)" << std::right << std::setw(10)
      << "mean" << std::setw(10) << "median" << '\n';
  out << std::left << std::setw(20) << "known->aligned" << std::right << std::setw(10)
      << known_to_aligned.mean << std::setw(10) << known_to_aligned.median << '\n';
  out << std::left << std::setw(20) << "aligned->known" << std::right << std::setw(10)
      << aligned_to_known.mean << std::setw(10) << aligned_to_known.median << "\n\n";

  out << std::left << std::setw(20) << "Gaps" << std::right << std::setw(12)
      << "median(ms)" << std::setw(10) << "std(ms)" << std::setw(12) << "%gap/phone"
      << '\n'
      << std::left << std::setw(20) << "" << std::right << std::setw(12)
      << gaps.median_ms << std::setw(10) << gaps.std_ms << std::setw(12)
      << gaps.pct_gap_per_phone << '\n';
  out.flags(flags);
  out.precision(prec);
}

}  // namespace ctcalign
