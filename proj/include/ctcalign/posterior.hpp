// ctcalign/posterior.hpp
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

#ifndef CTCALIGN_POSTERIOR_HPP
#define CTCALIGN_POSTERIOR_HPP

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "ctcalign/errors.hpp"

namespace ctcalign {

/// Which inventory axis the class dimension indexes.
enum class Head : std::uint8_t { kPhoneme = 0, kGroup = 1 };

template <typename Scalar>
using LogitMatrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// log(sum(exp(row))) without overflow; an all -inf row gives -inf.
template <typename Derived>
typename Derived::Scalar row_logsumexp(const Eigen::MatrixBase<Derived>& row) {
  using Scalar = typename Derived::Scalar;
  const Scalar peak = row.maxCoeff();
  if (peak == -std::numeric_limits<Scalar>::infinity()) return peak;
  return peak + std::log((row.array() - peak).exp().sum());
}

/// T x V matrix of per-frame log-probabilities plus frame timing.
///
/// Timing is held in tenths of a millisecond so every boundary time is an
/// exact function of the frame index: frame t covers
/// [offset + t*hop, offset + (t+1)*hop).
template <typename Scalar>
class BasicPosteriorgram {
 public:
  using Matrix = LogitMatrix<Scalar>;
  using Index = Eigen::Index;

  BasicPosteriorgram() = default;
  BasicPosteriorgram(Matrix logits, std::int64_t hop_tenths,
                     std::int64_t offset_tenths = 0, Head head = Head::kPhoneme)
      : logits_(std::move(logits)),
        hop_tenths_(hop_tenths),
        offset_tenths_(offset_tenths),
        head_(head) {
    if (hop_tenths_ <= 0) throw InputError("frame hop must be positive");
    if (offset_tenths_ < 0) throw InputError("frame offset must be >= 0");
  }

  const Matrix& logits() const { return logits_; }
  Matrix& logits() { return logits_; }
  Scalar operator()(Index t, Index c) const { return logits_(t, c); }

  Index num_frames() const { return logits_.rows(); }
  Index num_classes() const { return logits_.cols(); }
  Head head() const { return head_; }

  std::int64_t hop_tenths() const { return hop_tenths_; }
  std::int64_t offset_tenths() const { return offset_tenths_; }
  double frame_hop_ms() const { return static_cast<double>(hop_tenths_) / 10.0; }
  double frame_offset_ms() const {
    return static_cast<double>(offset_tenths_) / 10.0;
  }

  /// Start time of frame `t` in ms; `t == num_frames()` gives the end time.
  double frame_time_ms(Index t) const {
    return static_cast<double>(offset_tenths_ + t * hop_tenths_) / 10.0;
  }
  double duration_ms() const {
    return static_cast<double>(num_frames() * hop_tenths_) / 10.0;
  }

  /// Rows [first, first + count) as a new posteriorgram with shifted offset.
  BasicPosteriorgram slice(Index first, Index count) const {
    return BasicPosteriorgram(logits_.middleRows(first, count), hop_tenths_,
                              offset_tenths_ + first * hop_tenths_, head_);
  }

  /// Throws InputError naming frame and class of the first NaN.
  void check_finite_or_neg_inf() const {
    for (Index t = 0; t < num_frames(); ++t)
      for (Index c = 0; c < num_classes(); ++c) {
        const Scalar v = logits_(t, c);
        if (std::isnan(v) || v == std::numeric_limits<Scalar>::infinity())
          throw InputError("invalid logit at frame " + std::to_string(t) +
                           ", class " + std::to_string(c));
      }
  }

  /// Raw-input check: logsumexp of every row within +-tolerance of 0.
  void check_normalized(double tolerance = 1e-3) const {
    for (Index t = 0; t < num_frames(); ++t) {
      const double lse = static_cast<double>(
          row_logsumexp(logits_.row(t).template cast<double>()));
      if (!(std::abs(lse) <= tolerance))
        throw InputError("frame " + std::to_string(t) +
                         " is not normalized (logsumexp = " +
                         std::to_string(lse) + ")");
    }
  }

  bool operator==(const BasicPosteriorgram& o) const {
    return head_ == o.head_ && hop_tenths_ == o.hop_tenths_ &&
           offset_tenths_ == o.offset_tenths_ &&
           logits_.rows() == o.logits_.rows() &&
           logits_.cols() == o.logits_.cols() &&
           std::equal(logits_.data(), logits_.data() + logits_.size(),
                      o.logits_.data(), [](Scalar a, Scalar b) {
                        return std::memcmp(&a, &b, sizeof(Scalar)) == 0;
                      });
  }

 private:
  Matrix logits_;
  std::int64_t hop_tenths_ = 100;
  std::int64_t offset_tenths_ = 0;
  Head head_ = Head::kPhoneme;
};

using Posteriorgram = BasicPosteriorgram<float>;

/// Parses PGRAM binary or the JSON alternative (detected from the first
/// bytes). Validates NaN-freedom, and row normalization unless
/// `check_normalization` is false. With `probability_space`, JSON entries are
/// probabilities and are converted with the natural log.
struct ReadOptions {
  bool check_normalization = true;
  bool probability_space = false;
  double normalization_tolerance = 1e-3;
};

Posteriorgram read_posteriorgram(std::istream& in, const ReadOptions& opts = {});
Posteriorgram read_posteriorgram_file(const std::string& path,
                                      const ReadOptions& opts = {});

/// PGRAM binary writer; bit-exact inverse of read_posteriorgram.
void write_posteriorgram(std::ostream& out, const Posteriorgram& p);
void write_posteriorgram_file(const std::string& path, const Posteriorgram& p);
/// JSON alternative; -inf entries are written as the string "-inf".
void write_posteriorgram_json(std::ostream& out, const Posteriorgram& p);

}  // namespace ctcalign

#endif  // CTCALIGN_POSTERIOR_HPP
