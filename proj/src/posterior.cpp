// src/posterior.cpp
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

#include "ctcalign/posterior.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>

#include "json.hpp"

namespace ctcalign {

namespace {

constexpr std::array<char, 4> kMagic = {'P', 'G', 'R', 'M'};
constexpr std::uint8_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 4 + 1 + 4 + 4 + 2 + 2 + 1;

template <typename T>
void put_le(std::string& buf, T value) {
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf.push_back(static_cast<char>(u & 0xFF));
    u = static_cast<U>(u >> 8);
  }
}

template <typename T>
T get_le(const unsigned char* p) {
  using U = std::make_unsigned_t<T>;
  U u = 0;
  for (std::size_t i = sizeof(T); i-- > 0;) u = static_cast<U>((u << 8) | p[i]);
  return static_cast<T>(u);
}

Head parse_head(const std::string& s) {
  if (s == "phoneme") return Head::kPhoneme;
  if (s == "group") return Head::kGroup;
  throw InputError("unknown head '" + s + "' (expected phoneme or group)");
}

std::int64_t ms_to_tenths(double ms, const char* what) {
  const double tenths = ms * 10.0;
  const auto rounded = std::llround(tenths);
  if (std::abs(tenths - static_cast<double>(rounded)) > 1e-6)
    throw InputError(std::string(what) + " must be a multiple of 0.1 ms");
  return rounded;
}

void validate(const Posteriorgram& p, const ReadOptions& opts) {
  p.check_finite_or_neg_inf();
  if (opts.check_normalization) p.check_normalized(opts.normalization_tolerance);
}

Posteriorgram read_binary(const std::string& bytes) {
  if (bytes.size() < kHeaderBytes) throw InputError("PGRAM header truncated");
  const auto* b = reinterpret_cast<const unsigned char*>(bytes.data());
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin()))
    throw InputError("bad PGRAM magic");
  if (b[4] != kVersion)
    throw InputError("unsupported PGRAM version " + std::to_string(b[4]));
  const auto frames = get_le<std::uint32_t>(b + 5);
  const auto classes = get_le<std::uint32_t>(b + 9);
  const auto hop = get_le<std::uint16_t>(b + 13);
  const auto offset = get_le<std::uint16_t>(b + 15);
  const auto head_tag = b[17];
  if (frames == 0 || classes == 0) throw InputError("PGRAM has no data (T or V is 0)");
  if (head_tag > 1) throw InputError("bad PGRAM head tag");
  const auto count = static_cast<std::uint64_t>(frames) * classes;
  if (bytes.size() - kHeaderBytes != count * 4)
    throw InputError("PGRAM size mismatch: header says " + std::to_string(frames) +
                     "x" + std::to_string(classes) + " but payload has " +
                     std::to_string(bytes.size() - kHeaderBytes) + " bytes");
  Posteriorgram::Matrix m(frames, classes);
  const unsigned char* src = b + kHeaderBytes;
  for (std::uint64_t i = 0; i < count; ++i, src += 4)
    m.data()[i] = std::bit_cast<float>(get_le<std::uint32_t>(src));
  return Posteriorgram(std::move(m), hop, offset, static_cast<Head>(head_tag));
}

Posteriorgram read_json(const std::string& text, const ReadOptions& opts) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("posteriorgram JSON: ") + e.what());
  }
  try {
    const auto& frames = doc.at("frames");
    if (!frames.is_array() || frames.empty())
      throw InputError("posteriorgram JSON has no frames");
    const auto rows = frames.size();
    const auto cols = frames.at(0).size();
    if (cols == 0) throw InputError("posteriorgram JSON frame 0 is empty");
    Posteriorgram::Matrix m(rows, cols);
    for (std::size_t t = 0; t < rows; ++t) {
      const auto& row = frames[t];
      if (row.size() != cols)
        throw InputError("frame " + std::to_string(t) + " has " +
                         std::to_string(row.size()) + " classes, expected " +
                         std::to_string(cols));
      for (std::size_t c = 0; c < cols; ++c) {
        const auto& v = row[c];
        double x;
        if (v.is_null() || (v.is_string() && v.get<std::string>() == "-inf")) {
          x = opts.probability_space ? 0.0 : -HUGE_VAL;
        } else if (v.is_number()) {
          x = v.get<double>();
        } else {
          throw InputError("non-numeric entry at frame " + std::to_string(t) +
                           ", class " + std::to_string(c));
        }
        if (opts.probability_space) x = std::log(x);
        m(t, c) = static_cast<float>(x);
      }
    }
    const auto hop = ms_to_tenths(doc.value("frame_hop_ms", 10.0), "frame_hop_ms");
    const auto offset =
        ms_to_tenths(doc.value("frame_offset_ms", 0.0), "frame_offset_ms");
    return Posteriorgram(std::move(m), hop, offset,
                         parse_head(doc.value("head", std::string("phoneme"))));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("posteriorgram JSON: ") + e.what());
  }
}

}  // namespace

Posteriorgram read_posteriorgram(std::istream& in, const ReadOptions& opts) {
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  const auto first = bytes.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw InputError("empty posteriorgram stream");
  auto p = bytes.compare(0, 4, kMagic.data(), 4) == 0 ? read_binary(bytes)
                                                       : read_json(bytes, opts);
  validate(p, opts);
  return p;
}

Posteriorgram read_posteriorgram_file(const std::string& path,
                                      const ReadOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open posteriorgram '" + path + "'");
  return read_posteriorgram(in, opts);
}

void write_posteriorgram(std::ostream& out, const Posteriorgram& p) {
  if (p.num_frames() == 0 || p.num_classes() == 0)
    throw InputError("cannot write an empty posteriorgram");
  if (p.hop_tenths() > 0xFFFF || p.offset_tenths() > 0xFFFF)
    throw InputError("frame hop/offset exceed the PGRAM 16-bit range");
  if (p.num_frames() > 0xFFFFFFFFLL || p.num_classes() > 0xFFFFFFFFLL)
    throw InputError("posteriorgram too large for PGRAM");
  std::string buf(kMagic.begin(), kMagic.end());
  buf.reserve(kHeaderBytes + static_cast<std::size_t>(p.logits().size()) * 4);
  put_le<std::uint8_t>(buf, kVersion);
  put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(p.num_frames()));
  put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(p.num_classes()));
  put_le<std::uint16_t>(buf, static_cast<std::uint16_t>(p.hop_tenths()));
  put_le<std::uint16_t>(buf, static_cast<std::uint16_t>(p.offset_tenths()));
  put_le<std::uint8_t>(buf, static_cast<std::uint8_t>(p.head()));
  const float* data = p.logits().data();
  for (Eigen::Index i = 0; i < p.logits().size(); ++i)
    put_le<std::uint32_t>(buf, std::bit_cast<std::uint32_t>(data[i]));
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw InputError("failed writing posteriorgram");
}

void write_posteriorgram_file(const std::string& path, const Posteriorgram& p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot create '" + path + "'");
  write_posteriorgram(out, p);
}

void write_posteriorgram_json(std::ostream& out, const Posteriorgram& p) {
  nlohmann::json frames = nlohmann::json::array();
  for (Eigen::Index t = 0; t < p.num_frames(); ++t) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < p.num_classes(); ++c) {
      const float v = p(t, c);
      if (std::isinf(v)) row.push_back("-inf");
      else row.push_back(v);
    }
    frames.push_back(std::move(row));
  }
  nlohmann::json doc = {
      {"frames", std::move(frames)},
      {"frame_hop_ms", p.frame_hop_ms()},
      {"frame_offset_ms", p.frame_offset_ms()},
      {"head", p.head() == Head::kPhoneme ? "phoneme" : "group"}};
  out << doc.dump() << '\n';
}

}  // namespace ctcalign
