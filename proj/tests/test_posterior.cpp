// tests/test_posterior.cpp
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
#include <cstring>
#include <limits>
#include <sstream>

#include "ctcalign/errors.hpp"
#include "ctcalign/posterior.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace ctcalign;

namespace {

template <typename T>
void put_le(std::string& out, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  // Test hosts are little-endian; the format is little-endian.
  out.append(reinterpret_cast<const char*>(b), sizeof(T));
}

// PGRAM bytes assembled field by field from the format description.
std::string pgram_bytes(std::uint32_t t, std::uint32_t v, std::uint16_t hop,
                        std::uint16_t offset, std::uint8_t head,
                        const std::vector<float>& values) {
  std::string s = "PGRM";
  put_le<std::uint8_t>(s, 1);
  put_le(s, t);
  put_le(s, v);
  put_le(s, hop);
  put_le(s, offset);
  put_le(s, head);
  for (float x : values) put_le(s, x);
  return s;
}

std::vector<float> uniform_rows(int t, int v) {
  return std::vector<float>(static_cast<std::size_t>(t * v),
                            static_cast<float>(-std::log(static_cast<double>(v))));
}

}  // namespace

TEST_SUITE("posterior") {

TEST_CASE("reads a hand-assembled PGRAM stream") {
  std::istringstream in(pgram_bytes(3, 6, 100, 25, 0, uniform_rows(3, 6)));
  const auto p = read_posteriorgram(in);
  CHECK(p.num_frames() == 3);
  CHECK(p.num_classes() == 6);
  CHECK(p.frame_hop_ms() == 10.0);
  CHECK(p.frame_offset_ms() == 2.5);
  CHECK(p.head() == Head::kPhoneme);
  CHECK(p.frame_time_ms(2) == 22.5);
}

TEST_CASE("NaN entry is rejected with frame and class") {
  auto values = uniform_rows(3, 6);
  values[1 * 6 + 4] = std::numeric_limits<float>::quiet_NaN();
  std::istringstream in(pgram_bytes(3, 6, 100, 0, 0, values));
  try {
    read_posteriorgram(in);
    FAIL("expected an error");
  } catch (const InputError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("frame 1") != std::string::npos);
    CHECK(msg.find("class 4") != std::string::npos);
  }
}

TEST_CASE("rows summing to 0.98 fail the normalization check") {
  // logsumexp = ln 0.98, about -0.0202, well outside +-1e-3.
  const std::string json =
      R"({"frames": [[0.49, 0.49]], "frame_hop_ms": 10, "frame_offset_ms": 0, "head": "phoneme"})";
  ReadOptions ro;
  ro.probability_space = true;
  std::istringstream in(json);
  CHECK_THROWS_AS(read_posteriorgram(in, ro), InputError);
  ro.check_normalization = false;
  std::istringstream again(json);
  CHECK(read_posteriorgram(again, ro).num_frames() == 1);
}

TEST_CASE("malformed streams") {
  SUBCASE("bad magic") {
    auto s = pgram_bytes(1, 2, 100, 0, 0, uniform_rows(1, 2));
    s[0] = 'X';
    std::istringstream in(s);
    CHECK_THROWS_AS(read_posteriorgram(in), InputError);
  }
  SUBCASE("bad version") {
    auto s = pgram_bytes(1, 2, 100, 0, 0, uniform_rows(1, 2));
    s[4] = 2;
    std::istringstream in(s);
    CHECK_THROWS_AS(read_posteriorgram(in), InputError);
  }
  SUBCASE("truncated payload") {
    auto s = pgram_bytes(2, 2, 100, 0, 0, uniform_rows(2, 2));
    s.resize(s.size() - 4);
    std::istringstream in(s);
    CHECK_THROWS_AS(read_posteriorgram(in), InputError);
  }
  SUBCASE("T = 0") {
    std::istringstream in(pgram_bytes(0, 2, 100, 0, 0, {}));
    CHECK_THROWS_AS(read_posteriorgram(in), InputError);
  }
}

TEST_CASE("empty posteriorgram cannot be written") {
  Posteriorgram empty(LogitMatrix<float>(0, 2), 100);
  std::ostringstream out;
  CHECK_THROWS_AS(write_posteriorgram(out, empty), InputError);
}

TEST_CASE("T=1, V=2 round trips bit-exactly") {
  LogitMatrix<float> m(1, 2);
  m << std::log(0.25f), std::log(0.75f);
  const Posteriorgram p(m, 100, 0, Head::kGroup);
  std::ostringstream out;
  write_posteriorgram(out, p);
  CHECK(out.str().size() == 4 + 1 + 4 + 4 + 2 + 2 + 1 + 2 * 4);
  std::istringstream in(out.str());
  CHECK(read_posteriorgram(in) == p);
}

TEST_CASE("negative infinity survives binary and JSON round trips") {
  LogitMatrix<float> m(2, 3);
  const float ninf = -std::numeric_limits<float>::infinity();
  m << 0.0f, ninf, ninf, std::log(0.5f), std::log(0.5f), ninf;
  const Posteriorgram p(m, 200, 50);
  std::ostringstream bin, js;
  write_posteriorgram(bin, p);
  write_posteriorgram_json(js, p);
  std::istringstream bin_in(bin.str()), js_in(js.str());
  CHECK(read_posteriorgram(bin_in) == p);
  CHECK(read_posteriorgram(js_in) == p);
}

TEST_CASE("row_logsumexp") {
  Eigen::RowVectorXd row(3);
  row << std::log(0.2), std::log(0.3), std::log(0.5);
  CHECK(row_logsumexp(row) == doctest::Approx(0.0).epsilon(1e-12));
  row.setConstant(-std::numeric_limits<double>::infinity());
  CHECK(row_logsumexp(row) == -std::numeric_limits<double>::infinity());
}

}  // TEST_SUITE
