/*
 * Copyright 2026 The spogasim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <random>
#include <vector>

#include "spogasim/bitslice.hpp"
#include "spogasim/errors.hpp"

using namespace spogasim;

namespace {

std::vector<SlicedInt8> sliced(const std::vector<int>& values) {
  std::vector<SlicedInt8> out;
  out.reserve(values.size());
  for (int v : values) out.push_back(slice(v));
  return out;
}

// Independent schoolbook dot product on the raw integer values.
long long schoolbook_dot(const std::vector<int>& a, const std::vector<int>& b) {
  long long acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += static_cast<long long>(a[i]) * b[i];
  return acc;
}

}  // namespace

TEST_CASE("slice splits sign and nibbles") {
  const SlicedInt8 s = slice(171);
  CHECK(s.sign == +1);
  CHECK(s.magnitude == 171);
  CHECK(s.msn == 10);
  CHECK(s.lsn == 11);

  const SlicedInt8 z = slice(0);
  CHECK(z.sign == +1);
  CHECK(z.msn == 0);
  CHECK(z.lsn == 0);

  const SlicedInt8 n = slice(-37);
  CHECK(n.sign == -1);
  CHECK(n.msn == 2);
  CHECK(n.lsn == 5);
}

TEST_CASE("slice rejects out-of-range values") {
  CHECK_THROWS_AS(slice(256), RangeError);
  CHECK_THROWS_AS(slice(-256), RangeError);
  CHECK_THROWS_AS(slice(100000), RangeError);
}

TEST_CASE("slice is a bijection over the full operand range") {
  for (int v = -255; v <= 255; ++v) {
    const SlicedInt8 s = slice(v);
    CHECK(s.value() == v);
    CHECK(s.magnitude == 16 * s.msn + s.lsn);
    if (s.magnitude == 0) CHECK(s.sign == +1);
  }
}

TEST_CASE("oracle_dot basic values") {
  CHECK(oracle_dot(sliced({2}), sliced({3})) == 6);
  CHECK(oracle_dot(sliced({171, -37}), sliced({1, 1})) == 134);
  CHECK_THROWS_AS(oracle_dot(sliced({1, 2}), sliced({1})), ShapeError);
}

TEST_CASE("oracle_dot matches an independently coded schoolbook loop") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> a(249), b(249);
    for (auto& v : a) v = uniform_int(rng, -255, 255);
    for (auto& v : b) v = uniform_int(rng, -255, 255);
    CHECK(oracle_dot(sliced(a), sliced(b)) == schoolbook_dot(a, b));
  }
}

TEST_CASE("sliced_partials examples") {
  const PartialSums p16 = sliced_partials(sliced({16}), sliced({16}));
  CHECK(p16 == PartialSums{1, 0, 0});

  const PartialSums p17 = sliced_partials(sliced({17}), sliced({17}));
  CHECK(p17 == PartialSums{1, 2, 1});
  CHECK(recompose(p17) == 289);

  const PartialSums pneg = sliced_partials(sliced({-15}), sliced({15}));
  CHECK(pneg == PartialSums{0, 0, -225});

  CHECK_THROWS_AS(sliced_partials(sliced({1}), sliced({})), ShapeError);
}

TEST_CASE("recompose basics") {
  CHECK(recompose({1, 2, 1}) == 289);
  CHECK(recompose({0, 0, 0}) == 0);
}

TEST_CASE("recomposition identity exhaustively at length 1") {
  for (int x = -255; x <= 255; ++x) {
    const SlicedInt8 a = slice(x);
    for (int y = -255; y <= 255; ++y) {
      const SlicedInt8 b = slice(y);
      const std::span<const SlicedInt8> av(&a, 1), bv(&b, 1);
      REQUIRE(recompose(sliced_partials(av, bv)) == static_cast<std::int64_t>(x) * y);
    }
  }
}

TEST_CASE("recomposition identity on random long vectors") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int len = uniform_int(rng, 1, 249);
    std::vector<int> a(len), b(len);
    for (auto& v : a) v = uniform_int(rng, -255, 255);
    for (auto& v : b) v = uniform_int(rng, -255, 255);
    const auto sa = sliced(a), sb = sliced(b);
    CHECK(recompose(sliced_partials(sa, sb)) == oracle_dot(sa, sb));
  }
}

TEST_CASE("partial sums stay within their per-lane bounds") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const int len = uniform_int(rng, 1, 249);
    std::vector<int> a(len), b(len);
    for (auto& v : a) v = uniform_int(rng, -255, 255);
    for (auto& v : b) v = uniform_int(rng, -255, 255);
    const PartialSums p = sliced_partials(sliced(a), sliced(b));
    CHECK(std::abs(p.hh) <= 225LL * len);
    CHECK(std::abs(p.hl) <= 2LL * 225 * len);
    CHECK(std::abs(p.ll) <= 225LL * len);
  }
}

TEST_CASE("sliced_partials is linear under concatenation") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int l1 = uniform_int(rng, 1, 40), l2 = uniform_int(rng, 1, 40);
    std::vector<int> a1(l1), b1(l1), a2(l2), b2(l2);
    for (auto* vec : {&a1, &b1, &a2, &b2}) {
      for (auto& v : *vec) v = uniform_int(rng, -255, 255);
    }
    std::vector<int> a = a1, b = b1;
    a.insert(a.end(), a2.begin(), a2.end());
    b.insert(b.end(), b2.begin(), b2.end());
    const PartialSums whole = sliced_partials(sliced(a), sliced(b));
    const PartialSums parts =
        sliced_partials(sliced(a1), sliced(b1)) + sliced_partials(sliced(a2), sliced(b2));
    CHECK(whole == parts);
  }
}

TEST_CASE("IntMatrix shape checks and random fill") {
  CHECK_THROWS_AS(IntMatrix(0, 3), ShapeError);
  const std::vector<int> vals{1, -2, 3, 4, -5, 6};
  const IntMatrix m = IntMatrix::from_values(2, 3, vals);
  CHECK(m.at(0, 0).value() == 1);
  CHECK(m.at(1, 2).value() == 6);
  CHECK(m.row(1)[0].value() == 4);
  CHECK_THROWS_AS(IntMatrix::from_values(2, 3, std::vector<int>{1, 2}), ShapeError);

  std::mt19937_64 rng(3);
  const IntMatrix r = IntMatrix::random(5, 7, rng);
  for (std::int64_t i = 0; i < r.rows(); ++i) {
    for (std::int64_t j = 0; j < r.cols(); ++j) {
      CHECK(r.at(i, j).value() >= -255);
      CHECK(r.at(i, j).value() <= 255);
    }
  }
}
