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

#include "spogasim/bitslice.hpp"

#include <cstdlib>
#include <string>

#include "spogasim/errors.hpp"

namespace spogasim {

SlicedInt8 slice(int value) {
  if (value < -255 || value > 255) {
    throw RangeError("slice: value " + std::to_string(value) + " outside [-255, 255]");
  }
  SlicedInt8 s;
  s.sign = static_cast<std::int8_t>(value < 0 ? -1 : +1);  // canonical zero is positive
  s.magnitude = static_cast<std::uint8_t>(std::abs(value));
  s.msn = static_cast<std::uint8_t>(s.magnitude >> 4);
  s.lsn = static_cast<std::uint8_t>(s.magnitude & 0x0F);
  return s;
}

namespace {

void require_equal_lengths(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    throw ShapeError(std::string(op) + ": length mismatch (" + std::to_string(a) +
                     " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

std::int64_t oracle_dot(std::span<const SlicedInt8> a, std::span<const SlicedInt8> b) {
  require_equal_lengths(a.size(), b.size(), "oracle_dot");
  std::int64_t acc = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    acc += static_cast<std::int64_t>(a[k].value()) * b[k].value();
  }
  return acc;
}

PartialSums sliced_partials(std::span<const SlicedInt8> a, std::span<const SlicedInt8> b) {
  require_equal_lengths(a.size(), b.size(), "sliced_partials");
  PartialSums p;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const std::int64_t sgn = static_cast<std::int64_t>(a[k].sign) * b[k].sign;
    p.hh += sgn * a[k].msn * b[k].msn;
    p.hl += sgn * (a[k].msn * b[k].lsn + a[k].lsn * b[k].msn);
    p.ll += sgn * a[k].lsn * b[k].lsn;
  }
  return p;
}

std::int64_t recompose(const PartialSums& p) noexcept {
  return 256 * p.hh + 16 * p.hl + p.ll;
}

IntMatrix::IntMatrix(std::int64_t rows, std::int64_t cols) : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) {
    throw ShapeError("IntMatrix: dimensions must be positive");
  }
  elems_.resize(static_cast<std::size_t>(rows * cols));
}

IntMatrix IntMatrix::from_values(std::int64_t rows, std::int64_t cols,
                                 std::span<const int> values) {
  IntMatrix m(rows, cols);
  if (values.size() != static_cast<std::size_t>(rows * cols)) {
    throw ShapeError("IntMatrix::from_values: element count != rows*cols");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    m.elems_[i] = slice(values[i]);
  }
  return m;
}

IntMatrix IntMatrix::random(std::int64_t rows, std::int64_t cols, std::mt19937_64& rng) {
  IntMatrix m(rows, cols);
  for (auto& e : m.elems_) {
    e = slice(uniform_int(rng, -255, 255));
  }
  return m;
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - lo + 1;
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % span;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return lo + static_cast<int>(draw % span);
}

}  // namespace spogasim
