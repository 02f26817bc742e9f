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

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace spogasim {

// Exact integer reference arithmetic for nibble-sliced signed byte operands.
// Operands are sign-magnitude: an 8-bit magnitude split into a most and a
// least significant nibble, so every value in [-255, 255] is representable
// and zero is canonically positive. All photonic dataflow models are checked
// against these routines.

/// A signed byte-magnitude operand together with its nibble slices.
/// Invariants: magnitude == 16*msn + lsn, and sign == +1 when magnitude == 0.
struct SlicedInt8 {
  std::int8_t sign = +1;      // +1 or -1
  std::uint8_t magnitude = 0; // 0..255
  std::uint8_t msn = 0;       // 0..15
  std::uint8_t lsn = 0;       // 0..15

  int value() const { return sign * static_cast<int>(magnitude); }

  friend bool operator==(const SlicedInt8&, const SlicedInt8&) = default;
};

/// Slice a value in [-255, 255] into canonical sign-magnitude nibble form.
/// Throws RangeError outside that range.
SlicedInt8 slice(int value);

/// The three radix-lane partial sums of a nibble-sliced dot product.
/// hh/hl/ll accumulate the MSNxMSN, the two cross, and the LSNxLSN product
/// terms, each signed by the sign of the parent byte-level product.
struct PartialSums {
  std::int64_t hh = 0;
  std::int64_t hl = 0;
  std::int64_t ll = 0;

  PartialSums& operator+=(const PartialSums& o) {
    hh += o.hh;
    hl += o.hl;
    ll += o.ll;
    return *this;
  }
  friend PartialSums operator+(PartialSums a, const PartialSums& b) { return a += b; }
  friend bool operator==(const PartialSums&, const PartialSums&) = default;
};

/// Exact dot product, computed directly on the signed byte values.
/// Throws ShapeError on length mismatch.
std::int64_t oracle_dot(std::span<const SlicedInt8> a, std::span<const SlicedInt8> b);

/// Dot product decomposed into the three radix-lane partial sums.
/// Throws ShapeError on length mismatch.
PartialSums sliced_partials(std::span<const SlicedInt8> a, std::span<const SlicedInt8> b);

/// Radix recomposition: 256*hh + 16*hl + ll.
std::int64_t recompose(const PartialSums& p) noexcept;

/// Row-major matrix of sliced operands.
class IntMatrix {
 public:
  IntMatrix(std::int64_t rows, std::int64_t cols);

  /// Build from plain integer values (row-major); each value is sliced.
  static IntMatrix from_values(std::int64_t rows, std::int64_t cols,
                               std::span<const int> values);

  /// Uniform random values in [-255, 255].
  static IntMatrix random(std::int64_t rows, std::int64_t cols, std::mt19937_64& rng);

  std::int64_t rows() const { return rows_; }
  std::int64_t cols() const { return cols_; }

  const SlicedInt8& at(std::int64_t r, std::int64_t c) const {
    return elems_[static_cast<std::size_t>(r * cols_ + c)];
  }
  SlicedInt8& at(std::int64_t r, std::int64_t c) {
    return elems_[static_cast<std::size_t>(r * cols_ + c)];
  }

  /// Contiguous view of one row.
  std::span<const SlicedInt8> row(std::int64_t r) const {
    return {elems_.data() + r * cols_, static_cast<std::size_t>(cols_)};
  }

 private:
  std::int64_t rows_;
  std::int64_t cols_;
  std::vector<SlicedInt8> elems_;
};

/// Uniform integer in [lo, hi] via rejection sampling; bit-identical across
/// platforms, unlike std::uniform_int_distribution.
int uniform_int(std::mt19937_64& rng, int lo, int hi);

}  // namespace spogasim
