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
#include <functional>
#include <vector>

#include "spogasim/arch.hpp"
#include "spogasim/bitslice.hpp"
#include "spogasim/photonic.hpp"

namespace spogasim {

// Decomposes GEMM jobs onto a core's spatial (N operand positions, M
// parallel dot products) and temporal dimensions, and drives the photonic
// dataflow models step by step.

/// One T x K by K x M_cols integer GEMM.
struct GemmJob {
  std::int64_t t_rows = 1;
  std::int64_t k_depth = 1;
  std::int64_t m_cols = 1;

  friend bool operator==(const GemmJob&, const GemmJob&) = default;
};

/// Convolution layer geometry (square stride/padding, dilation 1).
struct ConvLayer {
  int in_h = 1;
  int in_w = 1;
  int in_c = 1;
  int out_c = 1;
  int kernel_h = 1;
  int kernel_w = 1;
  int stride = 1;
  int padding = 0;
};

/// Lower a convolution to its GEMM: T = out_h*out_w, K = kh*kw*in_c,
/// M = out_c, with out = floor((in + 2*pad - kernel)/stride) + 1.
/// Throws ShapeError when the geometry yields non-positive output dims.
GemmJob im2col(const ConvLayer& layer);

/// One scheduled transaction: input row `row`, operand positions
/// [k_begin, k_end), output columns [col_begin, col_end).
struct MappingStep {
  std::int64_t row = 0;
  std::int64_t k_begin = 0, k_end = 0;
  std::int64_t col_begin = 0, col_end = 0;

  std::int64_t active_oames() const { return k_end - k_begin; }
  std::int64_t active_dpus() const { return col_end - col_begin; }
};

/// Deterministic row-major chunk schedule (row outer, k chunk middle,
/// column chunk inner) covering every (t, k, m) element exactly once.
/// Steps are synthesized on demand from the chunk grid, so plans for
/// full CNN layers stay O(1) in memory.
class MappingPlan {
 public:
  MappingPlan(const GemmJob& job, int n_vector, int m_parallel);

  const GemmJob& job() const { return job_; }
  int n_vector() const { return n_vector_; }
  int m_parallel() const { return m_parallel_; }

  std::int64_t k_chunks() const { return k_chunks_; }
  std::int64_t m_chunks() const { return m_chunks_; }
  std::int64_t steps_total() const { return job_.t_rows * k_chunks_ * m_chunks_; }

  /// Step at schedule position `index` in [0, steps_total()).
  MappingStep step(std::int64_t index) const;

  void for_each_step(const std::function<void(const MappingStep&)>& fn) const;

  /// Dot products issued (one per active DPU per step over all k chunks):
  /// t_rows * k_chunks * m_cols.
  std::int64_t dot_products() const { return job_.t_rows * k_chunks_ * job_.m_cols; }

  /// Occupancy totals for power gating studies.
  std::int64_t active_oame_steps() const { return job_.t_rows * m_chunks_ * job_.k_depth; }
  std::int64_t active_dpu_steps() const { return dot_products(); }

 private:
  GemmJob job_;
  int n_vector_;
  int m_parallel_;
  std::int64_t k_chunks_;
  std::int64_t m_chunks_;
};

/// Build the schedule for a job on a core configuration. Any job size is
/// accepted; oversize dimensions fold across chunks.
MappingPlan plan(const GemmJob& job, const ArchConfig& arch);

enum class ExecMode { Functional, CountsOnly };

struct ExecResult {
  /// Row-major T x M_cols output; empty in counts-only mode.
  std::vector<std::int64_t> output;
  ConversionTally tally;
  std::int64_t dot_products = 0;
};

/// Run the plan through the dataflow model selected by arch.organization
/// (Mwa -> SPOGA DPU path, Maw/Amw -> bit-sliced baseline path).
/// Functional mode requires operand matrices shaped (T x K) and (K x M);
/// throws ShapeError when they disagree with the plan. Partial dot products
/// from successive k chunks are digitized per step and accumulated
/// digitally. Results are deterministic for any worker_count.
ExecResult execute_plan(const MappingPlan& mapping, const ArchConfig& arch, ExecMode mode,
                        const IntMatrix* a = nullptr, const IntMatrix* b = nullptr,
                        const AdcModel& adc = AdcModel::make_ideal(), int worker_count = 1);

}  // namespace spogasim
