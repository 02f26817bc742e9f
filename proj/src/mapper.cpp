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

#include "spogasim/mapper.hpp"

#include <algorithm>
#include <string>
#include <thread>

#include "spogasim/errors.hpp"

namespace spogasim {

GemmJob im2col(const ConvLayer& layer) {
  if (layer.in_h < 1 || layer.in_w < 1 || layer.in_c < 1 || layer.out_c < 1 ||
      layer.kernel_h < 1 || layer.kernel_w < 1 || layer.stride < 1 || layer.padding < 0) {
    throw ShapeError("im2col: invalid layer geometry");
  }
  const int out_h = (layer.in_h + 2 * layer.padding - layer.kernel_h) / layer.stride + 1;
  const int out_w = (layer.in_w + 2 * layer.padding - layer.kernel_w) / layer.stride + 1;
  if (layer.in_h + 2 * layer.padding < layer.kernel_h ||
      layer.in_w + 2 * layer.padding < layer.kernel_w || out_h < 1 || out_w < 1) {
    throw ShapeError("im2col: kernel does not fit the padded input");
  }
  GemmJob job;
  job.t_rows = static_cast<std::int64_t>(out_h) * out_w;
  job.k_depth = static_cast<std::int64_t>(layer.kernel_h) * layer.kernel_w * layer.in_c;
  job.m_cols = layer.out_c;
  return job;
}

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

}  // namespace

MappingPlan::MappingPlan(const GemmJob& job, int n_vector, int m_parallel)
    : job_(job), n_vector_(n_vector), m_parallel_(m_parallel) {
  if (job.t_rows < 1 || job.k_depth < 1 || job.m_cols < 1) {
    throw ShapeError("MappingPlan: job dimensions must be positive");
  }
  if (n_vector < 1 || m_parallel < 1) {
    throw ConfigError("MappingPlan: core capacities must be positive");
  }
  k_chunks_ = ceil_div(job.k_depth, n_vector);
  m_chunks_ = ceil_div(job.m_cols, m_parallel);
}

MappingStep MappingPlan::step(std::int64_t index) const {
  const std::int64_t per_row = k_chunks_ * m_chunks_;
  MappingStep s;
  s.row = index / per_row;
  const std::int64_t rem = index % per_row;
  const std::int64_t kc = rem / m_chunks_;
  const std::int64_t mc = rem % m_chunks_;
  s.k_begin = kc * n_vector_;
  s.k_end = std::min<std::int64_t>(s.k_begin + n_vector_, job_.k_depth);
  s.col_begin = mc * m_parallel_;
  s.col_end = std::min<std::int64_t>(s.col_begin + m_parallel_, job_.m_cols);
  return s;
}

void MappingPlan::for_each_step(const std::function<void(const MappingStep&)>& fn) const {
  const std::int64_t total = steps_total();
  for (std::int64_t i = 0; i < total; ++i) fn(step(i));
}

MappingPlan plan(const GemmJob& job, const ArchConfig& arch) {
  return MappingPlan(job, arch.n_vector, arch.m_dot_products);
}

namespace {

ConversionTally per_dot_tally(const ArchConfig& arch) {
  if (arch.organization == CoreOrganization::Mwa) {
    return {3, 1, 0, 0};
  }
  return {4, 4, 3, 4 * baseline_intermediate_bits(arch.n_vector) / 8};
}

DotResult dispatch_dot(const ArchConfig& arch, const AdcModel& adc,
                       std::span<const SlicedInt8> a, std::span<const SlicedInt8> b) {
  if (arch.organization == CoreOrganization::Mwa) {
    return dpu_dot(DpuConfig{arch.n_vector, adc}, a, b);
  }
  const BaselineOrg org =
      arch.organization == CoreOrganization::Maw ? BaselineOrg::Maw : BaselineOrg::Amw;
  return baseline_dot(BaselineConfig{org, arch.n_vector, adc}, a, b);
}

// Execute every step whose row falls in [row_begin, row_end), accumulating
// the conversion tally of each issued dot product.
void run_rows(const MappingPlan& mapping, const ArchConfig& arch, const AdcModel& adc,
              const IntMatrix& a, const IntMatrix& b, std::int64_t row_begin,
              std::int64_t row_end, std::vector<std::int64_t>& out, ConversionTally& tally) {
  const GemmJob& job = mapping.job();
  std::vector<SlicedInt8> weight_column(static_cast<std::size_t>(mapping.n_vector()));
  const std::int64_t per_row = mapping.k_chunks() * mapping.m_chunks();
  for (std::int64_t row = row_begin; row < row_end; ++row) {
    for (std::int64_t i = 0; i < per_row; ++i) {
      const MappingStep step = mapping.step(row * per_row + i);
      const auto a_slice = a.row(step.row).subspan(
          static_cast<std::size_t>(step.k_begin),
          static_cast<std::size_t>(step.k_end - step.k_begin));
      for (std::int64_t col = step.col_begin; col < step.col_end; ++col) {
        const std::size_t len = static_cast<std::size_t>(step.k_end - step.k_begin);
        for (std::size_t k = 0; k < len; ++k) {
          weight_column[k] = b.at(step.k_begin + static_cast<std::int64_t>(k), col);
        }
        const DotResult dot = dispatch_dot(arch, adc, a_slice,
                                           std::span<const SlicedInt8>(weight_column.data(), len));
        out[static_cast<std::size_t>(step.row * job.m_cols + col)] += dot.value;
        tally += dot.tally;
      }
    }
  }
}

}  // namespace

ExecResult execute_plan(const MappingPlan& mapping, const ArchConfig& arch, ExecMode mode,
                        const IntMatrix* a, const IntMatrix* b, const AdcModel& adc,
                        int worker_count) {
  ExecResult result;
  result.dot_products = mapping.dot_products();
  if (mode == ExecMode::CountsOnly) {
    result.tally = per_dot_tally(arch) * result.dot_products;
    return result;
  }

  const GemmJob& job = mapping.job();
  if (a == nullptr || b == nullptr) {
    throw ConfigError("execute_plan: functional mode requires operand matrices");
  }
  if (a->rows() != job.t_rows || a->cols() != job.k_depth || b->rows() != job.k_depth ||
      b->cols() != job.m_cols) {
    throw ShapeError("execute_plan: operand shapes (" + std::to_string(a->rows()) + "x" +
                     std::to_string(a->cols()) + ")*(" + std::to_string(b->rows()) + "x" +
                     std::to_string(b->cols()) + ") do not match the planned job");
  }

  result.output.assign(static_cast<std::size_t>(job.t_rows * job.m_cols), 0);
  const int workers = std::clamp<int>(worker_count, 1,
                                      static_cast<int>(std::min<std::int64_t>(job.t_rows, 64)));
  if (workers == 1) {
    run_rows(mapping, arch, adc, *a, *b, 0, job.t_rows, result.output, result.tally);
    return result;
  }

  // Rows are independent (k-chunk accumulation stays within a row), so the
  // row space is partitioned over workers; each writes disjoint output rows.
  // Per-worker tallies reduce in worker order.
  std::vector<std::thread> pool;
  std::vector<ConversionTally> tallies(static_cast<std::size_t>(workers));
  pool.reserve(static_cast<std::size_t>(workers));
  const std::int64_t rows_per_worker = ceil_div(job.t_rows, workers);
  for (int w = 0; w < workers; ++w) {
    const std::int64_t begin = w * rows_per_worker;
    const std::int64_t end = std::min<std::int64_t>(begin + rows_per_worker, job.t_rows);
    if (begin >= end) break;
    pool.emplace_back([&, w, begin, end] {
      run_rows(mapping, arch, adc, *a, *b, begin, end, result.output, tallies[w]);
    });
  }
  for (auto& t : pool) t.join();
  for (const ConversionTally& t : tallies) result.tally += t;
  return result;
}

}  // namespace spogasim
