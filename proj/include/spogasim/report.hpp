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

#include <string>
#include <vector>

#include "spogasim/arch.hpp"
#include "spogasim/perf.hpp"

namespace spogasim {

// CSV and SVG emission. CSV is the authoritative output; SVG bar charts are
// a convenience view. All writers format numbers deterministically so
// reruns with identical configs produce byte-identical files.

/// Per-layer run report CSV (one row per layer, then one `frame` summary
/// row). Column schema is documented in README.md and stable.
std::string run_report_csv(const RunReport& report);

/// Comparison CSV: per (model, arch) metric rows, then per-arch gmean rows,
/// then gmean ratio rows against the baseline architecture.
std::string comparison_csv(const ComparisonTable& table);

/// Scalability CSV: bundled rows (source=paper) and optional estimator rows
/// (source=estimate).
struct ScalabilityRow {
  std::string organization;
  double data_rate_gsps = 0.0;
  std::optional<double> laser_power_dbm;
  int n_vector = 0;
  int m_dot_products = 0;
  std::string source;  // "paper" or "estimate"
};
std::string scalability_csv(const std::vector<ScalabilityRow>& rows);

/// Grouped bar chart: one group per model, one bar per architecture.
/// values[g][s] is the bar height for group g, series s. Heights must be
/// positive when log_scale is set.
std::string svg_grouped_bars(const std::string& title, const std::string& y_label,
                             const std::vector<std::string>& group_labels,
                             const std::vector<std::string>& series_labels,
                             const std::vector<std::vector<double>>& values, bool log_scale);

}  // namespace spogasim
