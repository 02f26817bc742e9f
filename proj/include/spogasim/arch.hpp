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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace spogasim {

// Registry of the modeled GEMM core organizations and their published
// per-core capacities (vector length N, parallel dot products M), plus a
// parameterized optical link-budget estimator for what-if exploration.
//
// The bundled capacity table is authoritative data; the estimator is a
// clearly labeled approximation validated only by monotonicity and trend
// properties, never by equality with the published numbers.

/// GEMM core block ordering. Maw is the HOLYLIGHT-style core, Amw the
/// DEAPCNN-style core, Mwa the SPOGA core.
enum class CoreOrganization { Maw, Amw, Mwa };

std::string org_name(CoreOrganization org);
/// Accepts MAW/AMW/MWA and the aliases HOLYLIGHT/DEAPCNN/SPOGA
/// (case-insensitive). Throws LookupError on anything else.
CoreOrganization parse_org(const std::string& name);

/// Structural parameters of one GEMM core configuration.
struct ArchConfig {
  CoreOrganization organization = CoreOrganization::Mwa;
  double data_rate_gsps = 1.0;
  std::optional<double> laser_power_dbm;  // unset where the source omits it
  int n_vector = 1;        // max dot-product vector length N
  int m_dot_products = 1;  // dot products produced in parallel M
  int dpu_count = 1;       // per-step parallel units (== M)
  int operand_bits = 4;    // analog operand width (2^4 levels)
  std::string display_name;
};

/// The bundled scalability dataset (one row per published configuration).
class ScalabilityTable {
 public:
  /// Parse the dataset file; throws ParseError/IoError on malformed input.
  static ScalabilityTable load(const std::filesystem::path& file);

  /// Exact row lookup. laser_power_dbm is required for Mwa rows and must be
  /// omitted for Maw/Amw rows; a LookupError lists the valid keys.
  ArchConfig lookup(CoreOrganization org, double data_rate_gsps,
                    std::optional<double> laser_power_dbm = std::nullopt) const;

  const std::vector<ArchConfig>& rows() const { return rows_; }

 private:
  std::vector<ArchConfig> rows_;
};

/// Parse arch selector strings like "SPOGA_10", "MWA_1@5dBm",
/// "HOLYLIGHT_5", "DEAPCNN_10" into a bundled table row.
/// SPOGA/MWA default to 10 dBm when no @...dBm suffix is given.
ArchConfig parse_arch_selector(const ScalabilityTable& table, const std::string& selector);

/// Inputs to the link-budget estimator. All losses are per device in dB.
struct LinkBudgetParams {
  double laser_power_dbm = 10.0;
  double modulator_loss_db = 4.0;
  double splitter_excess_db_per_stage = 0.2;  // on top of ideal 1:2 split loss
  double mux_through_loss_db = 0.05;          // per ring passed in aggregation
  double filter_drop_loss_db = 1.0;
  double penalty_db = 1.0;                    // crosstalk and margin lump sum
  double detector_sensitivity_dbm = -30.0;    // at 1 GS/s
  double sensitivity_rate_slope_db = 10.0;    // added per decade of data rate
  int analog_levels = 16;                     // 2^operand_bits
  int n_hard_limit = 1024;                    // structural search cap

  /// Load overrides from a key=value file on top of the defaults above.
  static LinkBudgetParams load(const std::filesystem::path& file);
};

struct LinkBudgetResult {
  int n_vector = 0;
  int m_dot_products = 0;
  std::string diagnostic;  // non-empty when the budget is infeasible
};

/// Largest N (and the matching M) such that the per-wavelength received
/// power after modulation, fan-out, and aggregation losses still resolves
/// `analog_levels` levels above detector sensitivity at the given rate.
/// Mwa keeps M fixed at 16 (core structure); Maw/Amw scale square N == M.
/// Returns (0, 0) with a diagnostic when even N == 1 does not close.
LinkBudgetResult solve_link_budget(const LinkBudgetParams& params, CoreOrganization org,
                                   double data_rate_gsps);

/// Directory containing the bundled data files. Resolution order:
/// explicit --data-dir flag (handled by the CLI), SPOGASIM_DATA_DIR
/// environment variable, compiled-in source-tree default.
std::filesystem::path default_data_dir();

}  // namespace spogasim
