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
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace spogasim {

// Batch subcommand implementations behind the CLI front end. Every command
// is deterministic given (options, seed): output files contain no
// timestamps and all floating-point formatting is stable, so reruns are
// byte-identical.

/// Documented process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 2,   // bad flags, selectors, config or cost files
  kExitVerifyFailure = 3, // an oracle sweep found a mismatch
  kExitIoError = 4,       // missing inputs, unwritable outputs
};

struct CommonOptions {
  std::filesystem::path data_dir;  // bundled datasets; empty -> default_data_dir()
  std::filesystem::path out_dir;   // empty -> $SPOGASIM_OUT_DIR or ./out
  std::uint64_t seed = 1337;       // documented default for reproducibility

  std::filesystem::path resolved_data_dir() const;
  std::filesystem::path resolved_out_dir() const;
};

struct VerifyOptions {
  std::int64_t trials = 10000;
  bool exhaustive_int8 = false;  // add the full length-1 operand grid
  bool inject_fault = false;     // test hook: mis-programmed capacitor select
};

/// Oracle-equivalence sweeps over the photonic dataflows; prints one line
/// per suite and the first counterexample on failure.
int cmd_verify(const CommonOptions& common, const VerifyOptions& options, std::ostream& log);

struct SimulateOptions {
  std::string model;  // bundled manifest name or a path
  std::string arch;   // selector, e.g. SPOGA_10, HOLYLIGHT_5, MWA_1@5dBm
  int core_count = 16;
  std::string costs_path;    // empty -> bundled defaults
  std::string adc = "ideal"; // "ideal" or a bit width
  bool functional = false;   // drive the dataflow model instead of counting
  bool gate_occupancy = false;
  bool pipeline_layers = false;  // frame interval = slowest layer
  int threads = 1;
};

/// Per-layer RunReport CSV plus frame summary for one model on one arch.
int cmd_simulate(const CommonOptions& common, const SimulateOptions& options, std::ostream& log);

struct ScalabilityOptions {
  bool paper_rows = true;    // emit the bundled dataset rows
  bool estimate = false;     // add link-budget estimator rows
  int sweep_dbm_lo = 1;      // estimator laser-power sweep (inclusive)
  int sweep_dbm_hi = 10;
  std::string link_params_path;  // key=value overrides for the estimator
};

/// (organization, rate, power) -> (N, M) CSV, bundled rows and optional
/// estimator rows flagged by a source column.
int cmd_scalability(const CommonOptions& common, const ScalabilityOptions& options,
                    std::ostream& log);

struct CompareOptions {
  std::vector<std::string> models;
  std::vector<std::string> archs;
  std::string baseline;  // empty -> first arch
  int core_count = 16;
  std::string costs_path;
  bool iso_area = false;       // scale core counts to the baseline's area
  bool gate_occupancy = false;
  bool pipeline_layers = false;
};

/// Cross-architecture comparison CSV with gmean ratio rows plus grouped
/// bar charts (FPS on a log scale).
int cmd_compare(const CommonOptions& common, const CompareOptions& options, std::ostream& log);

}  // namespace spogasim
