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
#include <map>
#include <string>
#include <vector>

#include "spogasim/arch.hpp"
#include "spogasim/mapper.hpp"
#include "spogasim/photonic.hpp"
#include "spogasim/workload.hpp"

namespace spogasim {

// Converts mapping plans and conversion tallies into latency, energy, power,
// and area, and derives FPS, FPS/W, and FPS/W/mm^2 per workload per
// architecture.
//
// ADC/DAC area and power by data rate default to published converter
// figures; every other cost entry is a labeled estimate (see
// data/cost_defaults.txt) and can be overridden from a cost-table file.
// Per-conversion ADC/DAC event energy is referenced to a 1 ns conversion
// window: E_event = rated_power * 1 ns.

struct ConverterCost {
  double area_mm2 = 0.0;
  double power_mw = 0.0;
};

struct ComponentCostTable {
  std::map<int, ConverterCost> adc;  // keyed by data rate in GS/s
  std::map<int, ConverterCost> dac;

  double laser_wallplug_mw_per_optical_mw = 10.0;
  double laser_area_mm2_per_line = 0.02;
  double mrr_tuning_mw = 0.02;
  double mrr_area_mm2 = 0.00025;
  double receiver_oe_event_pj = 0.5;
  double receiver_area_mm2 = 0.004;
  double capbank_static_mw = 0.05;
  double capbank_area_mm2 = 0.001;
  double deas_op_pj = 0.1;
  int deas_pipeline_depth = 4;
  double deas_area_mm2 = 0.5;
  double memory_byte_pj = 1.0;
  double memory_area_mm2 = 16.0;

  /// Built-in defaults (same values as the bundled cost file).
  static ComponentCostTable defaults();
  /// defaults() with overrides from a key=value cost file applied on top.
  static ComponentCostTable load(const std::filesystem::path& file);

  /// Converter entries for a data rate; throws ConfigError naming the
  /// missing entry (e.g. "adc.3.power_mw").
  const ConverterCost& adc_at(double data_rate_gsps) const;
  const ConverterCost& dac_at(double data_rate_gsps) const;

  /// Rejects negative entries; throws ConfigError.
  void validate() const;
};

/// Instantiated component counts for one GEMM core of a given organization.
struct CoreGeometry {
  std::int64_t weight_rings = 0;     // weighting MRRs (OAMUs for the Mwa core)
  std::int64_t modulator_rings = 0;  // input modulation MRRs
  std::int64_t input_dacs = 0;       // DACs switching every time step
  std::int64_t adcs = 0;
  std::int64_t receivers = 0;        // BPD/BPCA front ends
  std::int64_t capacitor_banks = 0;  // Mwa only
  std::int64_t laser_lines = 0;
  int slice_step_factor = 1;         // core-steps per scheduled GEMM step
  bool has_deas = false;             // shares one DEAS + buffer per 4 cores
};

CoreGeometry core_geometry(const ArchConfig& arch);

struct AcceleratorBudget {
  int core_count = 1;
  ArchConfig arch;
  ComponentCostTable costs;
};

/// Total silicon + laser footprint in mm^2. A zero-core budget is 0.
double area_mm2(const AcceleratorBudget& budget);

/// steps/(rate * 1e9) + overhead_steps/(rate * 1e9).
double latency_seconds(std::int64_t steps, double data_rate_gsps, double overhead_steps);

/// Energy itemization for one layer (joules).
struct EnergyBreakdown {
  double laser = 0.0;
  double dac = 0.0;      // input modulation DACs
  double tuning = 0.0;   // MRR thermal tuning + capacitor-bank static
  double oe = 0.0;       // per-O/E-conversion receiver events
  double adc = 0.0;      // per-ADC-conversion events
  double deas = 0.0;
  double memory = 0.0;

  double total() const { return laser + dac + tuning + oe + adc + deas + memory; }
  EnergyBreakdown& operator+=(const EnergyBreakdown& o);
};

/// Per-step occupancy fractions used when occupancy gating is enabled;
/// 1.0 models full laser/modulation power on partially filled steps.
/// Gating scales the laser by the fraction matching its line count (DPUs
/// for the Mwa core, operand positions for the baselines) and the input
/// DACs by operand occupancy; thermal tuning stays on regardless.
struct OccupancyFactors {
  double oame_fraction = 1.0;
  double dpu_fraction = 1.0;
};

/// Component-sum energy model. `core_steps` are active core time steps
/// (scheduled steps times the organization's slice factor); per-event terms
/// come from the conversion tally.
EnergyBreakdown energy_joules(std::int64_t core_steps, const ConversionTally& tally,
                              const ArchConfig& arch, const ComponentCostTable& costs,
                              const OccupancyFactors& occupancy = {});

struct AccountingOptions {
  ExecMode mode = ExecMode::CountsOnly;
  AdcModel adc = AdcModel::make_ideal();
  bool gate_occupancy = false;
  /// Layers run sequentially on the full accelerator by default; pipelined
  /// mode bounds the frame interval by the slowest layer instead
  /// (steady-state throughput of a layer pipeline; exploration only).
  bool layer_pipelined = false;
  int worker_count = 1;
  std::uint64_t seed = 1337;
};

struct LayerAccount {
  std::string name;
  GemmJob job;                  // per-group job shape
  std::int64_t group_jobs = 1;  // identical jobs (grouped convolutions)
  std::int64_t scheduled_steps = 0;  // plan steps x groups
  std::int64_t core_steps = 0;       // scheduled_steps x slice factor
  std::int64_t dot_products = 0;
  ConversionTally tally;
  double latency_s = 0.0;
  EnergyBreakdown energy;
};

struct RunReport {
  std::string model;
  std::string arch_display;
  int core_count = 1;
  std::vector<LayerAccount> layers;

  double frame_latency_s = 0.0;
  double frame_energy_j = 0.0;
  EnergyBreakdown frame_energy;
  ConversionTally frame_tally;

  double area_mm2 = 0.0;
  double fps = 0.0;
  double power_w = 0.0;  // frame energy over frame latency
  double fps_per_watt = 0.0;
  double fps_per_watt_per_mm2 = 0.0;
};

/// Account a whole workload: layers run sequentially with all cores
/// cooperating on each layer. In functional mode each distinct layer job is
/// additionally executed through the dataflow model on seeded random
/// operands (tallies are data-independent, so group replicas are scaled
/// rather than re-executed).
RunReport account_workload(const std::string& model_name, const std::vector<LayerJobs>& layers,
                           const AcceleratorBudget& budget, const AccountingOptions& options);

struct MetricRow {
  std::string model;
  std::string arch;
  double fps = 0.0;
  double fps_per_watt = 0.0;
  double fps_per_watt_per_mm2 = 0.0;
};

struct RatioRow {
  std::string arch;  // ratio of this arch over the baseline, gmean over models
  double fps_ratio = 1.0;
  double fps_per_watt_ratio = 1.0;
  double fps_per_watt_per_mm2_ratio = 1.0;
};

struct ComparisonTable {
  std::vector<MetricRow> rows;    // one per (model, arch), model-major
  std::vector<MetricRow> gmeans;  // one per arch, model == "gmean"
  std::string baseline_arch;
  std::vector<RatioRow> ratios;   // one per non-baseline arch
};

/// Cross-architecture comparison. `runs` is model-major (all archs for the
/// first model, then the next model, ...). Throws ConfigError on an empty
/// workload or fewer than two architectures.
ComparisonTable compare_runs(const std::vector<RunReport>& runs,
                             const std::string& baseline_arch);

double geometric_mean(const std::vector<double>& values);

}  // namespace spogasim
