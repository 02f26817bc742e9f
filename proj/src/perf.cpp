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

#include "spogasim/perf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "spogasim/errors.hpp"
#include "spogasim/textio.hpp"

namespace spogasim {

namespace {

constexpr double kMilliwattToWatt = 1e-3;
constexpr double kPicojouleToJoule = 1e-12;
// Converter events are charged at rated power over a 1 ns conversion window.
constexpr double kConversionWindowS = 1e-9;

double step_seconds(double data_rate_gsps) { return 1.0 / (data_rate_gsps * 1e9); }

}  // namespace

ComponentCostTable ComponentCostTable::defaults() {
  ComponentCostTable t;
  t.adc[1] = {0.002, 2.55};
  t.adc[5] = {0.021, 11};
  t.adc[10] = {0.103, 29};
  t.dac[1] = {0.00007, 0.12};
  t.dac[5] = {0.06, 26};
  t.dac[10] = {0.06, 30};
  return t;
}

namespace {

std::vector<std::string> split_on_dots(const std::string& key) {
  std::vector<std::string> parts;
  std::string token;
  std::istringstream in(key);
  while (std::getline(in, token, '.')) parts.push_back(token);
  return parts;
}

}  // namespace

ComponentCostTable ComponentCostTable::load(const std::filesystem::path& file) {
  ComponentCostTable t = defaults();
  for (const auto& entry : read_key_values(file)) {
    const std::string& key = entry.first;
    const std::string& value = entry.second;
    const std::string ctx = file.string() + " key " + key;
    const std::vector<std::string> fields = split_on_dots(key);
    if (fields.size() == 3 && (fields[0] == "adc" || fields[0] == "dac")) {
      const int rate = static_cast<int>(parse_int(fields[1], ctx));
      ConverterCost& entry = (fields[0] == "adc" ? t.adc : t.dac)[rate];
      if (fields[2] == "area_mm2") entry.area_mm2 = parse_double(value, ctx);
      else if (fields[2] == "power_mw") entry.power_mw = parse_double(value, ctx);
      else throw ParseError(ctx + ": unknown converter attribute");
      continue;
    }
    if (key == "laser.wallplug_mw_per_optical_mw") t.laser_wallplug_mw_per_optical_mw = parse_double(value, ctx);
    else if (key == "laser.area_mm2_per_line") t.laser_area_mm2_per_line = parse_double(value, ctx);
    else if (key == "mrr.tuning_mw") t.mrr_tuning_mw = parse_double(value, ctx);
    else if (key == "mrr.area_mm2") t.mrr_area_mm2 = parse_double(value, ctx);
    else if (key == "receiver.oe_event_pj") t.receiver_oe_event_pj = parse_double(value, ctx);
    else if (key == "receiver.area_mm2") t.receiver_area_mm2 = parse_double(value, ctx);
    else if (key == "capbank.static_mw") t.capbank_static_mw = parse_double(value, ctx);
    else if (key == "capbank.area_mm2") t.capbank_area_mm2 = parse_double(value, ctx);
    else if (key == "deas.op_pj") t.deas_op_pj = parse_double(value, ctx);
    else if (key == "deas.pipeline_depth") t.deas_pipeline_depth = static_cast<int>(parse_int(value, ctx));
    else if (key == "deas.area_mm2") t.deas_area_mm2 = parse_double(value, ctx);
    else if (key == "memory.byte_pj") t.memory_byte_pj = parse_double(value, ctx);
    else if (key == "memory.area_mm2") t.memory_area_mm2 = parse_double(value, ctx);
    else throw ParseError(file.string() + ": unknown cost key '" + key + "'");
  }
  t.validate();
  return t;
}

const ConverterCost& ComponentCostTable::adc_at(double data_rate_gsps) const {
  const int rate = static_cast<int>(std::llround(data_rate_gsps));
  const auto it = adc.find(rate);
  if (it == adc.end()) {
    throw ConfigError("missing cost entry adc." + std::to_string(rate) +
                      ".{area_mm2,power_mw} for data rate " + format_double(data_rate_gsps) +
                      " GS/s");
  }
  return it->second;
}

const ConverterCost& ComponentCostTable::dac_at(double data_rate_gsps) const {
  const int rate = static_cast<int>(std::llround(data_rate_gsps));
  const auto it = dac.find(rate);
  if (it == dac.end()) {
    throw ConfigError("missing cost entry dac." + std::to_string(rate) +
                      ".{area_mm2,power_mw} for data rate " + format_double(data_rate_gsps) +
                      " GS/s");
  }
  return it->second;
}

void ComponentCostTable::validate() const {
  const auto check = [](double v, const char* name) {
    if (v < 0.0 || !std::isfinite(v)) {
      throw ConfigError(std::string("cost table entry ") + name + " must be >= 0");
    }
  };
  for (const auto& [rate, entry] : adc) {
    check(entry.area_mm2, "adc.area_mm2");
    check(entry.power_mw, "adc.power_mw");
  }
  for (const auto& [rate, entry] : dac) {
    check(entry.area_mm2, "dac.area_mm2");
    check(entry.power_mw, "dac.power_mw");
  }
  check(laser_wallplug_mw_per_optical_mw, "laser.wallplug_mw_per_optical_mw");
  check(laser_area_mm2_per_line, "laser.area_mm2_per_line");
  check(mrr_tuning_mw, "mrr.tuning_mw");
  check(mrr_area_mm2, "mrr.area_mm2");
  check(receiver_oe_event_pj, "receiver.oe_event_pj");
  check(receiver_area_mm2, "receiver.area_mm2");
  check(capbank_static_mw, "capbank.static_mw");
  check(capbank_area_mm2, "capbank.area_mm2");
  check(deas_op_pj, "deas.op_pj");
  check(memory_byte_pj, "memory.byte_pj");
  check(deas_area_mm2, "deas.area_mm2");
  check(memory_area_mm2, "memory.area_mm2");
  if (deas_pipeline_depth < 0) {
    throw ConfigError("cost table entry deas.pipeline_depth must be >= 0");
  }
}

CoreGeometry core_geometry(const ArchConfig& arch) {
  CoreGeometry g;
  const std::int64_t n = arch.n_vector;
  const std::int64_t m = arch.m_dot_products;
  const std::int64_t dpus = arch.dpu_count;
  if (arch.organization == CoreOrganization::Mwa) {
    // Modulation happens once per core (modulation-first order); the four
    // modulated carriers per operand position fan out to all DPUs, each of
    // which applies its own weights through per-OAME OAMU rings. The two
    // nibble streams of an operand share DACs across their two carriers.
    g.weight_rings = 4 * n * dpus;
    g.modulator_rings = 4 * n;
    g.input_dacs = 2 * n;
    g.adcs = dpus;          // one final-result ADC per DPU
    g.receivers = 3 * dpus; // three BPCAs per DPU
    g.capacitor_banks = 3 * dpus;
    g.laser_lines = 4 * dpus;
    g.slice_step_factor = 1;
    g.has_deas = false;
  } else {
    // Bit-sliced slice core: N modulators feed M waveguides of N weighting
    // rings each; every waveguide ends in a BPD + ADC. Four such cores team
    // up per GEMM, sharing one DEAS unit and an intermediate buffer.
    g.weight_rings = n * m;
    g.modulator_rings = n;
    g.input_dacs = n;
    g.adcs = m;
    g.receivers = m;
    g.capacitor_banks = 0;
    g.laser_lines = n;
    g.slice_step_factor = 4;
    g.has_deas = true;
  }
  return g;
}

double area_mm2(const AcceleratorBudget& budget) {
  if (budget.core_count <= 0) return 0.0;
  const CoreGeometry g = core_geometry(budget.arch);
  const ComponentCostTable& c = budget.costs;
  const ConverterCost& adc = c.adc_at(budget.arch.data_rate_gsps);
  const ConverterCost& dac = c.dac_at(budget.arch.data_rate_gsps);

  double core = 0.0;
  core += static_cast<double>(g.weight_rings + g.modulator_rings) * c.mrr_area_mm2;
  core += static_cast<double>(g.input_dacs) * dac.area_mm2;
  core += static_cast<double>(g.adcs) * adc.area_mm2;
  core += static_cast<double>(g.receivers) * c.receiver_area_mm2;
  core += static_cast<double>(g.capacitor_banks) * c.capbank_area_mm2;
  core += static_cast<double>(g.laser_lines) * c.laser_area_mm2_per_line;

  double total = budget.core_count * core;
  if (g.has_deas) {
    const int groups = (budget.core_count + 3) / 4;  // one DEAS + buffer per 4 slice cores
    total += groups * (c.deas_area_mm2 + c.memory_area_mm2);
  }
  return total;
}

double latency_seconds(std::int64_t steps, double data_rate_gsps, double overhead_steps) {
  if (steps < 0) {
    throw ConfigError("latency_seconds: steps must be >= 0");
  }
  return (static_cast<double>(steps) + overhead_steps) * step_seconds(data_rate_gsps);
}

EnergyBreakdown& EnergyBreakdown::operator+=(const EnergyBreakdown& o) {
  laser += o.laser;
  dac += o.dac;
  tuning += o.tuning;
  oe += o.oe;
  adc += o.adc;
  deas += o.deas;
  memory += o.memory;
  return *this;
}

EnergyBreakdown energy_joules(std::int64_t core_steps, const ConversionTally& tally,
                              const ArchConfig& arch, const ComponentCostTable& costs,
                              const OccupancyFactors& occupancy) {
  const CoreGeometry g = core_geometry(arch);
  const double dt = step_seconds(arch.data_rate_gsps);
  const double steps = static_cast<double>(core_steps);

  const double laser_line_mw =
      costs.laser_wallplug_mw_per_optical_mw *
      std::pow(10.0, arch.laser_power_dbm.value_or(10.0) / 10.0);

  const double laser_fraction = arch.organization == CoreOrganization::Mwa
                                    ? occupancy.dpu_fraction
                                    : occupancy.oame_fraction;
  EnergyBreakdown e;
  e.laser = steps * g.laser_lines * laser_line_mw * kMilliwattToWatt * dt * laser_fraction;
  e.dac = steps * g.input_dacs * costs.dac_at(arch.data_rate_gsps).power_mw *
          kMilliwattToWatt * dt * occupancy.oame_fraction;
  // Ring tuning is thermal lock, not per-step activity; never gated.
  e.tuning = steps *
             (static_cast<double>(g.weight_rings + g.modulator_rings) * costs.mrr_tuning_mw +
              static_cast<double>(g.capacitor_banks) * costs.capbank_static_mw) *
             kMilliwattToWatt * dt;
  e.oe = static_cast<double>(tally.oe_conversions) * costs.receiver_oe_event_pj *
         kPicojouleToJoule;
  e.adc = static_cast<double>(tally.adc_conversions) *
          costs.adc_at(arch.data_rate_gsps).power_mw * kMilliwattToWatt * kConversionWindowS;
  e.deas = static_cast<double>(tally.deas_shift_adds) * costs.deas_op_pj * kPicojouleToJoule;
  e.memory = static_cast<double>(tally.intermediate_memory_bytes) * costs.memory_byte_pj *
             kPicojouleToJoule;
  return e;
}

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

}  // namespace

RunReport account_workload(const std::string& model_name, const std::vector<LayerJobs>& layers,
                           const AcceleratorBudget& budget, const AccountingOptions& options) {
  if (layers.empty()) {
    throw ConfigError("account_workload: empty workload");
  }
  if (budget.core_count < 1) {
    throw ConfigError("account_workload: core_count must be >= 1");
  }
  budget.costs.validate();

  RunReport report;
  report.model = model_name;
  report.arch_display = budget.arch.display_name.empty()
                            ? org_name(budget.arch.organization)
                            : budget.arch.display_name;
  report.core_count = budget.core_count;
  report.area_mm2 = area_mm2(budget);

  const CoreGeometry geometry = core_geometry(budget.arch);
  std::mt19937_64 rng(options.seed);

  for (const LayerJobs& layer : layers) {
    const MappingPlan mapping = plan(layer.job, budget.arch);

    LayerAccount acct;
    acct.name = layer.name;
    acct.job = layer.job;
    acct.group_jobs = layer.replication;
    acct.scheduled_steps = mapping.steps_total() * layer.replication;
    acct.core_steps = acct.scheduled_steps * geometry.slice_step_factor;
    acct.dot_products = mapping.dot_products() * layer.replication;

    if (options.mode == ExecMode::Functional) {
      // One representative group job is driven through the dataflow model;
      // tallies are data-independent so replicas scale linearly.
      const IntMatrix a = IntMatrix::random(layer.job.t_rows, layer.job.k_depth, rng);
      const IntMatrix b = IntMatrix::random(layer.job.k_depth, layer.job.m_cols, rng);
      const ExecResult run = execute_plan(mapping, budget.arch, ExecMode::Functional, &a, &b,
                                          options.adc, options.worker_count);
      acct.tally = run.tally * layer.replication;
    } else {
      const ExecResult run = execute_plan(mapping, budget.arch, ExecMode::CountsOnly);
      acct.tally = run.tally * layer.replication;
    }

    OccupancyFactors occupancy;
    if (options.gate_occupancy) {
      occupancy.oame_fraction =
          static_cast<double>(mapping.active_oame_steps()) /
          (static_cast<double>(mapping.steps_total()) * budget.arch.n_vector);
      occupancy.dpu_fraction =
          static_cast<double>(mapping.active_dpu_steps()) /
          (static_cast<double>(mapping.steps_total()) * budget.arch.m_dot_products);
    }

    const std::int64_t wall_steps = ceil_div(acct.core_steps, budget.core_count);
    const double overhead_steps = geometry.has_deas ? budget.costs.deas_pipeline_depth : 0;
    acct.latency_s = latency_seconds(wall_steps, budget.arch.data_rate_gsps, overhead_steps);
    acct.energy = energy_joules(acct.core_steps, acct.tally, budget.arch, budget.costs, occupancy);

    report.frame_energy += acct.energy;
    report.frame_tally += acct.tally;
    if (options.layer_pipelined) {
      report.frame_latency_s = std::max(report.frame_latency_s, acct.latency_s);
    } else {
      report.frame_latency_s += acct.latency_s;
    }
    report.layers.push_back(std::move(acct));
  }

  report.frame_energy_j = report.frame_energy.total();
  report.fps = 1.0 / report.frame_latency_s;
  report.power_w = report.frame_energy_j / report.frame_latency_s;
  report.fps_per_watt = report.fps / report.power_w;
  report.fps_per_watt_per_mm2 = report.fps_per_watt / report.area_mm2;
  return report;
}

double geometric_mean(const std::vector<double>& values) {
  if (values.empty()) {
    throw ConfigError("geometric_mean: empty input");
  }
  double log_sum = 0.0;
  for (double v : values) {
    if (!(v > 0.0)) {
      throw ConfigError("geometric_mean: values must be positive");
    }
    log_sum += std::log(v);
  }
  return std::exp(log_sum / static_cast<double>(values.size()));
}

ComparisonTable compare_runs(const std::vector<RunReport>& runs,
                             const std::string& baseline_arch) {
  if (runs.empty()) {
    throw ConfigError("compare_runs: empty workload");
  }
  // Recover the model-major (model, arch) grid.
  std::vector<std::string> models;
  std::vector<std::string> archs;
  for (const RunReport& run : runs) {
    if (models.empty() || models.back() != run.model) {
      models.push_back(run.model);
    }
  }
  const std::size_t arch_count = runs.size() / models.size();
  if (arch_count < 2 || runs.size() != models.size() * arch_count) {
    throw ConfigError("compare_runs: need >= 2 architectures per model");
  }
  for (std::size_t j = 0; j < arch_count; ++j) {
    archs.push_back(runs[j].arch_display);
  }

  ComparisonTable table;
  table.baseline_arch = baseline_arch;
  std::size_t baseline_index = arch_count;
  for (std::size_t j = 0; j < arch_count; ++j) {
    if (archs[j] == baseline_arch) {
      baseline_index = j;
      break;
    }
  }
  if (baseline_index == arch_count) {
    throw ConfigError("compare_runs: baseline '" + baseline_arch +
                      "' is not among the compared architectures");
  }

  const auto metrics_at = [&](std::size_t model_i, std::size_t arch_j) -> const RunReport& {
    return runs[model_i * arch_count + arch_j];
  };

  for (std::size_t i = 0; i < models.size(); ++i) {
    for (std::size_t j = 0; j < arch_count; ++j) {
      const RunReport& r = metrics_at(i, j);
      table.rows.push_back({r.model, r.arch_display, r.fps, r.fps_per_watt,
                            r.fps_per_watt_per_mm2});
    }
  }
  for (std::size_t j = 0; j < arch_count; ++j) {
    std::vector<double> fps, fpw, fpwa;
    for (std::size_t i = 0; i < models.size(); ++i) {
      const RunReport& r = metrics_at(i, j);
      fps.push_back(r.fps);
      fpw.push_back(r.fps_per_watt);
      fpwa.push_back(r.fps_per_watt_per_mm2);
    }
    table.gmeans.push_back({"gmean", archs[j], geometric_mean(fps), geometric_mean(fpw),
                            geometric_mean(fpwa)});
  }
  for (std::size_t j = 0; j < arch_count; ++j) {
    if (j == baseline_index) continue;
    std::vector<double> fps, fpw, fpwa;
    for (std::size_t i = 0; i < models.size(); ++i) {
      const RunReport& r = metrics_at(i, j);
      const RunReport& base = metrics_at(i, baseline_index);
      fps.push_back(r.fps / base.fps);
      fpw.push_back(r.fps_per_watt / base.fps_per_watt);
      fpwa.push_back(r.fps_per_watt_per_mm2 / base.fps_per_watt_per_mm2);
    }
    table.ratios.push_back({archs[j], geometric_mean(fps), geometric_mean(fpw),
                            geometric_mean(fpwa)});
  }
  return table;
}

}  // namespace spogasim
