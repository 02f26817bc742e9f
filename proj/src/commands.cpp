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

#include "spogasim/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <ostream>
#include <sstream>

#include "spogasim/arch.hpp"
#include "spogasim/bitslice.hpp"
#include "spogasim/errors.hpp"
#include "spogasim/mapper.hpp"
#include "spogasim/perf.hpp"
#include "spogasim/photonic.hpp"
#include "spogasim/report.hpp"
#include "spogasim/textio.hpp"
#include "spogasim/workload.hpp"

namespace spogasim {

namespace {

constexpr int kMaxSweepLength = 249;  // largest bundled vector capacity

std::filesystem::path ensure_out_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string());
  }
  return dir;
}

int map_error(const Error& e, std::ostream& log) {
  log << "error: " << e.what() << "\n";
  if (dynamic_cast<const IoError*>(&e)) return kExitIoError;
  return kExitConfigError;
}

AdcModel parse_adc(const std::string& mode, int capacity) {
  if (mode == "ideal") return AdcModel::make_ideal();
  const int bits = static_cast<int>(parse_int(mode, "--adc"));
  // Full scale spans the worst-case readout at the core's vector capacity.
  return AdcModel::finite(bits, static_cast<double>(capacity) * 255.0 * 255.0);
}

ComponentCostTable load_costs(const CommonOptions& common, const std::string& costs_path) {
  if (!costs_path.empty()) {
    return ComponentCostTable::load(costs_path);
  }
  const auto bundled = common.resolved_data_dir() / "cost_defaults.txt";
  if (std::filesystem::exists(bundled)) {
    return ComponentCostTable::load(bundled);
  }
  return ComponentCostTable::defaults();
}

ScalabilityTable load_table(const CommonOptions& common) {
  return ScalabilityTable::load(common.resolved_data_dir() / "scalability_table.txt");
}

void echo_config(const std::filesystem::path& out_dir, const std::string& command,
                 const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ostringstream out;
  out << "# effective configuration (precedence: CLI flags > config file > defaults)\n";
  out << "command = " << command << "\n";
  for (const auto& [key, value] : entries) {
    out << key << " = " << value << "\n";
  }
  write_text_file(out_dir / "effective_config.txt", out.str());
}

std::vector<SlicedInt8> random_vector(std::mt19937_64& rng, int length) {
  std::vector<SlicedInt8> v(static_cast<std::size_t>(length));
  for (auto& e : v) e = slice(uniform_int(rng, -255, 255));
  return v;
}

std::string show_vector(std::span<const SlicedInt8> v, std::size_t limit = 8) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < v.size() && i < limit; ++i) {
    if (i) os << ", ";
    os << v[i].value();
  }
  if (v.size() > limit) os << ", ... (" << v.size() << " total)";
  os << "]";
  return os.str();
}

}  // namespace

std::filesystem::path CommonOptions::resolved_data_dir() const {
  return data_dir.empty() ? default_data_dir() : data_dir;
}

std::filesystem::path CommonOptions::resolved_out_dir() const {
  if (!out_dir.empty()) return out_dir;
  if (const char* env = std::getenv("SPOGASIM_OUT_DIR"); env && *env) return env;
  return "out";
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

namespace {

struct VerifyState {
  std::int64_t checked = 0;
  std::int64_t mismatches = 0;
  std::string first_counterexample;

  void record(bool ok, const std::function<std::string()>& describe) {
    ++checked;
    if (!ok) {
      if (mismatches == 0) first_counterexample = describe();
      ++mismatches;
    }
  }
};

// Full DPU pipeline with an optionally mis-programmed radix-16 capacitor;
// used to prove the harness catches wiring faults.
std::int64_t dpu_pipeline_value(std::span<const SlicedInt8> a, std::span<const SlicedInt8> b,
                                bool fault) {
  std::vector<OameState> oames(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) oames[k] = oame_evaluate(a[k], b[k]);
  const LaneGroup lanes = route_to_lanes(oames);
  const AnalogAccumulator acc256 = bpca_integrate(lanes.radix256, CapacitorSelect::C0Over256);
  AnalogAccumulator acc16 = bpca_integrate(lanes.radix16, CapacitorSelect::C0Over16);
  const AnalogAccumulator acc1 = bpca_integrate(lanes.radix1, CapacitorSelect::FullC0);
  if (fault) {
    // Selector mux reports C0/16 but the bank actually switched in C0, so
    // the radix-16 partial is never scaled.
    acc16.output_voltage = acc16.charge;
  }
  return pwab_readout(acc256, acc16, acc1, AdcModel::make_ideal());
}

std::int64_t schoolbook_gemm_at(const IntMatrix& a, const IntMatrix& b, std::int64_t t,
                                std::int64_t m) {
  std::int64_t acc = 0;
  for (std::int64_t k = 0; k < a.cols(); ++k) {
    acc += static_cast<std::int64_t>(a.at(t, k).value()) * b.at(k, m).value();
  }
  return acc;
}

}  // namespace

int cmd_verify(const CommonOptions& common, const VerifyOptions& options, std::ostream& log) {
  try {
    if (options.trials < 1) {
      throw ConfigError("verify: --trials must be >= 1");
    }
    std::mt19937_64 rng(common.seed);
    VerifyState state;
    const DpuConfig dpu{kMaxSweepLength, AdcModel::make_ideal()};
    const BaselineConfig maw{BaselineOrg::Maw, kMaxSweepLength, AdcModel::make_ideal()};
    const BaselineConfig amw{BaselineOrg::Amw, kMaxSweepLength, AdcModel::make_ideal()};
    const ConversionTally want_dpu{3, 1, 0, 0};

    // Sweep 1: dpu_dot and both baseline paths against the exact oracle.
    for (std::int64_t trial = 0; trial < options.trials; ++trial) {
      const int length = uniform_int(rng, 1, kMaxSweepLength);
      const auto a = random_vector(rng, length);
      const auto b = random_vector(rng, length);
      const std::int64_t want = oracle_dot(a, b);
      const DotResult got = dpu_dot(dpu, a, b);
      const DotResult got_maw = baseline_dot(maw, a, b);
      const DotResult got_amw = baseline_dot(amw, a, b);
      const bool values_ok =
          got.value == want && got_maw.value == want && got_amw.value == want;
      const bool tallies_ok = got.tally == want_dpu &&
                              got_maw.tally.oe_conversions == 4 &&
                              got_maw.tally.adc_conversions == 4 &&
                              got_maw.tally.deas_shift_adds == 3 &&
                              got_maw.tally.intermediate_memory_bytes > 0 &&
                              got_amw.tally == got_maw.tally;
      state.record(values_ok && tallies_ok, [&] {
        std::ostringstream os;
        os << "dot sweep trial " << trial << ": a=" << show_vector(a) << " b=" << show_vector(b)
           << " oracle=" << want << " dpu=" << got.value << " maw=" << got_maw.value
           << " amw=" << got_amw.value;
        return os.str();
      });
    }
    log << "dot-product oracle sweep: " << options.trials << " trials, "
        << state.mismatches << " mismatches\n";

    // Sweep 2: exhaustive length-1 operand grid.
    if (options.exhaustive_int8) {
      std::int64_t grid_mismatches = 0;
      for (int x = -255; x <= 255; ++x) {
        for (int y = -255; y <= 255; ++y) {
          const SlicedInt8 a = slice(x);
          const SlicedInt8 b = slice(y);
          const std::int64_t want = static_cast<std::int64_t>(x) * y;
          const auto av = std::span<const SlicedInt8>(&a, 1);
          const auto bv = std::span<const SlicedInt8>(&b, 1);
          const bool ok = dpu_dot(dpu, av, bv).value == want &&
                          baseline_dot(maw, av, bv).value == want &&
                          recompose(sliced_partials(av, bv)) == want;
          state.record(ok, [&] {
            return "exhaustive grid: " + std::to_string(x) + " * " + std::to_string(y);
          });
          if (!ok) ++grid_mismatches;
        }
      }
      log << "exhaustive length-1 grid: 511^2 = 261121 cases, " << grid_mismatches
          << " mismatches\n";
    }

    // Sweep 3: planned GEMM execution (with k folding) against a schoolbook
    // triple loop, on both dataflows.
    const std::int64_t gemm_jobs = std::clamp<std::int64_t>(options.trials / 100, 4, 200);
    ScalabilityTable table = load_table(common);
    const ArchConfig spoga = table.lookup(CoreOrganization::Mwa, 1, 10.0);
    const ArchConfig holylight = table.lookup(CoreOrganization::Maw, 1);
    std::int64_t gemm_mismatches = 0;
    for (std::int64_t j = 0; j < gemm_jobs; ++j) {
      GemmJob job;
      job.t_rows = uniform_int(rng, 1, 6);
      // Half of the jobs fold across k chunks.
      job.k_depth = (j % 2 == 0) ? uniform_int(rng, 250, 600) : uniform_int(rng, 1, 249);
      job.m_cols = uniform_int(rng, 1, 20);
      const IntMatrix a = IntMatrix::random(job.t_rows, job.k_depth, rng);
      const IntMatrix b = IntMatrix::random(job.k_depth, job.m_cols, rng);
      const ExecResult spoga_run =
          execute_plan(plan(job, spoga), spoga, ExecMode::Functional, &a, &b);
      const ExecResult maw_run =
          execute_plan(plan(job, holylight), holylight, ExecMode::Functional, &a, &b);
      bool job_ok = true;
      for (std::int64_t t = 0; t < job.t_rows && job_ok; ++t) {
        for (std::int64_t m = 0; m < job.m_cols && job_ok; ++m) {
          const std::int64_t want = schoolbook_gemm_at(a, b, t, m);
          const std::size_t idx = static_cast<std::size_t>(t * job.m_cols + m);
          job_ok = spoga_run.output[idx] == want && maw_run.output[idx] == want;
          state.record(job_ok, [&] {
            std::ostringstream os;
            os << "gemm job " << j << " (" << job.t_rows << "x" << job.k_depth << "x"
               << job.m_cols << ") element (" << t << "," << m << "): schoolbook=" << want
               << " spoga=" << spoga_run.output[idx] << " baseline=" << maw_run.output[idx];
            return os.str();
          });
        }
      }
      if (!job_ok) ++gemm_mismatches;
    }
    log << "gemm execution sweep: " << gemm_jobs << " jobs (half with k folding), "
        << gemm_mismatches << " mismatching jobs\n";

    // Sweep 4: capacitor radix weighting, exact 1 : 16 : 256 voltage ratios.
    {
      AggregationLaneSet lane;
      lane.positive_rail = {3.0, 2.0};
      lane.negative_rail = {1.5};
      lane.radix_weight = 1;
      const double v1 = bpca_integrate(lane, CapacitorSelect::FullC0).output_voltage;
      lane.radix_weight = 16;
      const double v16 = bpca_integrate(lane, CapacitorSelect::C0Over16).output_voltage;
      lane.radix_weight = 256;
      const double v256 = bpca_integrate(lane, CapacitorSelect::C0Over256).output_voltage;
      const bool ok = std::abs(v16 / v1 - 16.0) <= 16.0 * 1e-12 &&
                      std::abs(v256 / v1 - 256.0) <= 256.0 * 1e-12;
      state.record(ok, [&] {
        return "capacitor scaling: v1=" + format_double(v1) + " v16=" + format_double(v16) +
               " v256=" + format_double(v256);
      });
      log << "capacitor radix weighting: ratios " << format_double(v16 / v1) << " and "
          << format_double(v256 / v1) << "\n";
    }

    // Optional fault injection: a mis-programmed capacitor must be caught.
    if (options.inject_fault) {
      const auto a = std::vector<SlicedInt8>{slice(17)};
      const auto b = std::vector<SlicedInt8>{slice(17)};
      const std::int64_t faulted = dpu_pipeline_value(a, b, /*fault=*/true);
      const std::int64_t want = oracle_dot(a, b);
      state.record(faulted == want, [&] { return "fault injection"; });
      if (faulted != want) {
        log << "fault injection: mis-programmed capacitor detected (got " << faulted
            << ", oracle " << want << ") -- failing as intended\n";
        log << "verify: FAIL (1 injected fault detected across " << state.checked
            << " checks)\n";
        return kExitVerifyFailure;
      }
      log << "fault injection: NOT detected -- the harness is broken\n";
      return kExitVerifyFailure;
    }

    if (state.mismatches > 0) {
      log << "first counterexample: " << state.first_counterexample << "\n";
      log << "verify: FAIL (" << state.mismatches << " mismatches across " << state.checked
          << " checks)\n";
      return kExitVerifyFailure;
    }
    log << "verify: PASS (" << state.checked << " checks)\n";
    return kExitOk;
  } catch (const Error& e) {
    return map_error(e, log);
  }
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

int cmd_simulate(const CommonOptions& common, const SimulateOptions& options,
                 std::ostream& log) {
  try {
    if (options.model.empty() || options.arch.empty()) {
      throw ConfigError("simulate: --model and --arch are required");
    }
    if (options.core_count < 1) {
      throw ConfigError("simulate: --cores must be >= 1");
    }
    const ScalabilityTable table = load_table(common);
    const ArchConfig arch = parse_arch_selector(table, options.arch);
    const auto manifest_path =
        resolve_manifest_path(options.model, common.resolved_data_dir());
    const LayerManifest manifest = load_manifest(manifest_path);

    AcceleratorBudget budget{options.core_count, arch, load_costs(common, options.costs_path)};
    AccountingOptions acct;
    acct.mode = options.functional ? ExecMode::Functional : ExecMode::CountsOnly;
    acct.adc = parse_adc(options.adc, arch.n_vector);
    acct.gate_occupancy = options.gate_occupancy;
    acct.layer_pipelined = options.pipeline_layers;
    acct.worker_count = std::max(1, options.threads);
    acct.seed = common.seed;

    const RunReport report =
        account_workload(manifest.model, to_layer_jobs(manifest), budget, acct);

    const auto out_dir = ensure_out_dir(common.resolved_out_dir());
    const std::string stem = manifest.model + "_" + report.arch_display;
    write_text_file(out_dir / (stem + ".csv"), run_report_csv(report));
    echo_config(out_dir, "simulate",
                {{"model", manifest.model},
                 {"arch", report.arch_display},
                 {"cores", std::to_string(options.core_count)},
                 {"costs", options.costs_path.empty() ? "(bundled defaults)" : options.costs_path},
                 {"adc", options.adc},
                 {"mode", options.functional ? "functional" : "counts_only"},
                 {"gate_occupancy", options.gate_occupancy ? "true" : "false"},
                 {"pipeline_layers", options.pipeline_layers ? "true" : "false"},
                 {"threads", std::to_string(acct.worker_count)},
                 {"seed", std::to_string(common.seed)},
                 {"data_dir", common.resolved_data_dir().string()}});

    log << manifest.model << " on " << report.arch_display << ": " << report.layers.size()
        << " layers, fps=" << format_double(report.fps)
        << " fps/W=" << format_double(report.fps_per_watt)
        << " fps/W/mm2=" << format_double(report.fps_per_watt_per_mm2) << "\n";
    log << "wrote " << (out_dir / (stem + ".csv")).string() << "\n";
    return kExitOk;
  } catch (const Error& e) {
    return map_error(e, log);
  }
}

// ---------------------------------------------------------------------------
// scalability
// ---------------------------------------------------------------------------

int cmd_scalability(const CommonOptions& common, const ScalabilityOptions& options,
                    std::ostream& log) {
  try {
    std::vector<ScalabilityRow> rows;
    if (options.paper_rows) {
      const ScalabilityTable table = load_table(common);
      for (const ArchConfig& cfg : table.rows()) {
        rows.push_back({org_name(cfg.organization), cfg.data_rate_gsps, cfg.laser_power_dbm,
                        cfg.n_vector, cfg.m_dot_products, "paper"});
      }
    }
    if (options.estimate) {
      LinkBudgetParams params = options.link_params_path.empty()
                                    ? LinkBudgetParams{}
                                    : LinkBudgetParams::load(options.link_params_path);
      for (const CoreOrganization org :
           {CoreOrganization::Maw, CoreOrganization::Amw, CoreOrganization::Mwa}) {
        for (const double rate : {1.0, 5.0, 10.0}) {
          for (int dbm = options.sweep_dbm_lo; dbm <= options.sweep_dbm_hi; ++dbm) {
            params.laser_power_dbm = dbm;
            const LinkBudgetResult est = solve_link_budget(params, org, rate);
            rows.push_back({org_name(org), rate, static_cast<double>(dbm), est.n_vector,
                            est.m_dot_products, "estimate"});
          }
        }
      }
    }
    const auto out_dir = ensure_out_dir(common.resolved_out_dir());
    write_text_file(out_dir / "scalability.csv", scalability_csv(rows));
    echo_config(out_dir, "scalability",
                {{"paper_rows", options.paper_rows ? "true" : "false"},
                 {"estimate", options.estimate ? "true" : "false"},
                 {"sweep_dbm", std::to_string(options.sweep_dbm_lo) + ":" +
                                   std::to_string(options.sweep_dbm_hi)},
                 {"link_params",
                  options.link_params_path.empty() ? "(defaults)" : options.link_params_path},
                 {"data_dir", common.resolved_data_dir().string()}});
    log << "wrote " << (out_dir / "scalability.csv").string() << " (" << rows.size()
        << " rows)\n";
    return kExitOk;
  } catch (const Error& e) {
    return map_error(e, log);
  }
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

namespace {

/// Largest core count whose area fits the budget (>= 1).
int cores_for_area(const ArchConfig& arch, const ComponentCostTable& costs,
                   double area_budget) {
  int lo = 1, hi = 1;
  const auto area_of = [&](int cores) {
    return area_mm2(AcceleratorBudget{cores, arch, costs});
  };
  if (area_of(1) >= area_budget) return 1;
  while (area_of(hi * 2) <= area_budget && hi < (1 << 20)) hi *= 2;
  hi *= 2;
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    (area_of(mid) <= area_budget ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

int cmd_compare(const CommonOptions& common, const CompareOptions& options, std::ostream& log) {
  try {
    if (options.models.empty()) {
      throw ConfigError("compare: at least one --models entry is required");
    }
    if (options.archs.size() < 2) {
      throw ConfigError("compare: at least two --archs entries are required");
    }
    if (options.core_count < 1) {
      throw ConfigError("compare: --cores must be >= 1");
    }
    const ScalabilityTable table = load_table(common);
    const ComponentCostTable costs = load_costs(common, options.costs_path);

    std::vector<ArchConfig> archs;
    for (const std::string& selector : options.archs) {
      archs.push_back(parse_arch_selector(table, selector));
    }
    const std::string baseline =
        options.baseline.empty() ? archs.front().display_name
                                 : parse_arch_selector(table, options.baseline).display_name;

    // Iso-core-count by default; --iso-area re-budgets every arch's core
    // count against the baseline's total area at --cores.
    std::vector<int> core_counts(archs.size(), options.core_count);
    if (options.iso_area) {
      const auto base_it =
          std::find_if(archs.begin(), archs.end(), [&](const ArchConfig& a) {
            return a.display_name == baseline;
          });
      const double area_budget =
          area_mm2(AcceleratorBudget{options.core_count, *base_it, costs});
      for (std::size_t j = 0; j < archs.size(); ++j) {
        core_counts[j] = cores_for_area(archs[j], costs, area_budget);
      }
    }

    AccountingOptions acct;
    acct.mode = ExecMode::CountsOnly;
    acct.gate_occupancy = options.gate_occupancy;
    acct.layer_pipelined = options.pipeline_layers;
    acct.seed = common.seed;

    std::vector<RunReport> runs;
    std::vector<std::string> model_names;
    for (const std::string& model_arg : options.models) {
      const LayerManifest manifest =
          load_manifest(resolve_manifest_path(model_arg, common.resolved_data_dir()));
      model_names.push_back(manifest.model);
      const auto layer_jobs = to_layer_jobs(manifest);
      for (std::size_t j = 0; j < archs.size(); ++j) {
        runs.push_back(account_workload(
            manifest.model, layer_jobs,
            AcceleratorBudget{core_counts[j], archs[j], costs}, acct));
      }
    }

    const ComparisonTable comparison = compare_runs(runs, baseline);

    const auto out_dir = ensure_out_dir(common.resolved_out_dir());
    write_text_file(out_dir / "comparison.csv", comparison_csv(comparison));

    // One grouped bar chart per metric; FPS uses a log scale.
    std::vector<std::string> arch_labels;
    for (const ArchConfig& a : archs) arch_labels.push_back(a.display_name);
    const std::size_t arch_count = archs.size();
    std::vector<std::vector<double>> fps(model_names.size()),
        fpw(model_names.size()), fpwa(model_names.size());
    for (std::size_t i = 0; i < model_names.size(); ++i) {
      for (std::size_t j = 0; j < arch_count; ++j) {
        const RunReport& r = runs[i * arch_count + j];
        fps[i].push_back(r.fps);
        fpw[i].push_back(r.fps_per_watt);
        fpwa[i].push_back(r.fps_per_watt_per_mm2);
      }
    }
    write_text_file(out_dir / "fps.svg",
                    svg_grouped_bars("Throughput", "FPS", model_names, arch_labels, fps, true));
    write_text_file(out_dir / "fps_per_w.svg",
                    svg_grouped_bars("Energy efficiency", "FPS/W", model_names, arch_labels,
                                     fpw, false));
    write_text_file(out_dir / "fps_per_w_per_mm2.svg",
                    svg_grouped_bars("Area-normalized efficiency", "FPS/W/mm^2", model_names,
                                     arch_labels, fpwa, false));

    std::string models_echo, archs_echo, cores_echo;
    for (std::size_t i = 0; i < model_names.size(); ++i) {
      models_echo += (i ? "," : "") + model_names[i];
    }
    for (std::size_t j = 0; j < arch_labels.size(); ++j) {
      archs_echo += (j ? "," : "") + arch_labels[j];
      cores_echo += (j ? "," : "") + std::to_string(core_counts[j]);
    }
    echo_config(out_dir, "compare",
                {{"models", models_echo},
                 {"archs", archs_echo},
                 {"baseline", baseline},
                 {"cores", cores_echo},
                 {"iso_area", options.iso_area ? "true" : "false"},
                 {"costs", options.costs_path.empty() ? "(bundled defaults)" : options.costs_path},
                 {"gate_occupancy", options.gate_occupancy ? "true" : "false"},
                 {"pipeline_layers", options.pipeline_layers ? "true" : "false"},
                 {"seed", std::to_string(common.seed)},
                 {"data_dir", common.resolved_data_dir().string()}});

    for (const RatioRow& ratio : comparison.ratios) {
      log << "gmean " << ratio.arch << " / " << baseline << ": fps "
          << format_double(ratio.fps_ratio) << "x, fps/W "
          << format_double(ratio.fps_per_watt_ratio) << "x, fps/W/mm2 "
          << format_double(ratio.fps_per_watt_per_mm2_ratio) << "x\n";
    }
    log << "wrote " << (out_dir / "comparison.csv").string() << "\n";
    return kExitOk;
  } catch (const Error& e) {
    return map_error(e, log);
  }
}

}  // namespace spogasim
