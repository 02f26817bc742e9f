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

#include <functional>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "spogasim/commands.hpp"
#include "spogasim/errors.hpp"
#include "spogasim/textio.hpp"

namespace {

constexpr const char* kFooter =
    "Exit codes: 0 success, 2 configuration error, 3 verification failure, "
    "4 I/O error.\n"
    "Option precedence: command-line flags > --config file > built-in defaults.\n"
    "Config files hold 'key = value' lines keyed by long option names.\n"
    "SPOGASIM_OUT_DIR sets the default output directory; SPOGASIM_DATA_DIR the "
    "bundled data directory.";

// A config-file key bound to its CLI option (for precedence checks) and a
// setter into the options struct.
struct Binding {
  CLI::Option* opt = nullptr;
  std::function<void(const std::string&)> set;
};
using Bindings = std::map<std::string, Binding>;

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw spogasim::ConfigError("config key '" + key + "': expected a boolean, got '" +
                              value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string token;
  std::istringstream in(value);
  while (std::getline(in, token, ',')) {
    if (!token.empty()) out.push_back(token);
  }
  return out;
}

/// Fill every option that was not given on the command line from the file.
void apply_config_file(const std::string& path, const Bindings& bindings) {
  for (const auto& [key, value] : spogasim::read_key_values(path)) {
    const auto it = bindings.find(key);
    if (it == bindings.end()) {
      throw spogasim::ConfigError("config file " + path + ": unknown key '" + key + "'");
    }
    if (it->second.opt->count() == 0) {
      it->second.set(value);
    }
  }
}

void add_common(CLI::App* cmd, spogasim::CommonOptions& common, std::string& config_path,
                Bindings& bindings) {
  bindings["data-dir"] = {
      cmd->add_option("--data-dir", common.data_dir, "Bundled data directory"),
      [&common](const std::string& v) { common.data_dir = v; }};
  bindings["out"] = {cmd->add_option("-o,--out", common.out_dir, "Output directory"),
                     [&common](const std::string& v) { common.out_dir = v; }};
  bindings["seed"] = {cmd->add_option("--seed", common.seed, "RNG seed (default 1337)"),
                      [&common](const std::string& v) {
                        common.seed = static_cast<std::uint64_t>(
                            spogasim::parse_int(v, "config key seed"));
                      }};
  cmd->add_option("--config", config_path, "key=value file with defaults for this command");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spogasim: transaction-level simulator for analog photonic GEMM "
               "accelerators (SPOGA, HOLYLIGHT/MAW, DEAPCNN/AMW)"};
  app.footer(kFooter);
  app.require_subcommand(1);

  spogasim::CommonOptions common;
  std::string config_path;

  auto* verify = app.add_subcommand("verify", "Oracle-equivalence sweeps over the dataflows");
  spogasim::VerifyOptions verify_opts;
  Bindings verify_binds;
  verify_binds["trials"] = {
      verify->add_option("--trials", verify_opts.trials,
                         "Random trials per sweep (default 10000)"),
      [&](const std::string& v) {
        verify_opts.trials = spogasim::parse_int(v, "config key trials");
      }};
  verify_binds["exhaustive-int8"] = {
      verify->add_flag("--exhaustive-int8", verify_opts.exhaustive_int8,
                       "Also check the full 511x511 length-1 operand grid"),
      [&](const std::string& v) {
        verify_opts.exhaustive_int8 = parse_bool(v, "exhaustive-int8");
      }};
  verify_binds["inject-fault"] = {
      verify->add_flag("--inject-fault", verify_opts.inject_fault,
                       "Mis-program one capacitor selector; the run must fail"),
      [&](const std::string& v) { verify_opts.inject_fault = parse_bool(v, "inject-fault"); }};
  add_common(verify, common, config_path, verify_binds);

  auto* simulate = app.add_subcommand("simulate", "Per-layer run report for one model/arch");
  spogasim::SimulateOptions sim_opts;
  Bindings sim_binds;
  sim_binds["model"] = {
      simulate->add_option("-m,--model", sim_opts.model, "Bundled model name or manifest path"),
      [&](const std::string& v) { sim_opts.model = v; }};
  sim_binds["arch"] = {
      simulate->add_option("-a,--arch", sim_opts.arch,
                           "Arch selector, e.g. SPOGA_10, HOLYLIGHT_5, MWA_1@5dBm"),
      [&](const std::string& v) { sim_opts.arch = v; }};
  sim_binds["cores"] = {
      simulate->add_option("--cores", sim_opts.core_count, "GEMM cores (default 16)"),
      [&](const std::string& v) {
        sim_opts.core_count = static_cast<int>(spogasim::parse_int(v, "config key cores"));
      }};
  sim_binds["costs"] = {
      simulate->add_option("--costs", sim_opts.costs_path, "Cost-table override file"),
      [&](const std::string& v) { sim_opts.costs_path = v; }};
  sim_binds["adc"] = {
      simulate->add_option("--adc", sim_opts.adc, "'ideal' or ADC bit width (default ideal)"),
      [&](const std::string& v) { sim_opts.adc = v; }};
  sim_binds["functional"] = {
      simulate->add_flag("--functional", sim_opts.functional,
                         "Drive the dataflow model on random operands instead of counting"),
      [&](const std::string& v) { sim_opts.functional = parse_bool(v, "functional"); }};
  sim_binds["gate-occupancy"] = {
      simulate->add_flag("--gate-occupancy", sim_opts.gate_occupancy,
                         "Scale step power by occupancy on partially filled steps"),
      [&](const std::string& v) { sim_opts.gate_occupancy = parse_bool(v, "gate-occupancy"); }};
  sim_binds["pipeline-layers"] = {
      simulate->add_flag("--pipeline-layers", sim_opts.pipeline_layers,
                         "Frame interval bounded by the slowest layer (pipelined layers)"),
      [&](const std::string& v) { sim_opts.pipeline_layers = parse_bool(v, "pipeline-layers"); }};
  sim_binds["threads"] = {
      simulate->add_option("--threads", sim_opts.threads, "Worker threads in functional mode"),
      [&](const std::string& v) {
        sim_opts.threads = static_cast<int>(spogasim::parse_int(v, "config key threads"));
      }};
  add_common(simulate, common, config_path, sim_binds);

  auto* scalability = app.add_subcommand("scalability",
                                         "(org, rate, power) -> (N, M) dataset and estimates");
  spogasim::ScalabilityOptions scal_opts;
  Bindings scal_binds;
  bool no_paper = false;
  std::string sweep = "1:10";
  scal_binds["no-paper"] = {
      scalability->add_flag("--no-paper", no_paper, "Suppress the bundled dataset rows"),
      [&](const std::string& v) { no_paper = parse_bool(v, "no-paper"); }};
  scal_binds["estimate"] = {
      scalability->add_flag("--estimate", scal_opts.estimate, "Add link-budget estimator rows"),
      [&](const std::string& v) { scal_opts.estimate = parse_bool(v, "estimate"); }};
  scal_binds["sweep-dbm"] = {
      scalability->add_option("--sweep-dbm", sweep,
                              "Estimator laser-power sweep LO:HI in dBm (default 1:10)"),
      [&](const std::string& v) { sweep = v; }};
  scal_binds["link-params"] = {
      scalability->add_option("--link-params", scal_opts.link_params_path,
                              "key=value overrides for the estimator"),
      [&](const std::string& v) { scal_opts.link_params_path = v; }};
  add_common(scalability, common, config_path, scal_binds);

  auto* compare = app.add_subcommand("compare", "Cross-architecture comparison with gmeans");
  spogasim::CompareOptions cmp_opts;
  Bindings cmp_binds;
  cmp_binds["models"] = {
      compare->add_option("-m,--models", cmp_opts.models, "Models (bundled names or paths)")
          ->delimiter(','),
      [&](const std::string& v) { cmp_opts.models = split_list(v); }};
  cmp_binds["archs"] = {
      compare->add_option("-a,--archs", cmp_opts.archs, "Arch selectors")->delimiter(','),
      [&](const std::string& v) { cmp_opts.archs = split_list(v); }};
  cmp_binds["baseline"] = {
      compare->add_option("--baseline", cmp_opts.baseline,
                          "Ratio denominator arch (default: first of --archs)"),
      [&](const std::string& v) { cmp_opts.baseline = v; }};
  cmp_binds["cores"] = {
      compare->add_option("--cores", cmp_opts.core_count, "GEMM cores per arch (default 16)"),
      [&](const std::string& v) {
        cmp_opts.core_count = static_cast<int>(spogasim::parse_int(v, "config key cores"));
      }};
  cmp_binds["costs"] = {
      compare->add_option("--costs", cmp_opts.costs_path, "Cost-table override file"),
      [&](const std::string& v) { cmp_opts.costs_path = v; }};
  cmp_binds["iso-area"] = {
      compare->add_flag("--iso-area", cmp_opts.iso_area,
                        "Re-budget core counts to match the baseline's area"),
      [&](const std::string& v) { cmp_opts.iso_area = parse_bool(v, "iso-area"); }};
  cmp_binds["gate-occupancy"] = {
      compare->add_flag("--gate-occupancy", cmp_opts.gate_occupancy,
                        "Scale step power by occupancy on partially filled steps"),
      [&](const std::string& v) { cmp_opts.gate_occupancy = parse_bool(v, "gate-occupancy"); }};
  cmp_binds["pipeline-layers"] = {
      compare->add_flag("--pipeline-layers", cmp_opts.pipeline_layers,
                        "Frame interval bounded by the slowest layer (pipelined layers)"),
      [&](const std::string& v) { cmp_opts.pipeline_layers = parse_bool(v, "pipeline-layers"); }};
  add_common(compare, common, config_path, cmp_binds);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : spogasim::kExitConfigError;
  }

  try {
    if (!config_path.empty()) {
      if (verify->parsed()) apply_config_file(config_path, verify_binds);
      if (simulate->parsed()) apply_config_file(config_path, sim_binds);
      if (scalability->parsed()) apply_config_file(config_path, scal_binds);
      if (compare->parsed()) apply_config_file(config_path, cmp_binds);
    }

    if (scalability->parsed()) {
      scal_opts.paper_rows = !no_paper;
      const auto colon = sweep.find(':');
      scal_opts.sweep_dbm_lo =
          static_cast<int>(spogasim::parse_int(sweep.substr(0, colon), "--sweep-dbm"));
      scal_opts.sweep_dbm_hi =
          colon == std::string::npos
              ? scal_opts.sweep_dbm_lo
              : static_cast<int>(spogasim::parse_int(sweep.substr(colon + 1), "--sweep-dbm"));
    }

    if (simulate->parsed() && sim_opts.model.empty()) {
      throw spogasim::ConfigError("simulate: --model is required (flag or config file)");
    }
    if (simulate->parsed() && sim_opts.arch.empty()) {
      throw spogasim::ConfigError("simulate: --arch is required (flag or config file)");
    }
    if (compare->parsed() && cmp_opts.models.empty()) {
      throw spogasim::ConfigError("compare: --models is required (flag or config file)");
    }
  } catch (const spogasim::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return dynamic_cast<const spogasim::IoError*>(&e) ? spogasim::kExitIoError
                                                      : spogasim::kExitConfigError;
  }

  if (verify->parsed()) return spogasim::cmd_verify(common, verify_opts, std::cout);
  if (simulate->parsed()) return spogasim::cmd_simulate(common, sim_opts, std::cout);
  if (scalability->parsed()) return spogasim::cmd_scalability(common, scal_opts, std::cout);
  if (compare->parsed()) return spogasim::cmd_compare(common, cmp_opts, std::cout);
  return spogasim::kExitConfigError;
}
