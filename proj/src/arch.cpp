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

#include "spogasim/arch.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "spogasim/errors.hpp"
#include "spogasim/textio.hpp"

namespace spogasim {

namespace {

constexpr int kSpogaDpusPerCore = 16;

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

std::string dbm_suffix(const std::optional<double>& dbm) {
  if (!dbm) return "";
  std::ostringstream os;
  os << "@" << format_double(*dbm) << "dBm";
  return os.str();
}

std::string describe_key(CoreOrganization org, double rate, std::optional<double> dbm) {
  return org_name(org) + " " + format_double(rate) + " GS/s" + dbm_suffix(dbm);
}

}  // namespace

std::string org_name(CoreOrganization org) {
  switch (org) {
    case CoreOrganization::Maw: return "MAW";
    case CoreOrganization::Amw: return "AMW";
    case CoreOrganization::Mwa: return "MWA";
  }
  return "?";
}

CoreOrganization parse_org(const std::string& name) {
  const std::string u = upper(name);
  if (u == "MAW" || u == "HOLYLIGHT") return CoreOrganization::Maw;
  if (u == "AMW" || u == "DEAPCNN") return CoreOrganization::Amw;
  if (u == "MWA" || u == "SPOGA") return CoreOrganization::Mwa;
  throw LookupError("unknown core organization '" + name +
                    "' (expected MAW/HOLYLIGHT, AMW/DEAPCNN, or MWA/SPOGA)");
}

ScalabilityTable ScalabilityTable::load(const std::filesystem::path& file) {
  ScalabilityTable table;
  for (const TextLine& line : read_data_lines(file)) {
    const std::string ctx = file.string() + ":" + std::to_string(line.number);
    const auto fields = split_fields(line.text);
    if (fields.size() != 5) {
      throw ParseError(ctx + ": expected 5 fields (org rate dbm N M), got " +
                       std::to_string(fields.size()));
    }
    ArchConfig row;
    row.organization = parse_org(fields[0]);
    row.data_rate_gsps = parse_double(fields[1], ctx);
    if (fields[2] != "-") {
      row.laser_power_dbm = parse_double(fields[2], ctx);
    }
    row.n_vector = static_cast<int>(parse_int(fields[3], ctx));
    row.m_dot_products = static_cast<int>(parse_int(fields[4], ctx));
    if (row.n_vector < 1 || row.m_dot_products < 1) {
      throw ParseError(ctx + ": N and M must be positive");
    }
    row.dpu_count = row.m_dot_products;
    // Display names follow the published accelerator names; the SPOGA laser
    // power is only spelled out when it differs from the 10 dBm default.
    switch (row.organization) {
      case CoreOrganization::Maw: row.display_name = "HOLYLIGHT"; break;
      case CoreOrganization::Amw: row.display_name = "DEAPCNN"; break;
      case CoreOrganization::Mwa: row.display_name = "SPOGA"; break;
    }
    row.display_name += "_" + format_double(row.data_rate_gsps);
    if (row.laser_power_dbm && *row.laser_power_dbm != 10.0) {
      row.display_name += dbm_suffix(row.laser_power_dbm);
    }
    table.rows_.push_back(row);
  }
  if (table.rows_.empty()) {
    throw ParseError(file.string() + ": dataset is empty");
  }
  return table;
}

ArchConfig ScalabilityTable::lookup(CoreOrganization org, double data_rate_gsps,
                                    std::optional<double> laser_power_dbm) const {
  for (const ArchConfig& row : rows_) {
    if (row.organization != org) continue;
    if (row.data_rate_gsps != data_rate_gsps) continue;
    if (row.laser_power_dbm.has_value() != laser_power_dbm.has_value()) continue;
    if (row.laser_power_dbm && *row.laser_power_dbm != *laser_power_dbm) continue;
    return row;
  }
  std::string valid;
  for (const ArchConfig& row : rows_) {
    if (!valid.empty()) valid += ", ";
    valid += describe_key(row.organization, row.data_rate_gsps, row.laser_power_dbm);
  }
  throw LookupError("no bundled configuration for " +
                    describe_key(org, data_rate_gsps, laser_power_dbm) +
                    "; valid keys: " + valid);
}

ArchConfig parse_arch_selector(const ScalabilityTable& table, const std::string& selector) {
  // Grammar: <org>_<rate>[@<dbm>dBm], e.g. SPOGA_10, MWA_1@5dBm, HOLYLIGHT_5.
  std::string body = selector;
  std::optional<double> dbm;
  if (const auto at = body.find('@'); at != std::string::npos) {
    std::string suffix = body.substr(at + 1);
    body.erase(at);
    const std::string usuffix = upper(suffix);
    if (usuffix.size() > 3 && usuffix.ends_with("DBM")) {
      suffix.resize(suffix.size() - 3);
    }
    dbm = parse_double(suffix, "arch selector '" + selector + "'");
  }
  const auto underscore = body.rfind('_');
  if (underscore == std::string::npos) {
    throw LookupError("arch selector '" + selector +
                      "' must look like ORG_RATE (e.g. SPOGA_10, HOLYLIGHT_5, MWA_1@5dBm)");
  }
  const CoreOrganization org = parse_org(body.substr(0, underscore));
  const double rate = parse_double(body.substr(underscore + 1),
                                   "arch selector '" + selector + "'");
  if (org == CoreOrganization::Mwa && !dbm) {
    dbm = 10.0;  // documented default laser power for SPOGA selectors
  }
  if (org != CoreOrganization::Mwa && dbm) {
    throw LookupError("arch selector '" + selector +
                      "': laser power is only selectable for MWA/SPOGA");
  }
  return table.lookup(org, rate, dbm);
}

LinkBudgetParams LinkBudgetParams::load(const std::filesystem::path& file) {
  LinkBudgetParams p;
  for (const auto& [key, value] : read_key_values(file)) {
    const std::string ctx = file.string() + " key " + key;
    if (key == "laser_power_dbm") p.laser_power_dbm = parse_double(value, ctx);
    else if (key == "modulator_loss_db") p.modulator_loss_db = parse_double(value, ctx);
    else if (key == "splitter_excess_db_per_stage") p.splitter_excess_db_per_stage = parse_double(value, ctx);
    else if (key == "mux_through_loss_db") p.mux_through_loss_db = parse_double(value, ctx);
    else if (key == "filter_drop_loss_db") p.filter_drop_loss_db = parse_double(value, ctx);
    else if (key == "penalty_db") p.penalty_db = parse_double(value, ctx);
    else if (key == "detector_sensitivity_dbm") p.detector_sensitivity_dbm = parse_double(value, ctx);
    else if (key == "sensitivity_rate_slope_db") p.sensitivity_rate_slope_db = parse_double(value, ctx);
    else if (key == "analog_levels") p.analog_levels = static_cast<int>(parse_int(value, ctx));
    else if (key == "n_hard_limit") p.n_hard_limit = static_cast<int>(parse_int(value, ctx));
    else throw ParseError(file.string() + ": unknown link-budget key '" + key + "'");
  }
  return p;
}

namespace {

// Received per-wavelength power for a candidate (N, M), in dBm. Losses:
// modulation, 1:M fan-out (ideal split plus per-stage excess), ring-through
// passes along the N-way aggregation, the drop filter, and a lump penalty.
// An aggregation-first core modulates after multiplexing, so every signal
// also passes the other N-1 modulator rings; that doubles its through-loss
// relative to modulation-first cores.
double received_dbm(const LinkBudgetParams& p, CoreOrganization org, int n, int m) {
  const double split_stages = std::ceil(std::log2(std::max(1, m)));
  const double splitter_db =
      10.0 * std::log10(std::max(1, m)) + p.splitter_excess_db_per_stage * split_stages;
  const double through_passes = org == CoreOrganization::Amw ? 2.0 : 1.0;
  const double aggregation_db = p.mux_through_loss_db * n * through_passes;
  return p.laser_power_dbm - p.modulator_loss_db - splitter_db - aggregation_db -
         p.filter_drop_loss_db - p.penalty_db;
}

double sensitivity_dbm(const LinkBudgetParams& p, double rate_gsps) {
  return p.detector_sensitivity_dbm + p.sensitivity_rate_slope_db * std::log10(rate_gsps);
}

bool feasible(const LinkBudgetParams& p, CoreOrganization org, double rate_gsps, int n) {
  const int m = org == CoreOrganization::Mwa ? kSpogaDpusPerCore : n;
  // The smallest of the 2^b analog levels must clear the detector floor.
  const double level_margin_db = 10.0 * std::log10(static_cast<double>(p.analog_levels));
  return received_dbm(p, org, n, m) - level_margin_db >= sensitivity_dbm(p, rate_gsps);
}

}  // namespace

LinkBudgetResult solve_link_budget(const LinkBudgetParams& params, CoreOrganization org,
                                   double data_rate_gsps) {
  if (params.analog_levels < 2) {
    throw ConfigError("solve_link_budget: analog_levels must be >= 2");
  }
  if (!(data_rate_gsps > 0.0)) {
    throw ConfigError("solve_link_budget: data rate must be positive");
  }
  if (params.modulator_loss_db < 0 || params.splitter_excess_db_per_stage < 0 ||
      params.mux_through_loss_db < 0 || params.filter_drop_loss_db < 0 ||
      params.penalty_db < 0) {
    throw ConfigError("solve_link_budget: device losses must be >= 0 dB");
  }
  if (params.n_hard_limit < 1) {
    throw ConfigError("solve_link_budget: n_hard_limit must be >= 1");
  }
  LinkBudgetResult result;
  if (!feasible(params, org, data_rate_gsps, 1)) {
    result.diagnostic = "budget does not close even for N=1: received " +
                        format_double(received_dbm(params, org, 1,
                                                   org == CoreOrganization::Mwa ? kSpogaDpusPerCore : 1)) +
                        " dBm vs required " +
                        format_double(sensitivity_dbm(params, data_rate_gsps) +
                                      10.0 * std::log10(params.analog_levels)) +
                        " dBm";
    return result;
  }
  // Feasibility is monotone decreasing in N; bisect for the largest feasible.
  int lo = 1, hi = params.n_hard_limit;
  if (feasible(params, org, data_rate_gsps, hi)) {
    lo = hi;  // saturated at the structural cap
  } else {
    while (hi - lo > 1) {
      const int mid = lo + (hi - lo) / 2;
      (feasible(params, org, data_rate_gsps, mid) ? lo : hi) = mid;
    }
  }
  result.n_vector = lo;
  result.m_dot_products = org == CoreOrganization::Mwa ? kSpogaDpusPerCore : lo;
  return result;
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("SPOGASIM_DATA_DIR"); env && *env) {
    return env;
  }
#ifdef SPOGASIM_DATA_DIR
  return SPOGASIM_DATA_DIR;
#else
  return "data";
#endif
}

}  // namespace spogasim
