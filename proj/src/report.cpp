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

#include "spogasim/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spogasim/errors.hpp"
#include "spogasim/textio.hpp"

namespace spogasim {

namespace {

const char* kRunReportHeader =
    "row,layer,group_jobs,t_rows,k_depth,m_cols,scheduled_steps,core_steps,dot_products,"
    "oe_conversions,adc_conversions,deas_shift_adds,intermediate_memory_bytes,latency_s,"
    "energy_j,energy_laser_j,energy_dac_j,energy_tuning_j,energy_oe_j,energy_adc_j,"
    "energy_deas_j,energy_memory_j";

void append_energy(std::ostringstream& out, const EnergyBreakdown& e) {
  out << format_double(e.total()) << "," << format_double(e.laser) << ","
      << format_double(e.dac) << "," << format_double(e.tuning) << "," << format_double(e.oe)
      << "," << format_double(e.adc) << "," << format_double(e.deas) << ","
      << format_double(e.memory);
}

}  // namespace

std::string run_report_csv(const RunReport& report) {
  std::ostringstream out;
  out << "# model=" << report.model << " arch=" << report.arch_display
      << " cores=" << report.core_count << "\n";
  out << kRunReportHeader << "\n";
  int row = 0;
  for (const LayerAccount& layer : report.layers) {
    out << row++ << "," << layer.name << "," << layer.group_jobs << "," << layer.job.t_rows
        << "," << layer.job.k_depth << "," << layer.job.m_cols << "," << layer.scheduled_steps
        << "," << layer.core_steps << "," << layer.dot_products << ","
        << layer.tally.oe_conversions << "," << layer.tally.adc_conversions << ","
        << layer.tally.deas_shift_adds << "," << layer.tally.intermediate_memory_bytes << ","
        << format_double(layer.latency_s) << ",";
    append_energy(out, layer.energy);
    out << "\n";
  }
  std::int64_t scheduled = 0, core_steps = 0, dots = 0;
  for (const LayerAccount& layer : report.layers) {
    scheduled += layer.scheduled_steps;
    core_steps += layer.core_steps;
    dots += layer.dot_products;
  }
  out << "frame,-,-,-,-,-," << scheduled << "," << core_steps << "," << dots << ","
      << report.frame_tally.oe_conversions << "," << report.frame_tally.adc_conversions << ","
      << report.frame_tally.deas_shift_adds << ","
      << report.frame_tally.intermediate_memory_bytes << ","
      << format_double(report.frame_latency_s) << ",";
  append_energy(out, report.frame_energy);
  out << "\n";
  out << "# fps=" << format_double(report.fps) << " power_w=" << format_double(report.power_w)
      << " area_mm2=" << format_double(report.area_mm2)
      << " fps_per_w=" << format_double(report.fps_per_watt)
      << " fps_per_w_per_mm2=" << format_double(report.fps_per_watt_per_mm2) << "\n";
  return out.str();
}

std::string comparison_csv(const ComparisonTable& table) {
  std::ostringstream out;
  out << "kind,model,arch,fps,fps_per_w,fps_per_w_per_mm2\n";
  for (const MetricRow& row : table.rows) {
    out << "metric," << row.model << "," << row.arch << "," << format_double(row.fps) << ","
        << format_double(row.fps_per_watt) << "," << format_double(row.fps_per_watt_per_mm2)
        << "\n";
  }
  for (const MetricRow& row : table.gmeans) {
    out << "gmean,-," << row.arch << "," << format_double(row.fps) << ","
        << format_double(row.fps_per_watt) << "," << format_double(row.fps_per_watt_per_mm2)
        << "\n";
  }
  for (const RatioRow& row : table.ratios) {
    out << "gmean_ratio_vs_" << table.baseline_arch << ",-," << row.arch << ","
        << format_double(row.fps_ratio) << "," << format_double(row.fps_per_watt_ratio) << ","
        << format_double(row.fps_per_watt_per_mm2_ratio) << "\n";
  }
  return out.str();
}

std::string scalability_csv(const std::vector<ScalabilityRow>& rows) {
  std::ostringstream out;
  out << "organization,data_rate_gsps,laser_power_dbm,n_vector,m_dot_products,source\n";
  for (const ScalabilityRow& row : rows) {
    out << row.organization << "," << format_double(row.data_rate_gsps) << ","
        << (row.laser_power_dbm ? format_double(*row.laser_power_dbm) : std::string("-")) << ","
        << row.n_vector << "," << row.m_dot_products << "," << row.source << "\n";
  }
  return out.str();
}

std::string svg_grouped_bars(const std::string& title, const std::string& y_label,
                             const std::vector<std::string>& group_labels,
                             const std::vector<std::string>& series_labels,
                             const std::vector<std::vector<double>>& values, bool log_scale) {
  if (values.size() != group_labels.size()) {
    throw ConfigError("svg_grouped_bars: one value row per group required");
  }
  for (const auto& row : values) {
    if (row.size() != series_labels.size()) {
      throw ConfigError("svg_grouped_bars: one value per series required");
    }
    for (double v : row) {
      if (log_scale && !(v > 0.0)) {
        throw ConfigError("svg_grouped_bars: log scale requires positive values");
      }
    }
  }

  static const char* kPalette[] = {"#4878a8", "#e49444", "#5fa052", "#b74a4a",
                                   "#8268a8", "#8a7b52"};
  constexpr double kWidth = 760, kHeight = 420;
  constexpr double kLeft = 70, kRight = 20, kTop = 46, kBottom = 60;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  double vmax = 0.0, vmin_pos = 0.0;
  for (const auto& row : values) {
    for (double v : row) {
      vmax = std::max(vmax, v);
      if (v > 0.0) vmin_pos = vmin_pos == 0.0 ? v : std::min(vmin_pos, v);
    }
  }
  if (vmax <= 0.0) vmax = 1.0;
  if (vmin_pos <= 0.0) vmin_pos = 1.0;

  // Axis bounds: linear from 0, log from one decade below the smallest bar.
  const double log_lo = std::floor(std::log10(vmin_pos)) - 1.0;
  const double log_hi = std::ceil(std::log10(vmax));
  const auto bar_height = [&](double v) {
    if (!log_scale) return plot_h * v / vmax;
    return plot_h * (std::log10(v) - log_lo) / std::max(1.0, log_hi - log_lo);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
  svg << "<text x=\"18\" y=\"" << kTop + plot_h / 2 << "\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 18 "
      << kTop + plot_h / 2 << ")\">" << y_label << (log_scale ? " (log scale)" : "")
      << "</text>\n";

  // Axes.
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kTop + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
      << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n";

  // Horizontal gridlines with value labels.
  const int gridlines = log_scale ? static_cast<int>(std::max(1.0, log_hi - log_lo)) : 4;
  for (int i = 0; i <= gridlines; ++i) {
    const double frac = static_cast<double>(i) / gridlines;
    const double y = kTop + plot_h - plot_h * frac;
    const double value = log_scale ? std::pow(10.0, log_lo + frac * (log_hi - log_lo))
                                   : vmax * frac;
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << format_double(y) << "\" x2=\""
        << kLeft + plot_w << "\" y2=\"" << format_double(y)
        << "\" stroke=\"#dddddd\" stroke-width=\"0.7\"/>\n";
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << format_double(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
        << format_double(value) << "</text>\n";
  }

  const std::size_t groups = group_labels.size();
  const std::size_t series = series_labels.size();
  const double group_w = plot_w / std::max<std::size_t>(1, groups);
  const double bar_w = group_w * 0.8 / std::max<std::size_t>(1, series);

  for (std::size_t g = 0; g < groups; ++g) {
    const double gx = kLeft + g * group_w + group_w * 0.1;
    for (std::size_t s = 0; s < series; ++s) {
      const double h = std::max(0.0, bar_height(values[g][s]));
      const double x = gx + s * bar_w;
      const double y = kTop + plot_h - h;
      svg << "<rect x=\"" << format_double(x) << "\" y=\"" << format_double(y) << "\" width=\""
          << format_double(bar_w * 0.92) << "\" height=\"" << format_double(h) << "\" fill=\""
          << kPalette[s % 6] << "\"/>\n";
    }
    svg << "<text x=\"" << format_double(kLeft + g * group_w + group_w / 2) << "\" y=\""
        << kTop + plot_h + 18 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"11\">" << group_labels[g] << "</text>\n";
  }

  // Legend along the bottom edge.
  double lx = kLeft;
  const double ly = kHeight - 16;
  for (std::size_t s = 0; s < series; ++s) {
    svg << "<rect x=\"" << format_double(lx) << "\" y=\"" << ly - 10
        << "\" width=\"12\" height=\"12\" fill=\"" << kPalette[s % 6] << "\"/>\n";
    svg << "<text x=\"" << format_double(lx + 16) << "\" y=\"" << ly
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << series_labels[s] << "</text>\n";
    lx += 24 + 8.0 * series_labels[s].size();
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace spogasim
