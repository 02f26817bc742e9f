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

#include "spogasim/photonic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spogasim/errors.hpp"

namespace spogasim {

OameState oame_evaluate(const SlicedInt8& input, const SlicedInt8& weight) noexcept {
  const std::int8_t sign = static_cast<std::int8_t>(input.sign * weight.sign);
  OameState s;
  s.input = input;
  s.weight = weight;
  s.hh = {static_cast<std::uint8_t>(input.msn * weight.msn), Wavelength::Lambda1, sign};
  s.hl = {static_cast<std::uint8_t>(input.msn * weight.lsn), Wavelength::Lambda2, sign};
  s.lh = {static_cast<std::uint8_t>(input.lsn * weight.msn), Wavelength::Lambda3, sign};
  s.ll = {static_cast<std::uint8_t>(input.lsn * weight.lsn), Wavelength::Lambda4, sign};
  return s;
}

double AggregationLaneSet::positive_sum() const {
  double acc = 0.0;
  for (double v : positive_rail) acc += v;
  return acc;
}

double AggregationLaneSet::negative_sum() const {
  double acc = 0.0;
  for (double v : negative_rail) acc += v;
  return acc;
}

namespace {

void push_product(AggregationLaneSet& lane, const OameProduct& p) {
  auto& rail = p.sign >= 0 ? lane.positive_rail : lane.negative_rail;
  rail.push_back(static_cast<double>(p.value));
}

}  // namespace

LaneGroup route_to_lanes(std::span<const OameState> oames) {
  LaneGroup group;
  group.radix256.radix_weight = 256;
  group.radix16.radix_weight = 16;
  group.radix1.radix_weight = 1;
  group.radix256.positive_rail.reserve(oames.size());
  group.radix16.positive_rail.reserve(2 * oames.size());
  group.radix1.positive_rail.reserve(oames.size());
  for (const OameState& oame : oames) {
    push_product(group.radix256, oame.hh);  // lambda1
    push_product(group.radix16, oame.hl);   // lambda2
    push_product(group.radix16, oame.lh);   // lambda3
    push_product(group.radix1, oame.ll);    // lambda4
  }
  return group;
}

int radix_weight_of(CapacitorSelect sel) noexcept {
  switch (sel) {
    case CapacitorSelect::FullC0: return 1;
    case CapacitorSelect::C0Over16: return 16;
    case CapacitorSelect::C0Over256: return 256;
  }
  return 1;
}

AnalogAccumulator bpca_integrate(const AggregationLaneSet& lane, CapacitorSelect selector) {
  if (radix_weight_of(selector) != lane.radix_weight) {
    throw ConfigError("bpca_integrate: capacitor selector x" +
                      std::to_string(radix_weight_of(selector)) +
                      " does not match lane radix weight " +
                      std::to_string(lane.radix_weight));
  }
  AnalogAccumulator acc;
  acc.selector = selector;
  acc.charge = lane.positive_sum() - lane.negative_sum();
  acc.output_voltage = acc.charge * lane.radix_weight;
  return acc;
}

AdcModel AdcModel::finite(int bits, double full_scale) {
  if (bits < 1 || bits > 62) {
    throw ConfigError("AdcModel: bits must be in [1, 62]");
  }
  if (!(full_scale > 0.0)) {
    throw ConfigError("AdcModel: full_scale must be positive");
  }
  AdcModel m;
  m.ideal = false;
  m.bits = bits;
  m.full_scale = full_scale;
  return m;
}

double AdcModel::quantize(double v) const {
  if (ideal) {
    return std::nearbyint(v);
  }
  const double levels = static_cast<double>(std::int64_t{1} << bits);
  const double step = 2.0 * full_scale / levels;
  const double half = levels / 2.0;
  double code = std::nearbyint(v / step);
  code = std::clamp(code, -half, half);
  return code * step;
}

std::int64_t pwab_readout(const AnalogAccumulator& v256, const AnalogAccumulator& v16,
                          const AnalogAccumulator& v1, const AdcModel& adc) {
  if (v256.selector == v16.selector || v256.selector == v1.selector ||
      v16.selector == v1.selector) {
    throw ConfigError("pwab_readout: the three accumulators must use distinct "
                      "capacitor selectors");
  }
  const double summed = v256.output_voltage + v16.output_voltage + v1.output_voltage;
  return static_cast<std::int64_t>(std::llround(adc.quantize(summed)));
}

ConversionTally& ConversionTally::operator+=(const ConversionTally& o) {
  oe_conversions += o.oe_conversions;
  adc_conversions += o.adc_conversions;
  deas_shift_adds += o.deas_shift_adds;
  intermediate_memory_bytes += o.intermediate_memory_bytes;
  return *this;
}

ConversionTally operator*(ConversionTally t, std::int64_t n) {
  t.oe_conversions *= n;
  t.adc_conversions *= n;
  t.deas_shift_adds *= n;
  t.intermediate_memory_bytes *= n;
  return t;
}

namespace {

void check_dot_operands(std::size_t la, std::size_t lb, int capacity, const char* op) {
  if (capacity < 1) {
    throw ConfigError(std::string(op) + ": unit capacity must be >= 1");
  }
  if (la != lb) {
    throw ShapeError(std::string(op) + ": length mismatch (" + std::to_string(la) +
                     " vs " + std::to_string(lb) + ")");
  }
  if (la > static_cast<std::size_t>(capacity)) {
    throw CapacityError(std::string(op) + ": vector length " + std::to_string(la) +
                        " exceeds capacity " + std::to_string(capacity) +
                        "; fold temporally via the mapper");
  }
}

}  // namespace

DotResult dpu_dot(const DpuConfig& config, std::span<const SlicedInt8> a,
                  std::span<const SlicedInt8> b) {
  check_dot_operands(a.size(), b.size(), config.oame_count, "dpu_dot");

  std::vector<OameState> oames(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    oames[k] = oame_evaluate(a[k], b[k]);
  }
  const LaneGroup lanes = route_to_lanes(oames);
  const AnalogAccumulator acc256 = bpca_integrate(lanes.radix256, CapacitorSelect::C0Over256);
  const AnalogAccumulator acc16 = bpca_integrate(lanes.radix16, CapacitorSelect::C0Over16);
  const AnalogAccumulator acc1 = bpca_integrate(lanes.radix1, CapacitorSelect::FullC0);

  DotResult result;
  result.value = pwab_readout(acc256, acc16, acc1, config.adc);
  // Three partial results transduced, one final digitization; no DEAS, no
  // intermediate buffering anywhere in the path.
  result.tally = {3, 1, 0, 0};
  return result;
}

int baseline_intermediate_bits(int n_capacity) {
  int k = 0;
  while ((1 << k) < n_capacity) ++k;  // ceil(log2), 0 for capacity 1
  return 8 + 2 * k;
}

DotResult baseline_dot(const BaselineConfig& config, std::span<const SlicedInt8> a,
                       std::span<const SlicedInt8> b) {
  check_dot_operands(a.size(), b.size(), config.n_capacity, "baseline_dot");

  // Four slice dot products on four dedicated cores, each transduced and
  // digitized independently.
  double s_hh = 0.0, s_hl = 0.0, s_lh = 0.0, s_ll = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double sgn = a[k].sign * b[k].sign;
    s_hh += sgn * a[k].msn * b[k].msn;
    s_hl += sgn * a[k].msn * b[k].lsn;
    s_lh += sgn * a[k].lsn * b[k].msn;
    s_ll += sgn * a[k].lsn * b[k].lsn;
  }
  const std::int64_t d_hh = static_cast<std::int64_t>(std::llround(config.adc.quantize(s_hh)));
  const std::int64_t d_hl = static_cast<std::int64_t>(std::llround(config.adc.quantize(s_hl)));
  const std::int64_t d_lh = static_cast<std::int64_t>(std::llround(config.adc.quantize(s_lh)));
  const std::int64_t d_ll = static_cast<std::int64_t>(std::llround(config.adc.quantize(s_ll)));

  // DEAS recombination: two radix-16 shifts plus adds, three shift-add ops
  // over the four buffered intermediates.
  DotResult result;
  result.value = 256 * d_hh + 16 * (d_hl + d_lh) + d_ll;
  result.tally = {4, 4, 3, 4 * baseline_intermediate_bits(config.n_capacity) / 8};
  return result;
}

}  // namespace spogasim
