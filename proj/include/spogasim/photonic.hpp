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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "spogasim/bitslice.hpp"

namespace spogasim {

// Functional model of the SPOGA dot-product unit (DPU) signal path:
//
//   OAME (4 INT4 multiplies on 4 carrier wavelengths)
//     -> radix-aware aggregation lanes (one +/- lane pair per radix weight)
//     -> BPCA charge integration with a selectable accumulation capacitor
//     -> analog voltage adder + ADC readout.
//
// Optical power and photocharge are exact reals in normalized units where
// 1.0 equals one unit INT4-product value; same-wavelength signals add
// incoherently (power-additive) and signed summation is the balanced
// photodetector abstraction. Bit-sliced MAW/AMW baselines are modeled with
// the same operand encoding but four separately digitized slice dot
// products recombined by a digital shifter-adder.

/// Carrier wavelength assignment inside one OAME.
enum class Wavelength : std::uint8_t {
  Lambda1,  // MSN x MSN, radix weight 256
  Lambda2,  // MSN x LSN, radix weight 16
  Lambda3,  // LSN x MSN, radix weight 16
  Lambda4,  // LSN x LSN, radix weight 1
};

/// One unweighted INT4 product emerging from an OAMU.
struct OameProduct {
  std::uint8_t value = 0;  // 0..225
  Wavelength carrier = Wavelength::Lambda1;
  std::int8_t sign = +1;
};

/// The four tagged products of one optical analog multiplier ensemble.
struct OameState {
  SlicedInt8 input;
  SlicedInt8 weight;
  OameProduct hh, hl, lh, ll;
};

/// Evaluate one INT8 x INT8 multiply as four carrier-tagged INT4 products.
OameState oame_evaluate(const SlicedInt8& input, const SlicedInt8& weight) noexcept;

/// One +/- aggregation lane pair serving a single radix position weight.
/// Rail entries are non-negative optical power contributions in unit-product
/// normalized units.
struct AggregationLaneSet {
  int radix_weight = 1;  // 256, 16, or 1
  std::vector<double> positive_rail;
  std::vector<double> negative_rail;

  double positive_sum() const;
  double negative_sum() const;
};

/// The three shared lane sets of a DPU (radix 256 / 16 / 1).
struct LaneGroup {
  AggregationLaneSet radix256;
  AggregationLaneSet radix16;
  AggregationLaneSet radix1;
};

/// Multiplex all OAME products into the three lane sets. Lambda1 -> radix
/// 256, Lambda2/Lambda3 -> radix 16, Lambda4 -> radix 1; positive-signed
/// products ride the positive rail, negative the negative rail.
LaneGroup route_to_lanes(std::span<const OameState> oames);

/// Selectable BPCA accumulation capacitor. Smaller capacitance scales the
/// output voltage up by the matching radix weight for equal charge.
enum class CapacitorSelect : std::uint8_t {
  FullC0,    // radix weight 1
  C0Over16,  // radix weight 16
  C0Over256, // radix weight 256
};

int radix_weight_of(CapacitorSelect sel) noexcept;

/// Balanced photo-charge accumulator state after integrating one time step.
struct AnalogAccumulator {
  double charge = 0.0;  // signed, normalized coulomb units
  CapacitorSelect selector = CapacitorSelect::FullC0;
  double output_voltage = 0.0;  // charge / capacitance == charge * radix weight
};

/// Integrate one lane set on a BPCA. The selector must match the lane radix
/// (256 <-> C0/256, 16 <-> C0/16, 1 <-> C0); throws ConfigError otherwise.
AnalogAccumulator bpca_integrate(const AggregationLaneSet& lane, CapacitorSelect selector);

/// Final-result ADC. Ideal mode rounds to the nearest integer exactly;
/// finite mode snaps to uniform steps of 2*full_scale / 2^bits across
/// [-full_scale, +full_scale], clamping outside.
struct AdcModel {
  bool ideal = true;
  int bits = 16;
  double full_scale = 0.0;

  static AdcModel make_ideal() { return AdcModel{}; }
  static AdcModel finite(int bits, double full_scale);

  /// Quantized reconstruction of an analog value.
  double quantize(double v) const;
};

/// Analog voltage adder + ADC: digitize the sum of the three positionally
/// weighted accumulator voltages. The three accumulators must carry distinct
/// capacitor selectors; throws ConfigError on duplicates.
std::int64_t pwab_readout(const AnalogAccumulator& v256, const AnalogAccumulator& v16,
                          const AnalogAccumulator& v1, const AdcModel& adc);

/// Conversion and post-processing event counts for one or more dot products.
/// Counts are data-independent properties of the dataflow.
struct ConversionTally {
  std::int64_t oe_conversions = 0;           // optical-to-electrical transductions
  std::int64_t adc_conversions = 0;          // analog-to-digital conversions
  std::int64_t deas_shift_adds = 0;          // digital shifter-adder operations
  std::int64_t intermediate_memory_bytes = 0;

  ConversionTally& operator+=(const ConversionTally& o);
  friend ConversionTally operator*(ConversionTally t, std::int64_t n);
  friend bool operator==(const ConversionTally&, const ConversionTally&) = default;
};

/// Structural parameters of one SPOGA DPU.
struct DpuConfig {
  int oame_count = 1;  // spatial capacity N
  AdcModel adc = AdcModel::make_ideal();
};

struct DotResult {
  std::int64_t value = 0;
  ConversionTally tally;
};

/// Full DPU dot product: OAMEs -> lanes -> three BPCAs -> PWAB readout.
/// Tally per call is exactly (3 O/E, 1 ADC, 0 DEAS, 0 bytes).
/// Throws ShapeError on length mismatch, CapacityError when the vectors are
/// longer than config.oame_count (temporal folding is the mapper's job).
DotResult dpu_dot(const DpuConfig& config, std::span<const SlicedInt8> a,
                  std::span<const SlicedInt8> b);

/// Bit-sliced baseline core organizations.
enum class BaselineOrg : std::uint8_t {
  Maw,  // modulation-aggregation-weighting
  Amw,  // aggregation-modulation-weighting
};

/// Structural parameters of a bit-sliced baseline GEMM core group (four
/// slice cores plus DEAS post-processing).
struct BaselineConfig {
  BaselineOrg org = BaselineOrg::Maw;
  int n_capacity = 1;  // per-core vector capacity N; also sizes intermediates
  AdcModel adc = AdcModel::make_ideal();
};

/// Width in bits of one digitized slice-GEMM intermediate, sized for the
/// worst-case accumulation at the core's capacity.
int baseline_intermediate_bits(int n_capacity);

/// Baseline dot product: four separately digitized INT4 slice dot products,
/// buffered and recombined by DEAS shift-adds. Tally per call is exactly
/// (4 O/E, 4 ADC, 3 DEAS, 4 * intermediate_bits / 8 bytes).
DotResult baseline_dot(const BaselineConfig& config, std::span<const SlicedInt8> a,
                       std::span<const SlicedInt8> b);

}  // namespace spogasim
