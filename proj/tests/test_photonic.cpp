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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "spogasim/bitslice.hpp"
#include "spogasim/errors.hpp"
#include "spogasim/photonic.hpp"

using namespace spogasim;

namespace {

std::vector<SlicedInt8> sliced(const std::vector<int>& values) {
  std::vector<SlicedInt8> out;
  for (int v : values) out.push_back(slice(v));
  return out;
}

std::vector<SlicedInt8> random_vec(std::mt19937_64& rng, int len) {
  std::vector<SlicedInt8> v(len);
  for (auto& e : v) e = slice(uniform_int(rng, -255, 255));
  return v;
}

}  // namespace

TEST_CASE("oame_evaluate computes four tagged INT4 products") {
  const OameState s = oame_evaluate(slice(171), slice(171));
  CHECK(s.hh.value == 100);
  CHECK(s.hl.value == 110);
  CHECK(s.lh.value == 110);
  CHECK(s.ll.value == 121);
  CHECK(s.hh.carrier == Wavelength::Lambda1);
  CHECK(s.hl.carrier == Wavelength::Lambda2);
  CHECK(s.lh.carrier == Wavelength::Lambda3);
  CHECK(s.ll.carrier == Wavelength::Lambda4);
  CHECK(s.hh.sign == +1);

  const OameState z = oame_evaluate(slice(0), slice(123));
  CHECK(z.hh.value == 0);
  CHECK(z.hl.value == 0);
  CHECK(z.lh.value == 0);
  CHECK(z.ll.value == 0);

  const OameState n = oame_evaluate(slice(-16), slice(16));
  CHECK(n.hh.value == 1);
  CHECK(n.hh.sign == -1);
  CHECK(n.hl.value == 0);
  CHECK(n.lh.value == 0);
  CHECK(n.ll.value == 0);
}

TEST_CASE("route_to_lanes radix and rail assignment") {
  const auto oames = std::vector<OameState>{oame_evaluate(slice(17), slice(17))};
  const LaneGroup lanes = route_to_lanes(oames);
  CHECK(lanes.radix256.radix_weight == 256);
  CHECK(lanes.radix16.radix_weight == 16);
  CHECK(lanes.radix1.radix_weight == 1);
  CHECK(lanes.radix256.positive_rail == std::vector<double>{1.0});
  CHECK(lanes.radix16.positive_rail == std::vector<double>{1.0, 1.0});
  CHECK(lanes.radix1.positive_rail == std::vector<double>{1.0});
  CHECK(lanes.radix256.negative_rail.empty());

  const auto neg = std::vector<OameState>{oame_evaluate(slice(-17), slice(17))};
  const LaneGroup nlanes = route_to_lanes(neg);
  CHECK(nlanes.radix256.negative_rail == std::vector<double>{1.0});
  CHECK(nlanes.radix16.negative_rail == std::vector<double>{1.0, 1.0});
  CHECK(nlanes.radix1.negative_rail == std::vector<double>{1.0});
  CHECK(nlanes.radix256.positive_rail.empty());
}

TEST_CASE("route_to_lanes rail sums match a brute-force sign partition") {
  std::mt19937_64 rng(99);
  const auto a = random_vec(rng, 249);
  const auto b = random_vec(rng, 249);
  std::vector<OameState> oames;
  for (int k = 0; k < 249; ++k) oames.push_back(oame_evaluate(a[k], b[k]));
  const LaneGroup lanes = route_to_lanes(oames);

  double p256 = 0, n256 = 0, p16 = 0, n16 = 0, p1 = 0, n1 = 0;
  for (int k = 0; k < 249; ++k) {
    const int sgn = a[k].sign * b[k].sign;
    (sgn >= 0 ? p256 : n256) += a[k].msn * b[k].msn;
    (sgn >= 0 ? p16 : n16) += a[k].msn * b[k].lsn;
    (sgn >= 0 ? p16 : n16) += a[k].lsn * b[k].msn;
    (sgn >= 0 ? p1 : n1) += a[k].lsn * b[k].lsn;
  }
  CHECK(lanes.radix256.positive_sum() == p256);
  CHECK(lanes.radix256.negative_sum() == n256);
  CHECK(lanes.radix16.positive_sum() == p16);
  CHECK(lanes.radix16.negative_sum() == n16);
  CHECK(lanes.radix1.positive_sum() == p1);
  CHECK(lanes.radix1.negative_sum() == n1);
}

TEST_CASE("rail sums are invariant under OAME permutation") {
  std::mt19937_64 rng(123);
  const auto a = random_vec(rng, 60);
  const auto b = random_vec(rng, 60);
  std::vector<OameState> oames;
  for (int k = 0; k < 60; ++k) oames.push_back(oame_evaluate(a[k], b[k]));
  const LaneGroup before = route_to_lanes(oames);
  std::shuffle(oames.begin(), oames.end(), rng);
  const LaneGroup after = route_to_lanes(oames);
  CHECK(before.radix256.positive_sum() == after.radix256.positive_sum());
  CHECK(before.radix256.negative_sum() == after.radix256.negative_sum());
  CHECK(before.radix16.positive_sum() == after.radix16.positive_sum());
  CHECK(before.radix16.negative_sum() == after.radix16.negative_sum());
  CHECK(before.radix1.positive_sum() == after.radix1.positive_sum());
  CHECK(before.radix1.negative_sum() == after.radix1.negative_sum());
}

TEST_CASE("bpca_integrate charge and voltage") {
  AggregationLaneSet lane;
  lane.radix_weight = 16;
  lane.positive_rail = {1.0, 1.0};
  lane.negative_rail = {1.0};
  const AnalogAccumulator acc = bpca_integrate(lane, CapacitorSelect::C0Over16);
  CHECK(acc.charge == 1.0);
  CHECK(acc.output_voltage == 16.0);

  AggregationLaneSet empty;
  empty.radix_weight = 256;
  CHECK(bpca_integrate(empty, CapacitorSelect::C0Over256).output_voltage == 0.0);

  CHECK_THROWS_AS(bpca_integrate(lane, CapacitorSelect::FullC0), ConfigError);
}

TEST_CASE("capacitor selection scales voltage by exact radix factors") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    AggregationLaneSet lane;
    lane.positive_rail = {static_cast<double>(uniform_int(rng, 0, 225)),
                          static_cast<double>(uniform_int(rng, 0, 225))};
    lane.negative_rail = {static_cast<double>(uniform_int(rng, 0, 225))};
    lane.radix_weight = 1;
    const double v1 = bpca_integrate(lane, CapacitorSelect::FullC0).output_voltage;
    lane.radix_weight = 16;
    const double v16 = bpca_integrate(lane, CapacitorSelect::C0Over16).output_voltage;
    lane.radix_weight = 256;
    const double v256 = bpca_integrate(lane, CapacitorSelect::C0Over256).output_voltage;
    CHECK(v16 == 16.0 * v1);
    CHECK(v256 == 256.0 * v1);
  }
}

TEST_CASE("pwab_readout sums weighted voltages and digitizes") {
  AnalogAccumulator v256{1.0, CapacitorSelect::C0Over256, 256.0};
  AnalogAccumulator v16{2.0, CapacitorSelect::C0Over16, 32.0};
  AnalogAccumulator v1{1.0, CapacitorSelect::FullC0, 1.0};
  CHECK(pwab_readout(v256, v16, v1, AdcModel::make_ideal()) == 289);

  AnalogAccumulator z256{0, CapacitorSelect::C0Over256, 0};
  AnalogAccumulator z16{0, CapacitorSelect::C0Over16, 0};
  AnalogAccumulator z1{0, CapacitorSelect::FullC0, 0};
  CHECK(pwab_readout(z256, z16, z1, AdcModel::make_ideal()) == 0);

  AnalogAccumulator dup{0, CapacitorSelect::C0Over16, 0};
  CHECK_THROWS_AS(pwab_readout(z256, z16, dup, AdcModel::make_ideal()), ConfigError);
}

TEST_CASE("dpu_dot end to end") {
  const DpuConfig cfg{249, AdcModel::make_ideal()};
  const DotResult r = dpu_dot(cfg, sliced({17}), sliced({17}));
  CHECK(r.value == 289);
  CHECK(r.tally == ConversionTally{3, 1, 0, 0});

  const DotResult z = dpu_dot(cfg, sliced({0, 0}), sliced({0, 0}));
  CHECK(z.value == 0);
  CHECK(z.tally == ConversionTally{3, 1, 0, 0});

  CHECK_THROWS_AS(dpu_dot(cfg, sliced({1}), sliced({1, 2})), ShapeError);
  const DpuConfig tiny{4, AdcModel::make_ideal()};
  CHECK_THROWS_AS(dpu_dot(tiny, sliced({1, 2, 3, 4, 5}), sliced({1, 2, 3, 4, 5})),
                  CapacityError);
}

TEST_CASE("dpu_dot equals the oracle over a randomized sweep") {
  std::mt19937_64 rng(2024);
  const DpuConfig cfg{249, AdcModel::make_ideal()};
  for (int trial = 0; trial < 10000; ++trial) {
    const int len = uniform_int(rng, 1, 249);
    const auto a = random_vec(rng, len);
    const auto b = random_vec(rng, len);
    REQUIRE(dpu_dot(cfg, a, b).value == oracle_dot(a, b));
  }
}

TEST_CASE("baseline_dot matches oracle and dpu_dot with fixed conversion overheads") {
  std::mt19937_64 rng(31);
  const BaselineConfig maw{BaselineOrg::Maw, 43, AdcModel::make_ideal()};
  const BaselineConfig amw{BaselineOrg::Amw, 36, AdcModel::make_ideal()};
  const DpuConfig dpu{43, AdcModel::make_ideal()};

  const DotResult one = baseline_dot(maw, sliced({17}), sliced({17}));
  CHECK(one.value == 289);
  CHECK(one.tally.oe_conversions == 4);
  CHECK(one.tally.adc_conversions == 4);
  CHECK(one.tally.deas_shift_adds == 3);
  CHECK(one.tally.intermediate_memory_bytes >= 8);

  for (int trial = 0; trial < 2000; ++trial) {
    const int len = uniform_int(rng, 1, 36);
    const auto a = random_vec(rng, len);
    const auto b = random_vec(rng, len);
    const std::int64_t want = oracle_dot(a, b);
    REQUIRE(baseline_dot(maw, a, b).value == want);
    REQUIRE(baseline_dot(amw, a, b).value == want);
    REQUIRE(dpu_dot(dpu, a, b).value == want);
  }

  // Tallies are data independent: zero vectors cost the same.
  const DotResult zero = baseline_dot(maw, sliced({0, 0, 0}), sliced({0, 0, 0}));
  CHECK(zero.value == 0);
  CHECK(zero.tally == one.tally);
}

TEST_CASE("conversion tallies keep the 3:4 and 1:4 ratios") {
  const DotResult s = dpu_dot(DpuConfig{8, AdcModel::make_ideal()},
                              sliced({1, 2}), sliced({3, 4}));
  const DotResult b = baseline_dot(BaselineConfig{BaselineOrg::Maw, 8, AdcModel::make_ideal()},
                                   sliced({1, 2}), sliced({3, 4}));
  CHECK(4 * s.tally.oe_conversions == 3 * b.tally.oe_conversions);
  CHECK(4 * s.tally.adc_conversions == 1 * b.tally.adc_conversions);
  CHECK(s.tally.deas_shift_adds == 0);
  CHECK(s.tally.intermediate_memory_bytes == 0);
  CHECK(b.tally.deas_shift_adds == 3);
  CHECK(b.tally.intermediate_memory_bytes > 0);
}

TEST_CASE("baseline intermediate width follows the core capacity") {
  CHECK(baseline_intermediate_bits(1) == 8);
  CHECK(baseline_intermediate_bits(2) == 10);
  CHECK(baseline_intermediate_bits(43) == 20);
  CHECK(baseline_intermediate_bits(249) == 24);
}

TEST_CASE("negating one operand flips the dot sign with magnitude preserved") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const int len = uniform_int(rng, 1, 32);
    std::vector<SlicedInt8> a(len, slice(0));
    const auto b = random_vec(rng, len);
    const int pos = uniform_int(rng, 0, len - 1);
    int v = uniform_int(rng, 1, 255);
    a[pos] = slice(v);
    const DpuConfig cfg{32, AdcModel::make_ideal()};
    const std::int64_t plus = dpu_dot(cfg, a, b).value;
    a[pos] = slice(-v);
    const std::int64_t minus = dpu_dot(cfg, a, b).value;
    CHECK(plus == -minus);
  }
}

TEST_CASE("adc model: ideal exactness, finite monotone idempotent bounded") {
  const AdcModel ideal = AdcModel::make_ideal();
  CHECK(ideal.quantize(288.6) == 289.0);
  CHECK(ideal.quantize(-3.4) == -3.0);

  const AdcModel finite = AdcModel::finite(8, 1000.0);
  std::mt19937_64 rng(15);
  double prev_in = -1500.0, prev_out = finite.quantize(prev_in);
  for (int i = 0; i < 3000; ++i) {
    const double v = -1500.0 + i;
    const double q = finite.quantize(v);
    CHECK(q >= prev_out);  // monotone
    CHECK(finite.quantize(q) == q);  // idempotent
    if (std::abs(v) <= 1000.0) {
      CHECK(std::abs(q - v) <= 1000.0 / 256.0 + 1e-12);  // error <= FS / 2^bits
    }
    prev_out = q;
  }
  CHECK_THROWS_AS(AdcModel::finite(0, 100.0), ConfigError);
  CHECK_THROWS_AS(AdcModel::finite(8, -1.0), ConfigError);
}

TEST_CASE("finite adc keeps small dot products near-exact at high resolution") {
  // 16-bit ADC over the worst-case range of a 249-long dot product.
  const AdcModel adc = AdcModel::finite(16, 249.0 * 255 * 255);
  const DpuConfig cfg{249, adc};
  std::mt19937_64 rng(8);
  const auto a = random_vec(rng, 100);
  const auto b = random_vec(rng, 100);
  const double fs = 249.0 * 255 * 255;
  const double step_bound = fs / 65536.0;
  const auto r = dpu_dot(cfg, a, b);
  CHECK(std::abs(static_cast<double>(r.value - oracle_dot(a, b))) <= step_bound + 1.0);
}
