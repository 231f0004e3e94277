// tests/test_mixer.cpp

// Copyright 2026  spkaug authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "spkaug/mixer.hpp"
#include "testutil.hpp"

using spkaug::AudioClip;
using spkaug::mix;
using spkaug::Rng;
using spkaug::SnrDistribution;

namespace {
constexpr int kRate = 8000;

double measured_snr(const AudioClip& t, const AudioClip& scaled_i) {
  double pt = 0, pi = 0;
  for (double s : t.samples) pt += s * s;
  for (double s : scaled_i.samples) pi += s * s;
  return 10.0 * std::log10(pt / pi);
}
}  // namespace

TEST_CASE("snr spec parsing", "[mixer]") {
  auto u = spkaug::parse_snr_spec("uniform:-5:5");
  CHECK(u.kind == SnrDistribution::Kind::kUniform);
  CHECK(u.a == -5.0);
  CHECK(u.b == 5.0);

  auto g = spkaug::parse_snr_spec("gauss:0:16.81");
  CHECK(g.kind == SnrDistribution::Kind::kGaussian);
  CHECK(g.b == 16.81);

  auto p = spkaug::parse_snr_spec("point:3.0");
  CHECK(p.kind == SnrDistribution::Kind::kPoint);
  CHECK(p.a == 3.0);

  auto bare = spkaug::parse_snr_spec("3");
  CHECK(bare.kind == SnrDistribution::Kind::kPoint);
  CHECK(bare.a == 3.0);

  CHECK_THROWS_AS(spkaug::parse_snr_spec("triangular:1:2"), spkaug::InvalidInput);
  CHECK_THROWS_AS(spkaug::parse_snr_spec("uniform:5"), spkaug::InvalidInput);
  CHECK_THROWS_AS(spkaug::parse_snr_spec("uniform:5:-5"), spkaug::InvalidInput);
  CHECK_THROWS_AS(spkaug::parse_snr_spec("gauss:0:-1"), spkaug::InvalidInput);
  CHECK_THROWS_AS(spkaug::parse_snr_spec("point:abc"), spkaug::InvalidInput);
}

TEST_CASE("sample_snr per distribution kind", "[mixer]") {
  Rng rng(123);
  CHECK(spkaug::sample_snr(SnrDistribution::point(3.0), rng) == 3.0);

  auto uni = SnrDistribution::uniform(-5, 5);
  for (int i = 0; i < 1000; ++i) {
    double v = spkaug::sample_snr(uni, rng);
    REQUIRE(v >= -5.0);
    REQUIRE(v <= 5.0);
  }

  auto gauss = SnrDistribution::gaussian(0.0, 16.81);
  double sum = 0, sq = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double v = spkaug::sample_snr(gauss, rng);
    sum += v;
    sq += v * v;
  }
  double mean = sum / n;
  double stddev = std::sqrt(sq / n - mean * mean);
  CHECK(mean == Catch::Approx(0.0).margin(0.06));
  CHECK(stddev == Catch::Approx(4.1).margin(0.05));
}

TEST_CASE("sample_snr is deterministic per seed", "[mixer]") {
  auto dist = SnrDistribution::uniform(-5, 5);
  Rng a = Rng::derive(99, 4);
  Rng b = Rng::derive(99, 4);
  for (int i = 0; i < 32; ++i)
    REQUIRE(spkaug::sample_snr(dist, a) == spkaug::sample_snr(dist, b));
}

TEST_CASE("gain_for_snr hand cases", "[mixer]") {
  auto a = testutil::make_sine(440, 0.5, kRate, 0.3);
  CHECK(spkaug::gain_for_snr(a, a, 0.0) == 1.0);

  double snr_half = 20.0 * std::log10(2.0);
  CHECK(spkaug::gain_for_snr(a, a, snr_half) == Catch::Approx(0.5).margin(1e-12));

  AudioClip t{std::vector<double>(100, 0.2), kRate};
  AudioClip i{std::vector<double>(100, 0.1), kRate};
  CHECK(spkaug::gain_for_snr(t, i, 0.0) == Catch::Approx(2.0).margin(1e-12));

  AudioClip silent{std::vector<double>(100, 0.0), kRate};
  CHECK_THROWS_AS(spkaug::gain_for_snr(silent, a, 0.0), spkaug::InvalidInput);
  CHECK_THROWS_AS(spkaug::gain_for_snr(a, silent, 0.0), spkaug::InvalidInput);
}

TEST_CASE("self-mix at 0 dB doubles the clip", "[mixer]") {
  auto clip = testutil::make_sine(440, 0.5, kRate, 0.3);
  auto res = mix(clip, clip, 0.0);
  CHECK(res.interferer_gain == 1.0);
  CHECK(res.normalization_scale == 1.0);
  CHECK(res.realized_snr == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(res.mixture.samples.size() == clip.samples.size());
  for (size_t k = 0; k < clip.samples.size(); ++k)
    REQUIRE(res.mixture.samples[k] == 2.0 * clip.samples[k]);
}

TEST_CASE("min-length truncation", "[mixer]") {
  auto t = testutil::make_noise(50, 8000, kRate);
  auto i = testutil::make_noise(51, 7000, kRate);
  CHECK(mix(t, i, 0.0).mixture.samples.size() == 7000);
}

TEST_CASE("orthogonal tones realize the requested SNR", "[mixer]") {
  auto t = testutil::make_sine(440, 1.0, kRate, 0.3);
  auto i = testutil::make_sine(1320, 1.0, kRate, 0.3);
  double snr = 20.0 * std::log10(2.0);
  auto res = mix(t, i, snr);

  AudioClip scaled_i = i;
  spkaug::apply_gain(&scaled_i, res.interferer_gain);
  CHECK(measured_snr(t, scaled_i) == Catch::Approx(snr).margin(1e-6));
  CHECK(res.realized_snr == Catch::Approx(snr).margin(1e-6));
}

TEST_CASE("SNR realization property over random inputs", "[mixer]") {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    auto t = testutil::make_voiced(3000 + trial, 0.5, kRate);
    auto i = testutil::make_voiced(4000 + trial, 0.6, kRate);
    double snr = rng.uniform(-10.0, 10.0);
    auto res = mix(t, i, snr);

    AudioClip tt{std::vector<double>(t.samples.begin(),
                                     t.samples.begin() + res.mixture.samples.size()),
                 kRate};
    AudioClip ii{std::vector<double>(i.samples.begin(),
                                     i.samples.begin() + res.mixture.samples.size()),
                 kRate};
    spkaug::apply_gain(&ii, res.interferer_gain);
    REQUIRE(measured_snr(tt, ii) == Catch::Approx(snr).margin(1e-6));
  }
}

TEST_CASE("normalization only attenuates and records the scale", "[mixer]") {
  auto t = testutil::make_sine(300, 0.5, kRate, 0.9);
  auto i = testutil::make_sine(700, 0.5, kRate, 0.9);
  auto res = mix(t, i, 0.0);
  CHECK(res.normalization_scale < 1.0);
  CHECK(spkaug::peak(res.mixture) == Catch::Approx(0.99).margin(1e-9));

  auto quiet = mix(testutil::make_sine(300, 0.5, kRate, 0.05),
                   testutil::make_sine(700, 0.5, kRate, 0.05), 0.0);
  CHECK(quiet.normalization_scale == 1.0);
}

TEST_CASE("mixture linearity is sample-exact", "[mixer]") {
  auto t = testutil::make_voiced(60, 0.5, kRate);
  auto i = testutil::make_voiced(61, 0.5, kRate);
  auto n = testutil::make_noise(62, t.samples.size(), kRate, 0.2);
  auto res = mix(t, i, 2.5, &n, 15.0);
  REQUIRE(res.noise_gain.has_value());

  size_t len = res.mixture.samples.size();
  for (size_t k = 0; k < len; ++k) {
    double sum = t.samples[k] * res.target_gain +
                 res.interferer_gain * i.samples[k];
    sum += *res.noise_gain * n.samples[k];
    REQUIRE(res.mixture.samples[k] == sum * res.normalization_scale);
  }
}

TEST_CASE("noise is scaled against the target", "[mixer]") {
  auto t = testutil::make_sine(440, 0.5, kRate, 0.3);
  auto i = testutil::make_sine(1320, 0.5, kRate, 0.3);
  auto n = testutil::make_noise(63, t.samples.size(), kRate, 0.3);
  auto res = mix(t, i, 0.0, &n, 10.0);

  AudioClip scaled_n = n;
  spkaug::apply_gain(&scaled_n, *res.noise_gain);
  CHECK(measured_snr(t, scaled_n) == Catch::Approx(10.0).margin(1e-6));
}

TEST_CASE("mix validation errors", "[mixer]") {
  auto t = testutil::make_sine(440, 0.5, kRate, 0.3);
  AudioClip wrong_rate = t;
  wrong_rate.sample_rate = 16000;
  CHECK_THROWS_AS(mix(t, wrong_rate, 0.0), spkaug::InvalidInput);

  AudioClip empty{{}, kRate};
  CHECK_THROWS_AS(mix(t, empty, 0.0), spkaug::InvalidInput);

  auto n = testutil::make_noise(64, 100, kRate);
  CHECK_THROWS_AS(mix(t, t, 0.0, &n, std::nullopt), spkaug::InvalidInput);
}

TEST_CASE("mix determinism", "[mixer]") {
  auto t = testutil::make_voiced(70, 0.5, kRate);
  auto i = testutil::make_voiced(71, 0.5, kRate);
  auto a = mix(t, i, 1.25);
  auto b = mix(t, i, 1.25);
  CHECK(a.mixture.samples == b.mixture.samples);
  CHECK(a.interferer_gain == b.interferer_gain);
  CHECK(a.normalization_scale == b.normalization_scale);
}
