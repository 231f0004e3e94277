// tests/test_wsola.cpp

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
#include <cstdlib>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "spkaug/spectrum.hpp"
#include "spkaug/wsola.hpp"
#include "testutil.hpp"

using spkaug::time_stretch;
using spkaug::WsolaConfig;

namespace {
constexpr int kRate = 8000;
const int64_t kHop = spkaug::wsola_hop(WsolaConfig{}, kRate);
}  // namespace

TEST_CASE("factor 1.0 returns the input unchanged", "[wsola]") {
  auto clip = testutil::make_voiced(5, 1.0, kRate);
  auto out = time_stretch(clip, 1.0);
  CHECK(out.samples == clip.samples);
}

TEST_CASE("duration contract at factor 2", "[wsola]") {
  auto clip = testutil::make_voiced(6, 2.0, kRate);
  REQUIRE(clip.samples.size() == 16000);
  auto out = time_stretch(clip, 2.0);
  CHECK(std::llabs(static_cast<int64_t>(out.samples.size()) - 8000) <= kHop);
}

TEST_CASE("slowdown keeps pitch while stretching duration", "[wsola]") {
  auto tone = testutil::make_sine(440, 1.0, kRate);
  auto out = time_stretch(tone, 0.8);
  CHECK(std::llabs(static_cast<int64_t>(out.samples.size()) - 10000) <= kHop);
  CHECK(spkaug::dominant_frequency(out) == Catch::Approx(440.0).epsilon(0.01));
}

TEST_CASE("pitch preservation across tones and factors", "[wsola]") {
  for (double f0 : {100.0, 250.0, 500.0, 1000.0, 2000.0}) {
    auto tone = testutil::make_sine(f0, 1.0, kRate);
    for (double factor : {0.8, 0.9, 1.1, 1.2, 1.25}) {
      auto out = time_stretch(tone, factor);
      INFO("f0=" << f0 << " factor=" << factor);
      CHECK(spkaug::dominant_frequency(out) / f0 ==
            Catch::Approx(1.0).epsilon(0.01));
    }
  }
}

TEST_CASE("duration law across factors and lengths", "[wsola]") {
  for (size_t n : {1600u, 8000u, 12000u}) {
    auto clip = testutil::make_voiced(n, static_cast<double>(n) / kRate, kRate);
    for (double factor : {0.5, 0.8, 1.25, 2.0}) {
      auto out = time_stretch(clip, factor);
      double expect = static_cast<double>(n) / factor;
      CHECK(std::fabs(static_cast<double>(out.samples.size()) - expect) <=
            static_cast<double>(kHop));
    }
  }
}

TEST_CASE("amplitude never exceeds the input peak", "[wsola]") {
  auto clip = testutil::make_voiced(9, 1.5, kRate);
  double in_peak = spkaug::peak(clip);
  for (double factor : {0.8, 1.25}) {
    auto out = time_stretch(clip, factor);
    CHECK(spkaug::peak(out) <= in_peak + 1e-6);
  }
}

TEST_CASE("silence maps to silence", "[wsola]") {
  spkaug::AudioClip zero{std::vector<double>(8000, 0.0), kRate};
  auto out = time_stretch(zero, 0.9);
  for (double s : out.samples) REQUIRE(s == 0.0);
}

TEST_CASE("input and factor validation", "[wsola]") {
  auto clip = testutil::make_voiced(10, 1.0, kRate);
  CHECK_THROWS_AS(time_stretch(clip, 0.49), spkaug::InvalidInput);
  CHECK_THROWS_AS(time_stretch(clip, 2.01), spkaug::InvalidInput);

  spkaug::AudioClip tiny{std::vector<double>(100, 0.1), kRate};
  CHECK_THROWS_AS(time_stretch(tiny, 0.9), spkaug::InvalidInput);

  WsolaConfig bad;
  bad.overlap_ratio = 1.0;
  CHECK_THROWS_AS(time_stretch(clip, 0.9, bad), spkaug::InvalidInput);
  bad = WsolaConfig{};
  bad.frame_ms = 1.0;  // 8 samples at 8 kHz, below the 64-sample floor
  CHECK_THROWS_AS(time_stretch(clip, 0.9, bad), spkaug::InvalidInput);
  bad = WsolaConfig{};
  bad.search_ms = 0.0;
  CHECK_THROWS_AS(time_stretch(clip, 0.9, bad), spkaug::InvalidInput);
}

TEST_CASE("best_offset perfect alignment and degenerate cases", "[wsola]") {
  auto tail = testutil::make_sine(200, 0.03, kRate).samples;
  std::vector<double> region = tail;
  region.resize(tail.size() + 20, 0.0);
  CHECK(spkaug::best_offset(tail, region, 0, 8) == 0);

  std::vector<double> zeros(tail.size(), 0.0);
  CHECK(spkaug::best_offset(zeros, region, 0, 8) == 0);
}

TEST_CASE("best_offset finds a known delay", "[wsola]") {
  // One cycle of a 100 Hz sine; candidates delayed by 3 samples.
  auto cycle = testutil::make_sine(100, 0.01, kRate).samples;
  std::vector<double> region(cycle.size() + 16, 0.0);
  for (size_t i = 0; i < cycle.size(); ++i) region[i + 3] = cycle[i];
  CHECK(spkaug::best_offset(cycle, region, 0, 8) == 3);
}

TEST_CASE("best_offset matches brute-force correlation", "[wsola]") {
  auto tail_clip = testutil::make_voiced(77, 0.0125, kRate);
  const auto& tail = tail_clip.samples;
  auto region = testutil::make_voiced(78, 0.1, kRate).samples;
  const int64_t center = 300, search = 60;

  auto ncc = [&](int64_t d) {
    double dot = 0, te = 0, ce = 0;
    for (size_t j = 0; j < tail.size(); ++j) {
      int64_t idx = center + d + static_cast<int64_t>(j);
      double c = idx >= 0 && idx < static_cast<int64_t>(region.size())
                     ? region[idx]
                     : 0.0;
      dot += tail[j] * c;
      te += tail[j] * tail[j];
      ce += c * c;
    }
    return te * ce > 0 ? dot / std::sqrt(te * ce) : 0.0;
  };
  int64_t best_d = 0;
  double best = -2;
  for (int64_t d = -search; d <= search; ++d) {
    double s = ncc(d);
    if (s > best || (s == best && std::llabs(d) < std::llabs(best_d))) {
      best = s;
      best_d = d;
    }
  }
  CHECK(spkaug::best_offset(tail, region, center, search) == best_d);
}
