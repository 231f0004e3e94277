// tests/test_augment.cpp

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
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "spkaug/augment.hpp"
#include "spkaug/spectrum.hpp"
#include "testutil.hpp"

using spkaug::AugmentSpec;
using spkaug::make_pseudo;

namespace {
constexpr int kRate = 8000;
const int64_t kHop = spkaug::wsola_hop(spkaug::WsolaConfig{}, kRate);
}  // namespace

TEST_CASE("alpha_code is canonical and injective on the grid", "[augment]") {
  CHECK(spkaug::alpha_code(0.8) == "080");
  CHECK(spkaug::alpha_code(0.9) == "090");
  CHECK(spkaug::alpha_code(1.0) == "100");
  CHECK(spkaug::alpha_code(1.2) == "120");
  CHECK(spkaug::alpha_code(0.855) == "085.50");
  CHECK(spkaug::alpha_code(0.8555) == "085.55");

  std::set<std::string> seen;
  for (int a4 = 5000; a4 <= 20000; a4 += 37)
    REQUIRE(seen.insert(spkaug::alpha_code(a4 / 10000.0)).second);
}

TEST_CASE("pseudo speaker rendering", "[augment]") {
  CHECK(spkaug::PseudoSpeakerId{"440", 0.9}.render() == "440#sp090");
  CHECK(spkaug::PseudoSpeakerId{"440", 1.0}.render() == "440");
  CHECK(spkaug::PseudoSpeakerId{"spk7", 1.2}.render() == "spk7#sp120");
}

TEST_CASE("make_pseudo identity case", "[augment]") {
  auto clip = testutil::make_voiced(21, 1.0, kRate);
  auto out = make_pseudo(clip, {1.0, true});
  CHECK(out.samples == clip.samples);
}

TEST_CASE("make_pseudo restores duration and scales pitch", "[augment]") {
  auto tone = testutil::make_sine(440, 1.0, kRate);
  auto out = make_pseudo(tone, {0.9, true});
  CHECK(std::llabs(static_cast<int64_t>(out.samples.size()) - 8000) <= kHop);
  CHECK(spkaug::dominant_frequency(out) == Catch::Approx(396.0).epsilon(0.01));
}

TEST_CASE("make_pseudo without tempo restore is resample only", "[augment]") {
  auto clip = testutil::make_sine(440, 1.0, kRate);
  auto out = make_pseudo(clip, {0.9, false});
  CHECK(std::llabs(static_cast<int64_t>(out.samples.size()) - 8889) <= 1);
  CHECK(spkaug::dominant_frequency(out) == Catch::Approx(396.0).epsilon(0.01));
}

TEST_CASE("duration restoration across the default alpha set", "[augment]") {
  auto clip = testutil::make_voiced(22, 1.0, kRate);
  for (double a : spkaug::default_alpha_set()) {
    auto out = make_pseudo(clip, {a, true});
    INFO("alpha=" << a);
    CHECK(std::llabs(static_cast<int64_t>(out.samples.size()) -
                     static_cast<int64_t>(clip.samples.size())) <= kHop);
  }
}

TEST_CASE("pitch law survives the composed pipeline", "[augment]") {
  for (double a : {0.8, 0.9, 1.1, 1.2}) {
    for (double f0 : {200.0, 440.0, 1000.0}) {
      auto out = make_pseudo(testutil::make_sine(f0, 1.0, kRate), {a, true});
      INFO("alpha=" << a << " f0=" << f0);
      CHECK(spkaug::dominant_frequency(out) / f0 == Catch::Approx(a).epsilon(0.015));
    }
  }
}

TEST_CASE("expand_speaker_set counting contracts", "[augment]") {
  std::vector<std::string> many;
  for (int i = 0; i < 101; ++i) many.push_back("spk" + std::to_string(i));
  auto ids = spkaug::expand_speaker_set(many, spkaug::default_alpha_set());
  CHECK(ids.size() == 505);
  std::set<std::string> rendered;
  for (const auto& id : ids) rendered.insert(id.render());
  CHECK(rendered.size() == 505);

  std::vector<std::string> mid;
  for (int i = 0; i < 125; ++i) mid.push_back("m" + std::to_string(i));
  CHECK(spkaug::expand_speaker_set(mid, {0.9, 1.0}).size() == 250);

  auto one = spkaug::expand_speaker_set({"solo"}, {1.0});
  REQUIRE(one.size() == 1);
  CHECK(one[0].render() == "solo");
}

TEST_CASE("expand_speaker_set ordering and determinism", "[augment]") {
  auto ids = spkaug::expand_speaker_set({"b", "a"}, {1.2, 0.8, 1.0});
  REQUIRE(ids.size() == 6);
  CHECK(ids[0].base == "b");
  CHECK(ids[0].alpha == 0.8);
  CHECK(ids[2].alpha == 1.2);
  CHECK(ids[3].base == "a");
  auto again = spkaug::expand_speaker_set({"b", "a"}, {1.2, 0.8, 1.0});
  for (size_t i = 0; i < ids.size(); ++i) {
    CHECK(ids[i].base == again[i].base);
    CHECK(ids[i].alpha == again[i].alpha);
  }
}

TEST_CASE("expand_speaker_set validation", "[augment]") {
  CHECK_THROWS_AS(spkaug::expand_speaker_set({}, {1.0}), spkaug::InvalidInput);
  CHECK_THROWS_AS(spkaug::expand_speaker_set({"a", "a"}, {1.0}),
                  spkaug::InvalidInput);
  CHECK_THROWS_AS(spkaug::expand_speaker_set({"a#sp090"}, {1.0}),
                  spkaug::InvalidInput);
  CHECK_THROWS_AS(spkaug::expand_speaker_set({"a"}, {0.8, 0.9}),
                  spkaug::InvalidInput);  // identity 1.0 missing
  CHECK_THROWS_AS(spkaug::expand_speaker_set({"a"}, {1.0, 1.0}),
                  spkaug::InvalidInput);
}

TEST_CASE("render cache round trip and layout", "[augment]") {
  testutil::TempDir tmp;
  auto src = tmp / "src.wav";
  spkaug::write_wav(src.string(), testutil::make_voiced(30, 0.8, kRate),
                    spkaug::WavEncoding::kFloat32);

  spkaug::RenderCache cache(tmp / "cache");
  auto first = cache.render("s00", "utt0", src.string(), 0.9, true);
  auto expected = cache.path_for("s00", "utt0", 0.9, true);
  CHECK(expected.string().find("s00/utt0_090.wav") != std::string::npos);
  REQUIRE(std::filesystem::exists(expected));

  auto second = cache.render("s00", "utt0", src.string(), 0.9, true);
  CHECK(first.samples == second.samples);

  auto no_tempo = cache.path_for("s00", "utt0", 0.9, false);
  CHECK(no_tempo.string().find("utt0_090_noTempo.wav") != std::string::npos);

  CHECK(std::filesystem::exists(tmp / "cache" / "CACHEVERSION"));
}

TEST_CASE("render cache rejects a foreign version marker", "[augment]") {
  testutil::TempDir tmp;
  std::filesystem::create_directories(tmp / "cache");
  std::ofstream((tmp / "cache" / "CACHEVERSION").string()) << "other-cache-9\n";
  CHECK_THROWS_AS(spkaug::RenderCache(tmp / "cache"), spkaug::FormatError);
}

TEST_CASE("concurrent renders of one key agree", "[augment]") {
  testutil::TempDir tmp;
  auto src = tmp / "src.wav";
  spkaug::write_wav(src.string(), testutil::make_voiced(31, 0.5, kRate),
                    spkaug::WavEncoding::kFloat32);
  spkaug::RenderCache cache(tmp / "cache");

  std::vector<spkaug::AudioClip> results(4);
  std::vector<std::thread> threads;
  for (int i = 0; i < 4; ++i)
    threads.emplace_back([&, i] {
      results[i] = cache.render("sp", "u", src.string(), 1.1, true);
    });
  for (auto& t : threads) t.join();
  for (int i = 1; i < 4; ++i) REQUIRE(results[i].samples == results[0].samples);
}

TEST_CASE("cached render equals a fresh render quantized to float32",
          "[augment]") {
  testutil::TempDir tmp;
  auto clip = testutil::make_voiced(32, 0.6, kRate);
  auto src = tmp / "src.wav";
  spkaug::write_wav(src.string(), clip, spkaug::WavEncoding::kFloat32);

  spkaug::RenderCache cache(tmp / "cache");
  auto cached = cache.render("sp", "u", src.string(), 0.8, true);

  auto direct = make_pseudo(spkaug::read_wav(src.string()), {0.8, true});
  spkaug::peak_normalize(&direct, 1.0);
  spkaug::quantize_float32(&direct);
  CHECK(cached.samples == direct.samples);
}
