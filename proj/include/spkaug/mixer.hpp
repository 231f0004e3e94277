// spkaug/mixer.hpp

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

#ifndef SPKAUG_MIXER_HPP_
#define SPKAUG_MIXER_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>

#include "spkaug/audio.hpp"
#include "spkaug/error.hpp"
#include "spkaug/rng.hpp"

namespace spkaug {

// SNR-controlled mixture synthesis: the interferer (and optional noise) is
// scaled against the target's RMS, components are truncated to the shortest
// length, and the sum is peak-limited to 0.99 with the scale recorded so
// references can be stored consistently.

constexpr double kMixturePeakCeiling = 0.99;

struct SnrDistribution {
  enum class Kind { kUniform, kGaussian, kPoint };
  Kind kind = Kind::kPoint;
  // uniform: a = low dB, b = high dB; gaussian: a = mean dB, b = variance
  // dB^2 (variance, not std); point: a = value dB.
  double a = 0.0;
  double b = 0.0;

  static SnrDistribution uniform(double low, double high) {
    if (low > high) throw InvalidInput("uniform SNR: low > high");
    return {Kind::kUniform, low, high};
  }
  static SnrDistribution gaussian(double mean, double variance) {
    if (variance < 0.0) throw InvalidInput("gaussian SNR: negative variance");
    return {Kind::kGaussian, mean, variance};
  }
  static SnrDistribution point(double value) { return {Kind::kPoint, value, 0.0}; }
};

// Flag syntax: "uniform:LOW:HIGH", "gauss:MEAN:VARIANCE", "point:VALUE"; a
// bare number is shorthand for point.
inline SnrDistribution parse_snr_spec(const std::string& spec) {
  auto parse_num = [&](const std::string& s) {
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw InvalidInput("malformed SNR spec: " + spec);
    }
    if (used != s.size()) throw InvalidInput("malformed SNR spec: " + spec);
    return v;
  };
  auto colon = spec.find(':');
  if (colon == std::string::npos) return SnrDistribution::point(parse_num(spec));
  std::string kind = spec.substr(0, colon);
  std::string rest = spec.substr(colon + 1);
  if (kind == "point") return SnrDistribution::point(parse_num(rest));
  auto colon2 = rest.find(':');
  if (colon2 == std::string::npos) throw InvalidInput("malformed SNR spec: " + spec);
  double first = parse_num(rest.substr(0, colon2));
  double second = parse_num(rest.substr(colon2 + 1));
  if (kind == "uniform") return SnrDistribution::uniform(first, second);
  if (kind == "gauss") return SnrDistribution::gaussian(first, second);
  throw InvalidInput("unknown SNR distribution kind: " + spec);
}

namespace mixer_detail {

// Shortest decimal form that parses back to the same double.
inline std::string render_db(double v) {
  char buf[40];
  for (int prec = 6; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace mixer_detail

inline std::string render_snr_spec(const SnrDistribution& d) {
  using mixer_detail::render_db;
  switch (d.kind) {
    case SnrDistribution::Kind::kUniform:
      return "uniform:" + render_db(d.a) + ":" + render_db(d.b);
    case SnrDistribution::Kind::kGaussian:
      return "gauss:" + render_db(d.a) + ":" + render_db(d.b);
    default:
      return "point:" + render_db(d.a);
  }
}

inline double sample_snr(const SnrDistribution& dist, Rng& rng) {
  switch (dist.kind) {
    case SnrDistribution::Kind::kUniform:
      return rng.uniform(dist.a, dist.b);
    case SnrDistribution::Kind::kGaussian:
      return rng.gaussian(dist.a, std::sqrt(dist.b));
    default:
      return dist.a;
  }
}

// Gain on the interferer making the target/interferer power ratio equal snr:
// g = (rms(target)/rms(interferer)) * 10^(-snr/20).
inline double gain_for_snr(const AudioClip& target, const AudioClip& interferer,
                           double snr_db) {
  double rt = rms(target), ri = rms(interferer);
  if (rt == 0.0) throw InvalidInput("gain_for_snr: zero-energy target");
  if (ri == 0.0) throw InvalidInput("gain_for_snr: zero-energy interferer");
  return rt / ri * std::pow(10.0, -snr_db / 20.0);
}

struct MixtureResult {
  AudioClip mixture;
  double target_gain = 1.0;
  double interferer_gain = 1.0;
  std::optional<double> noise_gain;
  double realized_snr = 0.0;
  double normalization_scale = 1.0;
};

// Components are truncated to the shortest length before gains are computed,
// so the realized SNR holds on the mixed region. The mixture is built as
// (target + g*interferer [+ gn*noise]) * scale in exactly that association,
// and a reference stored as target * scale reproduces the linearity identity
// sample-exactly.
inline MixtureResult mix(const AudioClip& target, const AudioClip& interferer,
                         double snr_db, const AudioClip* noise = nullptr,
                         std::optional<double> noise_snr_db = std::nullopt) {
  if (target.sample_rate != interferer.sample_rate ||
      (noise && noise->sample_rate != target.sample_rate))
    throw InvalidInput("mix: sample-rate mismatch");
  if (noise && !noise_snr_db)
    throw InvalidInput("mix: noise clip supplied without a noise SNR");

  size_t len = std::min(target.samples.size(), interferer.samples.size());
  if (noise) len = std::min(len, noise->samples.size());
  if (len == 0) throw InvalidInput("mix: zero-length overlap");

  AudioClip t{std::vector<double>(target.samples.begin(),
                                  target.samples.begin() + len),
              target.sample_rate};
  AudioClip i{std::vector<double>(interferer.samples.begin(),
                                  interferer.samples.begin() + len),
              target.sample_rate};

  MixtureResult r;
  r.target_gain = 1.0;
  r.interferer_gain = gain_for_snr(t, i, snr_db);

  AudioClip scaled_i = i;
  apply_gain(&scaled_i, r.interferer_gain);
  r.realized_snr = 20.0 * std::log10(rms(t) / rms(scaled_i));

  r.mixture.sample_rate = target.sample_rate;
  r.mixture.samples.resize(len);
  for (size_t k = 0; k < len; ++k)
    r.mixture.samples[k] = t.samples[k] + scaled_i.samples[k];

  if (noise) {
    AudioClip n{std::vector<double>(noise->samples.begin(),
                                    noise->samples.begin() + len),
                target.sample_rate};
    r.noise_gain = gain_for_snr(t, n, *noise_snr_db);
    for (size_t k = 0; k < len; ++k)
      r.mixture.samples[k] += *r.noise_gain * n.samples[k];
  }

  r.normalization_scale = peak_normalize(&r.mixture, kMixturePeakCeiling);
  return r;
}

}  // namespace spkaug

#endif  // SPKAUG_MIXER_HPP_
