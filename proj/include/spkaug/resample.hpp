// spkaug/resample.hpp

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

#ifndef SPKAUG_RESAMPLE_HPP_
#define SPKAUG_RESAMPLE_HPP_

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <utility>
#include <vector>

#include "spkaug/audio.hpp"
#include "spkaug/error.hpp"

namespace spkaug {

// Speed perturbation y[n] = x(alpha * n): duration scales by 1/alpha, every
// spectral component moves from f to alpha*f. Interpolation is a Kaiser
// windowed sinc (beta 8.6, 32 zero crossings per side) with a low-pass
// cutoff of 0.95/alpha when alpha > 1 to suppress aliasing.

constexpr double kAlphaMin = 0.5;
constexpr double kAlphaMax = 2.0;
constexpr double kKaiserBeta = 8.6;
constexpr int kSincZeroCrossings = 32;
constexpr int64_t kDefaultMaxOutputSamples = 1000000000;

// alpha is snapped to 4 decimal places everywhere (resampling arithmetic and
// pseudo-speaker identifiers) so results are stable across platforms.
inline int64_t alpha_e4(double alpha) {
  if (!(alpha >= kAlphaMin && alpha <= kAlphaMax))
    throw InvalidInput("alpha out of [0.5, 2.0]: " + std::to_string(alpha));
  return std::llround(alpha * 10000.0);
}

namespace resample_detail {

inline double bessel_i0(double x) {
  double sum = 1.0, term = 1.0;
  const double q = x * x * 0.25;
  for (int k = 1; k < 64; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

// Kernel value at offset x (input-sample units). cutoff is the low-pass
// frequency as a fraction of Nyquist; support is |x| < half_width.
inline double kernel_value(double x, double cutoff, double half_width,
                           double inv_i0_beta) {
  double v = x / half_width;
  if (v <= -1.0 || v >= 1.0) return 0.0;
  const double pi = 3.14159265358979323846;
  double u = pi * x * cutoff;
  double s = u == 0.0 ? 1.0 : std::sin(u) / u;
  double w = bessel_i0(kKaiserBeta * std::sqrt(1.0 - v * v)) * inv_i0_beta;
  return cutoff * s * w;
}

struct PhaseWeights {
  int64_t klo = 0;
  std::vector<double> w;
};

// Normalized tap weights for the fractional phase frac = rem/q: output sample
// y[n] with input position idx + frac uses sum_k w[k - klo] * x[idx + k].
inline PhaseWeights phase_weights(double frac, double cutoff, double half_width) {
  PhaseWeights pw;
  pw.klo = static_cast<int64_t>(std::ceil(frac - half_width));
  int64_t khi = static_cast<int64_t>(std::floor(frac + half_width));
  pw.w.resize(static_cast<size_t>(khi - pw.klo + 1));
  const double inv_i0 = 1.0 / bessel_i0(kKaiserBeta);
  double sum = 0.0;
  for (int64_t k = pw.klo; k <= khi; ++k) {
    double v = kernel_value(frac - static_cast<double>(k), cutoff, half_width, inv_i0);
    pw.w[static_cast<size_t>(k - pw.klo)] = v;
    sum += v;
  }
  if (sum != 0.0) {
    double inv = 1.0 / sum;
    for (double& v : pw.w) v *= inv;
  }
  return pw;
}

struct KernelTable {
  int64_t p = 1, q = 1;
  double cutoff = 1.0;
  double half_width = kSincZeroCrossings;
  std::vector<PhaseWeights> phases;  // q entries when tabulated, else empty
};

constexpr int64_t kMaxPolyphase = 1024;

inline std::shared_ptr<const KernelTable> kernel_table_for(int64_t a4) {
  static std::mutex mu;
  static std::map<int64_t, std::shared_ptr<const KernelTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(a4);
  if (it != cache.end()) return it->second;

  auto table = std::make_shared<KernelTable>();
  int64_t g = std::gcd(a4, static_cast<int64_t>(10000));
  table->p = a4 / g;
  table->q = 10000 / g;
  double alpha = static_cast<double>(table->p) / static_cast<double>(table->q);
  table->cutoff = alpha > 1.0 ? 0.95 / alpha : 1.0;
  table->half_width = kSincZeroCrossings / table->cutoff;
  if (table->q <= kMaxPolyphase) {
    table->phases.resize(static_cast<size_t>(table->q));
    for (int64_t r = 0; r < table->q; ++r) {
      double frac = static_cast<double>(r) / static_cast<double>(table->q);
      table->phases[static_cast<size_t>(r)] =
          phase_weights(frac, table->cutoff, table->half_width);
    }
  }
  cache.emplace(a4, table);
  return table;
}

}  // namespace resample_detail

inline AudioClip resample(const AudioClip& clip, double alpha,
                          int64_t max_output_samples = kDefaultMaxOutputSamples) {
  const int64_t a4 = alpha_e4(alpha);
  if (a4 == 10000) return clip;

  auto table = resample_detail::kernel_table_for(a4);
  const int64_t p = table->p, q = table->q;
  const int64_t n_in = static_cast<int64_t>(clip.samples.size());
  const int64_t n_out = (n_in * q + p / 2) / p;
  if (n_out > max_output_samples)
    throw InvalidInput("resample output would exceed the configured maximum length");

  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples.assign(static_cast<size_t>(n_out), 0.0);
  const double* x = clip.samples.data();

  auto accumulate = [&](int64_t n, int64_t idx,
                        const resample_detail::PhaseWeights& pw) {
    double acc = 0.0;
    int64_t jlo = idx + pw.klo;
    for (size_t m = 0; m < pw.w.size(); ++m) {
      int64_t j = jlo + static_cast<int64_t>(m);
      if (j >= 0 && j < n_in) acc += pw.w[m] * x[j];
    }
    out.samples[static_cast<size_t>(n)] = acc;
  };

  if (!table->phases.empty()) {
    for (int64_t n = 0; n < n_out; ++n) {
      int64_t num = n * p;
      accumulate(n, num / q, table->phases[static_cast<size_t>(num % q)]);
    }
  } else {
    for (int64_t n = 0; n < n_out; ++n) {
      int64_t num = n * p;
      double frac = static_cast<double>(num % q) / static_cast<double>(q);
      auto pw = resample_detail::phase_weights(frac, table->cutoff, table->half_width);
      accumulate(n, num / q, pw);
    }
  }
  return out;
}

}  // namespace spkaug

#endif  // SPKAUG_RESAMPLE_HPP_
