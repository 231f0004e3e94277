// spkaug/spectrum.hpp

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

#ifndef SPKAUG_SPECTRUM_HPP_
#define SPKAUG_SPECTRUM_HPP_

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "spkaug/audio.hpp"
#include "spkaug/error.hpp"

namespace spkaug {
namespace spectrum_detail {

// In-place iterative radix-2 FFT; data.size() must be a power of two.
inline void fft(std::vector<std::complex<double>>* data) {
  const size_t n = data->size();
  auto& a = *data;
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * 3.14159265358979323846 / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t j = 0; j < len / 2; ++j) {
        std::complex<double> u = a[i + j];
        std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

}  // namespace spectrum_detail

// Frequency of the strongest spectral component: Hann window, zero-padded
// power-of-two FFT, parabolic interpolation over the peak bin's log
// magnitude. Intended as a measurement oracle for pitch-ratio checks, so it
// resolves well below one bin on clean tones.
inline double dominant_frequency(const AudioClip& clip) {
  const size_t n = clip.samples.size();
  if (n < 256) throw InvalidInput("dominant_frequency: clip shorter than 256 samples");
  if (clip.sample_rate <= 0) throw InvalidInput("dominant_frequency: invalid sample rate");

  size_t m = 1;
  while (m < 2 * n) m <<= 1;

  std::vector<std::complex<double>> buf(m, {0.0, 0.0});
  const double two_pi = 6.28318530717958647692528676656;
  for (size_t i = 0; i < n; ++i) {
    double w = 0.5 - 0.5 * std::cos(two_pi * static_cast<double>(i) / static_cast<double>(n));
    buf[i] = clip.samples[i] * w;
  }
  spectrum_detail::fft(&buf);

  const size_t half = m / 2;
  size_t best = 0;
  double best_mag = -1.0;
  for (size_t k = 0; k <= half; ++k) {
    double mag = std::abs(buf[k]);
    if (mag > best_mag) {
      best_mag = mag;
      best = k;
    }
  }

  double delta = 0.0;
  if (best > 0 && best < half) {
    double l = std::abs(buf[best - 1]);
    double c = std::abs(buf[best]);
    double r = std::abs(buf[best + 1]);
    if (l > 0.0 && c > 0.0 && r > 0.0) {
      double la = std::log(l), ca = std::log(c), ra = std::log(r);
      double denom = la - 2.0 * ca + ra;
      if (denom != 0.0) delta = 0.5 * (la - ra) / denom;
    }
  }
  return (static_cast<double>(best) + delta) * clip.sample_rate / static_cast<double>(m);
}

}  // namespace spkaug

#endif  // SPKAUG_SPECTRUM_HPP_
