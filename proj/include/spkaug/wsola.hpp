// spkaug/wsola.hpp

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

#ifndef SPKAUG_WSOLA_HPP_
#define SPKAUG_WSOLA_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <vector>

#include "spkaug/audio.hpp"
#include "spkaug/error.hpp"

namespace spkaug {

// Waveform-similarity overlap-add time stretching: changes tempo by factor
// while preserving pitch. Used to restore the original duration after speed
// perturbation.

struct WsolaConfig {
  double frame_ms = 25.0;
  double overlap_ratio = 0.5;
  double search_ms = 7.5;
};

namespace wsola_detail {

struct Layout {
  int64_t frame;    // analysis/synthesis frame length, samples
  int64_t hop;      // synthesis hop, frame * (1 - overlap_ratio)
  int64_t overlap;  // cross-fade window length, frame - hop
  int64_t search;   // alignment tolerance half-width, samples
};

inline Layout layout_for(const WsolaConfig& cfg, int sample_rate) {
  if (sample_rate <= 0) throw InvalidInput("wsola: sample_rate must be positive");
  if (!(cfg.overlap_ratio > 0.0 && cfg.overlap_ratio < 1.0))
    throw InvalidInput("wsola: overlap_ratio must lie in (0, 1)");
  Layout l;
  l.frame = std::llround(cfg.frame_ms * sample_rate / 1000.0);
  if (l.frame < 64) throw InvalidInput("wsola: frame shorter than 64 samples");
  l.hop = std::llround(static_cast<double>(l.frame) * (1.0 - cfg.overlap_ratio));
  l.overlap = l.frame - l.hop;
  if (l.hop < 1 || l.overlap < 1)
    throw InvalidInput("wsola: degenerate hop or overlap length");
  l.search = std::llround(cfg.search_ms * sample_rate / 1000.0);
  if (l.search < 1) throw InvalidInput("wsola: search window shorter than 1 sample");
  return l;
}

}  // namespace wsola_detail

inline int64_t wsola_hop(const WsolaConfig& cfg, int sample_rate) {
  return wsola_detail::layout_for(cfg, sample_rate).hop;
}

// Offset d in [-search, search] maximizing normalized cross-correlation of
// tail[0..v) against region[center + d .. center + d + v); out-of-range
// region samples read as zero. Ties break toward the smallest |d|; a
// zero-energy window scores 0, so a degenerate tail returns 0.
inline int64_t best_offset(const double* tail, int64_t v, const double* region,
                           int64_t region_len, int64_t center, int64_t search) {
  if (v < 1) throw InvalidInput("best_offset: empty comparison window");
  double tail_energy = 0.0;
  for (int64_t j = 0; j < v; ++j) tail_energy += tail[j] * tail[j];

  int64_t best_d = 0;
  double best_score = -2.0;
  for (int64_t d = -search; d <= search; ++d) {
    double dot = 0.0, cand_energy = 0.0;
    int64_t base = center + d;
    int64_t jlo = base < 0 ? -base : 0;
    int64_t jhi = base + v > region_len ? region_len - base : v;
    for (int64_t j = jlo; j < jhi; ++j) {
      double c = region[base + j];
      dot += tail[j] * c;
      cand_energy += c * c;
    }
    double denom = tail_energy * cand_energy;
    double score = denom > 0.0 ? dot / std::sqrt(denom) : 0.0;
    if (score > best_score ||
        (score == best_score && std::llabs(d) < std::llabs(best_d))) {
      best_score = score;
      best_d = d;
    }
  }
  return best_d;
}

inline int64_t best_offset(const std::vector<double>& tail,
                           const std::vector<double>& region, int64_t center,
                           int64_t search) {
  return best_offset(tail.data(), static_cast<int64_t>(tail.size()), region.data(),
                     static_cast<int64_t>(region.size()), center, search);
}

// Output length is exactly round(len(input)/factor). Each synthesis frame is
// taken from its nominal input position, shifted within the search window to
// maximize similarity with the audio already written, and cross-faded with a
// raised-cosine pair that sums to one (so |out| never exceeds |in|). Reads
// past the input end are zeros, which fades the final partial frame out.
inline AudioClip time_stretch(const AudioClip& clip, double factor,
                              const WsolaConfig& cfg = {}) {
  if (!(factor >= 0.5 && factor <= 2.0))
    throw InvalidInput("time_stretch: factor out of [0.5, 2.0]");
  const auto l = wsola_detail::layout_for(cfg, clip.sample_rate);
  const int64_t n_in = static_cast<int64_t>(clip.samples.size());
  if (n_in < l.frame) throw InvalidInput("time_stretch: clip shorter than one frame");
  if (factor == 1.0) return clip;

  const int64_t n_out = std::llround(static_cast<double>(n_in) / factor);
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples.assign(static_cast<size_t>(n_out), 0.0);
  const double* x = clip.samples.data();
  auto x_at = [&](int64_t j) { return j >= 0 && j < n_in ? x[j] : 0.0; };

  std::vector<double> w(static_cast<size_t>(l.overlap));
  const double pi = 3.14159265358979323846;
  for (int64_t j = 0; j < l.overlap; ++j)
    w[static_cast<size_t>(j)] =
        0.5 - 0.5 * std::cos(pi * (static_cast<double>(j) + 0.5) /
                             static_cast<double>(l.overlap));

  for (int64_t j = 0; j < std::min(l.frame, n_out); ++j) out.samples[j] = x[j];

  for (int64_t s = l.hop; s < n_out; s += l.hop) {
    int64_t p = std::llround(static_cast<double>(s) * factor);
    int64_t v = std::min(l.overlap, n_out - s);
    int64_t d = best_offset(out.samples.data() + s, v, x, n_in, p, l.search);
    for (int64_t j = 0; j < v; ++j) {
      double blend = w[static_cast<size_t>(j)];
      out.samples[s + j] =
          out.samples[s + j] * (1.0 - blend) + x_at(p + d + j) * blend;
    }
    for (int64_t j = v; j < l.frame && s + j < n_out; ++j)
      out.samples[s + j] = x_at(p + d + j);
  }
  return out;
}

}  // namespace spkaug

#endif  // SPKAUG_WSOLA_HPP_
