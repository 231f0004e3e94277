// spkaug/audio.hpp

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

#ifndef SPKAUG_AUDIO_HPP_
#define SPKAUG_AUDIO_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "spkaug/error.hpp"

namespace spkaug {

// Mono audio buffer. Samples are double so that gain scaling, mixing and
// metric computation stay exact to well below any tolerance used downstream;
// narrowing happens only at the file boundary in wav.hpp.
struct AudioClip {
  std::vector<double> samples;
  int sample_rate = 0;

  size_t size() const { return samples.size(); }
  double duration() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

inline double rms(const AudioClip& clip) {
  if (clip.samples.empty()) return 0.0;
  double acc = 0.0;
  for (double s : clip.samples) acc += s * s;
  return std::sqrt(acc / static_cast<double>(clip.samples.size()));
}

inline double peak(const AudioClip& clip) {
  double m = 0.0;
  for (double s : clip.samples) m = std::max(m, std::fabs(s));
  return m;
}

// Attenuate-only normalization: if the peak exceeds `limit`, scale the whole
// clip down to meet it; otherwise leave the clip untouched. Returns the scale
// actually applied (1.0 when nothing was done).
inline double peak_normalize(AudioClip* clip, double limit) {
  if (limit <= 0.0) throw InvalidInput("peak_normalize: limit must be positive");
  double p = peak(*clip);
  if (p <= limit || p == 0.0) return 1.0;
  double scale = limit / p;
  for (double& s : clip->samples) s *= scale;
  return scale;
}

inline void apply_gain(AudioClip* clip, double gain) {
  for (double& s : clip->samples) s *= gain;
}

// Quantizes through the float32 grid, matching exactly what a float32 WAV
// round-trip produces; lets in-memory results mirror file-backed ones
// bit for bit.
inline void quantize_float32(AudioClip* clip) {
  for (double& s : clip->samples) s = static_cast<double>(static_cast<float>(s));
}

}  // namespace spkaug

#endif  // SPKAUG_AUDIO_HPP_
