// spkaug/augment.hpp

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

#ifndef SPKAUG_AUGMENT_HPP_
#define SPKAUG_AUGMENT_HPP_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <unistd.h>

#include "spkaug/audio.hpp"
#include "spkaug/error.hpp"
#include "spkaug/resample.hpp"
#include "spkaug/wav.hpp"
#include "spkaug/wsola.hpp"

namespace spkaug {

// Pseudo-speaker pipeline: resampling by alpha shifts speaker traits, WSOLA
// by 1/alpha restores the original tempo, and (base speaker, alpha) becomes a
// new speaker identity.

// Canonical alpha fragment used in identifiers and cache filenames. Built
// from alpha snapped to 4 decimals, so it is injective on that grid:
// 0.9 -> "090", 1.0 -> "100", 0.8555 -> "085.55".
inline std::string alpha_code(double alpha) {
  int64_t a4 = alpha_e4(alpha);  // alpha_e4 bounds alpha to [0.5, 2.0]
  char buf[32];
  if (a4 % 100 == 0) {
    std::snprintf(buf, sizeof(buf), "%03lld", static_cast<long long>(a4 / 100));
  } else {
    std::snprintf(buf, sizeof(buf), "%03lld.%02lld", static_cast<long long>(a4 / 100),
                  static_cast<long long>(a4 % 100));
  }
  return buf;
}

struct PseudoSpeakerId {
  std::string base;
  double alpha = 1.0;

  // alpha = 1.0 is the original speaker and keeps the bare base label;
  // other factors append "#sp" + alpha_code. Base labels may not contain
  // "#sp" (enforced at expansion/scan time), keeping the rendering injective.
  std::string render() const {
    if (alpha_e4(alpha) == 10000) return base;
    return base + "#sp" + alpha_code(alpha);
  }
};

struct AugmentSpec {
  double alpha = 1.0;
  bool restore_tempo = true;
};

inline AudioClip make_pseudo(const AudioClip& clip, const AugmentSpec& spec,
                             const WsolaConfig& cfg = {}) {
  if (alpha_e4(spec.alpha) == 10000) return clip;
  AudioClip resampled = resample(clip, spec.alpha);
  if (!spec.restore_tempo) return resampled;
  return time_stretch(resampled, 1.0 / spec.alpha, cfg);
}

using AlphaSet = std::vector<double>;

// Validates and canonicalizes an alpha set: values distinct on the 4-decimal
// grid, within bounds, containing the identity 1.0; returned ascending.
inline AlphaSet validate_alpha_set(const AlphaSet& alphas) {
  if (alphas.empty()) throw InvalidInput("alpha set is empty");
  std::set<int64_t> seen;
  bool has_identity = false;
  for (double a : alphas) {
    int64_t a4 = alpha_e4(a);
    if (!seen.insert(a4).second)
      throw InvalidInput("alpha set contains duplicate value " + std::to_string(a));
    if (a4 == 10000) has_identity = true;
  }
  if (!has_identity) throw InvalidInput("alpha set must contain 1.0");
  AlphaSet sorted(alphas);
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

inline AlphaSet default_alpha_set() { return {0.8, 0.9, 1.0, 1.1, 1.2}; }

inline void validate_speaker_label(const std::string& label) {
  if (label.empty()) throw InvalidInput("empty speaker label");
  if (label.find("#sp") != std::string::npos)
    throw InvalidInput("speaker label may not contain \"#sp\": " + label);
}

// Cartesian product speakers x alphas, speaker-major with ascending alpha.
inline std::vector<PseudoSpeakerId> expand_speaker_set(
    const std::vector<std::string>& speakers, const AlphaSet& alphas) {
  if (speakers.empty()) throw InvalidInput("speaker list is empty");
  std::set<std::string> distinct;
  for (const auto& s : speakers) {
    validate_speaker_label(s);
    if (!distinct.insert(s).second)
      throw InvalidInput("duplicate speaker label: " + s);
  }
  AlphaSet sorted = validate_alpha_set(alphas);
  std::vector<PseudoSpeakerId> out;
  out.reserve(speakers.size() * sorted.size());
  for (const auto& s : speakers)
    for (double a : sorted) out.push_back({s, a});
  return out;
}

// Disk cache of rendered pseudo-speaker utterances, keyed by
// (speaker, utterance, alpha, restore_tempo). Layout:
// {root}/{speaker}/{utterance}_{alpha_code}{_noTempo}.wav. Writers stage to a
// unique temp file and rename, so concurrent renders of one key are safe and
// readers never observe partial files.
class RenderCache {
 public:
  static constexpr const char* kVersion = "spkaug-cache-1";

  RenderCache(std::filesystem::path root, WsolaConfig cfg = {})
      : root_(std::move(root)), cfg_(cfg) {
    std::filesystem::create_directories(root_);
    auto marker = root_ / "CACHEVERSION";
    if (std::filesystem::exists(marker)) {
      std::ifstream in(marker);
      std::string tag;
      std::getline(in, tag);
      if (tag != kVersion)
        throw FormatError("render cache version mismatch at " + marker.string() +
                          ": found \"" + tag + "\"");
    } else {
      std::ofstream out(marker);
      out << kVersion << "\n";
      if (!out) throw IoError("cannot write cache marker: " + marker.string());
    }
  }

  const WsolaConfig& wsola_config() const { return cfg_; }

  std::filesystem::path path_for(const std::string& speaker, const std::string& stem,
                                 double alpha, bool restore_tempo) const {
    std::string name = stem + "_" + alpha_code(alpha);
    if (!restore_tempo) name += "_noTempo";
    return root_ / speaker / (name + ".wav");
  }

  AudioClip render(const std::string& speaker, const std::string& stem,
                   const std::string& source_path, double alpha, bool restore_tempo) {
    auto path = path_for(speaker, stem, alpha, restore_tempo);
    if (std::filesystem::exists(path)) return read_wav(path.string());

    AudioClip clip = read_wav(source_path);
    AudioClip out = make_pseudo(clip, {alpha, restore_tempo}, cfg_);
    peak_normalize(&out, 1.0);
    quantize_float32(&out);

    std::filesystem::create_directories(path.parent_path());
    static std::atomic<uint64_t> counter{0};
    auto tmp = path;
    tmp += ".tmp" + std::to_string(::getpid()) + "." +
           std::to_string(counter.fetch_add(1));
    write_wav(tmp.string(), out, WavEncoding::kFloat32);
    std::filesystem::rename(tmp, path);
    return out;
  }

 private:
  std::filesystem::path root_;
  WsolaConfig cfg_;
};

}  // namespace spkaug

#endif  // SPKAUG_AUGMENT_HPP_
