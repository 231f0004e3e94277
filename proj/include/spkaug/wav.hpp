// spkaug/wav.hpp

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

#ifndef SPKAUG_WAV_HPP_
#define SPKAUG_WAV_HPP_

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "spkaug/audio.hpp"
#include "spkaug/error.hpp"

namespace spkaug {

enum class WavEncoding { kPcm16, kFloat32 };

namespace wav_detail {

inline uint16_t read_u16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

inline uint32_t read_u32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

inline void put_u16(std::string* out, uint16_t v) {
  out->push_back(static_cast<char>(v & 0xff));
  out->push_back(static_cast<char>((v >> 8) & 0xff));
}

inline void put_u32(std::string* out, uint32_t v) {
  out->push_back(static_cast<char>(v & 0xff));
  out->push_back(static_cast<char>((v >> 8) & 0xff));
  out->push_back(static_cast<char>((v >> 16) & 0xff));
  out->push_back(static_cast<char>((v >> 24) & 0xff));
}

}  // namespace wav_detail

// Reads a RIFF/WAVE file holding PCM16 or IEEE float32 samples. Multichannel
// content is averaged down to mono. The fmt chunk must precede the data
// chunk; any other chunk is skipped (with its odd-length pad byte).
inline AudioClip read_wav(const std::string& path) {
  using wav_detail::read_u16;
  using wav_detail::read_u32;

  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure: " + path);
  const unsigned char* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const size_t n = bytes.size();

  if (n < 12 || std::memcmp(p, "RIFF", 4) != 0 || std::memcmp(p + 8, "WAVE", 4) != 0)
    throw FormatError("not a RIFF/WAVE file: " + path);

  bool have_fmt = false;
  uint16_t format_tag = 0;
  uint16_t channels = 0;
  uint32_t sample_rate = 0;
  uint16_t bits = 0;

  size_t pos = 12;
  while (pos + 8 <= n) {
    const unsigned char* id = p + pos;
    uint32_t chunk_size = read_u32(p + pos + 4);
    pos += 8;
    if (chunk_size > n - pos)
      throw FormatError("truncated chunk in WAV file: " + path);

    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw FormatError("fmt chunk too small: " + path);
      format_tag = read_u16(p + pos);
      channels = read_u16(p + pos + 2);
      sample_rate = read_u32(p + pos + 4);
      bits = read_u16(p + pos + 14);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      if (!have_fmt) throw FormatError("data chunk precedes fmt chunk: " + path);
      if (channels == 0 || sample_rate == 0)
        throw FormatError("fmt chunk has zero channels or rate: " + path);

      size_t bytes_per_sample;
      if (format_tag == 1 && bits == 16) {
        bytes_per_sample = 2;
      } else if (format_tag == 3 && bits == 32) {
        bytes_per_sample = 4;
      } else {
        throw FormatError("unsupported WAV codec (format tag " +
                          std::to_string(format_tag) + ", " + std::to_string(bits) +
                          " bits): " + path);
      }

      size_t frame_bytes = bytes_per_sample * channels;
      size_t frames = chunk_size / frame_bytes;
      AudioClip clip;
      clip.sample_rate = static_cast<int>(sample_rate);
      clip.samples.resize(frames);
      const double inv_ch = 1.0 / channels;
      for (size_t f = 0; f < frames; ++f) {
        double acc = 0.0;
        const unsigned char* fp = p + pos + f * frame_bytes;
        for (uint16_t c = 0; c < channels; ++c) {
          if (bytes_per_sample == 2) {
            int16_t v = static_cast<int16_t>(read_u16(fp + 2 * c));
            acc += v / 32768.0;
          } else {
            uint32_t raw = read_u32(fp + 4 * c);
            float v;
            std::memcpy(&v, &raw, 4);
            acc += v;
          }
        }
        clip.samples[f] = channels == 1 ? acc : acc * inv_ch;
      }
      return clip;
    }
    pos += chunk_size + (chunk_size & 1);
  }
  throw FormatError(have_fmt ? "missing data chunk: " + path
                             : "missing fmt chunk: " + path);
}

// Writes `clip` as RIFF/WAVE. pcm16 requires every sample in [-1, 1] and
// quantizes to the 1/32768 grid; float32 round-trips bit-exactly for samples
// representable in single precision.
inline void write_wav(const std::string& path, const AudioClip& clip,
                      WavEncoding encoding) {
  using wav_detail::put_u16;
  using wav_detail::put_u32;

  if (clip.sample_rate <= 0) throw InvalidInput("write_wav: sample_rate must be positive");
  for (double s : clip.samples) {
    if (!std::isfinite(s)) throw InvalidInput("write_wav: non-finite sample");
    if (encoding == WavEncoding::kPcm16 && (s < -1.0 || s > 1.0))
      throw InvalidInput("write_wav: sample out of [-1, 1] for pcm16: " + path);
  }

  const uint16_t format_tag = encoding == WavEncoding::kPcm16 ? 1 : 3;
  const uint16_t bits = encoding == WavEncoding::kPcm16 ? 16 : 32;
  const uint16_t block_align = static_cast<uint16_t>(bits / 8);
  const uint32_t data_size = static_cast<uint32_t>(clip.samples.size() * block_align);

  std::string out;
  out.reserve(44 + data_size);
  out.append("RIFF");
  put_u32(&out, 36 + data_size);
  out.append("WAVE");
  out.append("fmt ");
  put_u32(&out, 16);
  put_u16(&out, format_tag);
  put_u16(&out, 1);
  put_u32(&out, static_cast<uint32_t>(clip.sample_rate));
  put_u32(&out, static_cast<uint32_t>(clip.sample_rate) * block_align);
  put_u16(&out, block_align);
  put_u16(&out, bits);
  out.append("data");
  put_u32(&out, data_size);

  if (encoding == WavEncoding::kPcm16) {
    for (double s : clip.samples) {
      long v = std::lround(s * 32768.0);
      if (v > 32767) v = 32767;
      if (v < -32768) v = -32768;
      put_u16(&out, static_cast<uint16_t>(static_cast<int16_t>(v)));
    }
  } else {
    for (double s : clip.samples) {
      float f = static_cast<float>(s);
      uint32_t raw;
      std::memcpy(&raw, &f, 4);
      put_u32(&out, raw);
    }
  }

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open for writing: " + path);
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  os.flush();
  if (!os) throw IoError("write failure: " + path);
}

}  // namespace spkaug

#endif  // SPKAUG_WAV_HPP_
