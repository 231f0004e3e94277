// spkaug/rng.hpp

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

#ifndef SPKAUG_RNG_HPP_
#define SPKAUG_RNG_HPP_

#include <cmath>
#include <cstdint>

namespace spkaug {

// splitmix64 finalizer. Every randomized result in the toolkit is derived
// from this function, so corpora are bit-reproducible across platforms and
// standard-library versions (std::uniform_real_distribution is not).
constexpr inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic splitmix64 generator with random-access stream derivation:
// Rng::derive(seed, k) for distinct k yields independent streams, so corpus
// item k can be sampled without touching items 0..k-1.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  static Rng derive(uint64_t seed, uint64_t stream) {
    return Rng(mix64(mix64(stream) ^ seed));
  }

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // [0, 1)
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  double gaussian(double mean, double stddev) {
    // Box-Muller, cosine branch. u1 lies in (0, 1] so the log is finite.
    double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    double u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(6.283185307179586476925286766559 * u2);
  }

  // Uniform integer in [0, n). Widening-multiply bound; bias is O(n / 2^64).
  uint64_t below(uint64_t n) {
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  uint64_t state_;
};

}  // namespace spkaug

#endif  // SPKAUG_RNG_HPP_
