// Copyright 2026 The EchoNav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <numbers>
#include <span>
#include <vector>

namespace echonav {

// All randomness in the project flows through the two primitives below.
// std::uniform_*_distribution is implementation-defined, so outputs would not
// be reproducible across standard libraries; these mappings are pinned.

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seedable sequential generator with portable uniform/normal mappings.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() { return splitmix64(state_); }

  /// Uniform in [0, 1).
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be > 0.
  uint64_t next_below(uint64_t n) {
    // Rejection sampling keeps the mapping unbiased and portable.
    const uint64_t threshold = (~uint64_t{0} - n + 1) % n;
    for (;;) {
      const uint64_t v = next_u64();
      if (v >= threshold) return v % n;
    }
  }

  int next_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next_below(static_cast<uint64_t>(hi - lo + 1)));
  }

  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Standard normal via Box-Muller.
  double next_normal() {
    double u1 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPiLocal * u2);
  }

  /// Derives an independent child generator; the parent advances once.
  Rng fork() { return Rng(next_u64()); }

 private:
  static constexpr double kTwoPiLocal = 2.0 * std::numbers::pi;
  uint64_t state_;
};

/// Mixes a variadic key into a single 64-bit hash. Used for counter-based
/// noise: the draw at a given key is a pure function of the key.
inline uint64_t hash_key(uint64_t seed) {
  uint64_t s = seed ^ 0xD1B54A32D192ED03ULL;
  return splitmix64(s);
}

template <typename... Rest>
uint64_t hash_key(uint64_t seed, uint64_t first, Rest... rest) {
  uint64_t s = seed ^ (first + 0x9E3779B97F4A7C15ULL);
  return hash_key(splitmix64(s), rest...);
}

inline uint64_t bits_of(double v) {
  uint64_t b;
  std::memcpy(&b, &v, sizeof b);
  return b;
}

/// Standard normal draw fully determined by the key tuple.
template <typename... Keys>
double keyed_normal(uint64_t seed, Keys... keys) {
  uint64_t h = hash_key(seed, static_cast<uint64_t>(keys)...);
  const uint64_t a = splitmix64(h);
  const uint64_t b = splitmix64(h);
  double u1 = (a >> 11) * 0x1.0p-53;
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double u2 = (b >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Uniform [0, 1) draw fully determined by the key tuple.
template <typename... Keys>
double keyed_uniform(uint64_t seed, Keys... keys) {
  uint64_t h = hash_key(seed, static_cast<uint64_t>(keys)...);
  return (splitmix64(h) >> 11) * 0x1.0p-53;
}

/// Pairwise summation; the result is independent of how the values were
/// produced (workers may fill the vector in any order).
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline double mean_of(std::span<const double> v) {
  return v.empty() ? 0.0 : pairwise_sum(v) / static_cast<double>(v.size());
}

/// Sample standard deviation (n-1 denominator); 0 for fewer than two values.
inline double stddev_of(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  std::vector<double> sq(v.size());
  for (size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - m) * (v[i] - m);
  return std::sqrt(pairwise_sum(sq) / static_cast<double>(v.size() - 1));
}

}  // namespace echonav
