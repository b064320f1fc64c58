// Copyright 2026 The lorentz-bg Authors
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
#include <limits>
#include <string_view>

#include "lorentz_bg/vec.hpp"

namespace lorentz_bg {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Splittable random stream identity.
///
/// A Stream is a 64-bit key, not a generator. Work item i of a parallel loop
/// draws from `stream.split(i)`, so results depend only on (seed, item index)
/// and never on how items are scheduled across threads.
class Stream {
 public:
  explicit constexpr Stream(std::uint64_t seed) : key_(mix64(seed ^ 0x6a09e667f3bcc909ull)) {}

  constexpr Stream split(std::uint64_t index) const {
    return from_key(mix64(key_ ^ mix64(index + 0x3c6ef372fe94f82bull)));
  }

  /// Named child stream; FNV-1a of the tag.
  constexpr Stream split(std::string_view tag) const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char ch : tag) {
      h ^= static_cast<unsigned char>(ch);
      h *= 0x100000001b3ull;
    }
    return from_key(mix64(key_ + mix64(h)));
  }

  constexpr std::uint64_t key() const { return key_; }

  static constexpr Stream from_key(std::uint64_t key) {
    Stream s(0);
    s.key_ = key;
    return s;
  }

  friend constexpr bool operator==(const Stream&, const Stream&) = default;

 private:
  std::uint64_t key_;
};

/// xoshiro256** generator seeded from a Stream key.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(const Stream& stream) {
    std::uint64_t s = stream.key();
    for (auto& w : state_) {
      s += 0x9e3779b97f4a7c15ull;
      w = mix64(s);
    }
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_pos() { return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53; }

  /// Exp(rate) by inversion; rate 0 gives +inf without consuming randomness.
  double exponential(double rate) {
    if (rate == 0.0) return std::numeric_limits<double>::infinity();
    return -std::log(uniform_pos()) / rate;
  }

  /// Poisson(mean): inversion below mean 30, PTRS transformed rejection above.
  std::uint64_t poisson(double mean);

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t state_[4];
};

/// Uniform direction on S^{d-1}.
Vec uniform_direction(Rng& rng, int dim);

/// Uniform point in the closed ball B(0, radius) of R^d.
Vec uniform_in_ball(Rng& rng, int dim, double radius);

}  // namespace lorentz_bg
