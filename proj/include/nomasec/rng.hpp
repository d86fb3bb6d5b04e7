// Copyright 2026 the nomasec authors
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

#include <cstdint>
#include <numbers>
#include <utility>

#include "nomasec/common.hpp"

namespace nomasec {

namespace detail {

/// SplitMix64 state mixer (Steele, Lea, Flood; public-domain reference
/// algorithm). Used for deterministic key expansion of trial streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// xoshiro256++ (Blackman & Vigna, public-domain reference algorithm).
/// Satisfies std::uniform_random_bit_generator.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256pp(std::uint64_t seed_key = 0) {
    std::uint64_t sm = seed_key;
    for (auto& word : state_) word = detail::splitmix64(sm);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

using TrialRng = Xoshiro256pp;

/// Counter-based per-trial stream derivation: the returned generator depends
/// only on (master_seed, trial_index), never on worker scheduling, so any
/// partitioning of trials over threads reproduces identical draws.
inline TrialRng derive_trial_rng(std::uint64_t master_seed,
                                 std::uint64_t trial_index) {
  std::uint64_t key = master_seed;
  std::uint64_t a = detail::splitmix64(key);
  key ^= trial_index + 0x9e3779b97f4a7c15ULL;
  std::uint64_t b = detail::splitmix64(key);
  return TrialRng(a ^ (b + 0x632be59bd9b4e019ULL));
}

/// Uniform draw on (0, 1]; never returns 0 so that log() stays finite.
template <class Rng>
double uniform_unit(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

/// One standard-normal pair via the Box-Muller transform. Explicit rather
/// than std::normal_distribution so that byte-level reproducibility does not
/// depend on the standard-library implementation.
template <class Rng>
std::pair<double, double> gaussian_pair(Rng& rng) {
  const double u1 = uniform_unit(rng);
  const double u2 = uniform_unit(rng);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

/// Circularly-symmetric complex Gaussian CN(0, variance): real and imaginary
/// parts are independent N(0, variance / 2).
template <class Rng>
cplx complex_normal(Rng& rng, double variance) {
  detail::require_nonnegative(variance, "variance");
  const auto [x, y] = gaussian_pair(rng);
  const double scale = std::sqrt(variance / 2.0);
  return {scale * x, scale * y};
}

}  // namespace nomasec
