// Copyright 2026 The vowelbci Authors.
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

// Deterministic randomness helpers. std::mt19937_64 is a fully specified
// engine, but the standard distributions are not; everything downstream of a
// seed goes through the samplers here so that identical seeds produce
// identical streams on every platform and standard library.

#ifndef VOWELBCI_RANDOM_HPP_
#define VOWELBCI_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace vowelbci {

using rng_engine = std::mt19937_64;

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(rng_engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double uniform(rng_engine& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Uniform integer in [0, bound) by rejection sampling.
inline std::uint64_t uniform_below(rng_engine& rng, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t v = rng();
  while (v >= limit) v = rng();
  return v % bound;
}

/// Standard normal sampler (Box-Muller). Holds the spare deviate, so the
/// stream is a pure function of the engine state plus the spare flag.
class gaussian_sampler {
 public:
  double operator()(rng_engine& rng) {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0,1] so the log is finite.
    const double u1 = 1.0 - uniform01(rng);
    const double u2 = uniform01(rng);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Fisher-Yates shuffle driven by uniform_below (std::shuffle's sequence is
/// implementation-defined).
template <class T>
void deterministic_shuffle(std::vector<T>& items, rng_engine& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

/// Stream-splitting: derive an independent child seed from a parent seed and
/// a label (SplitMix64 over the mixed words).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (label + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace vowelbci

#endif  // VOWELBCI_RANDOM_HPP_
