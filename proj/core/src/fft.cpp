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

#include "fft.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <unordered_map>
#include <utility>

namespace vowelbci::detail {

namespace {

using cd = std::complex<double>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Iterative radix-2 with bit-reversal permutation. Twiddles are computed by
// direct calls to polar per stage index, trading a few trig calls for
// accuracy (no recurrence drift).
void fft_radix2(std::vector<cd>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double base = (inverse ? kTwoPi : -kTwoPi) / static_cast<double>(len);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cd w = std::polar(1.0, base * static_cast<double>(k));
        const cd u = a[i + k];
        const cd v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (cd& v : a) v *= scale;
  }
}

struct BluesteinPlan {
  std::vector<cd> chirp;     // exp(-i pi k^2 / n), k = 0..n-1
  std::vector<cd> kernel_f;  // FFT of the wrapped conjugate chirp
  std::size_t conv_len = 0;
};

BluesteinPlan make_plan(std::size_t n) {
  BluesteinPlan plan;
  plan.chirp.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the phase argument small and exact in double.
    const std::uint64_t k2 = (static_cast<std::uint64_t>(k) * k) %
                             (2 * static_cast<std::uint64_t>(n));
    plan.chirp[k] =
        std::polar(1.0, -std::numbers::pi * static_cast<double>(k2) /
                            static_cast<double>(n));
  }
  plan.conv_len = next_power_of_two(2 * n - 1);
  std::vector<cd> kernel(plan.conv_len, cd{0.0, 0.0});
  kernel[0] = std::conj(plan.chirp[0]);
  for (std::size_t k = 1; k < n; ++k) {
    kernel[k] = std::conj(plan.chirp[k]);
    kernel[plan.conv_len - k] = std::conj(plan.chirp[k]);
  }
  fft_radix2(kernel, false);
  plan.kernel_f = std::move(kernel);
  return plan;
}

const BluesteinPlan& plan_for(std::size_t n) {
  thread_local std::unordered_map<std::size_t, BluesteinPlan> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_plan(n)).first;
  return it->second;
}

void fft_bluestein(std::vector<cd>& a) {
  const std::size_t n = a.size();
  const BluesteinPlan& plan = plan_for(n);

  std::vector<cd> work(plan.conv_len, cd{0.0, 0.0});
  for (std::size_t k = 0; k < n; ++k) work[k] = a[k] * plan.chirp[k];

  fft_radix2(work, false);
  for (std::size_t k = 0; k < plan.conv_len; ++k) work[k] *= plan.kernel_f[k];
  fft_radix2(work, true);

  for (std::size_t k = 0; k < n; ++k) a[k] = work[k] * plan.chirp[k];
}

}  // namespace

void fft(std::vector<cd>& data) {
  if (data.size() < 2) return;
  if (is_power_of_two(data.size())) {
    fft_radix2(data, false);
  } else {
    fft_bluestein(data);
  }
}

}  // namespace vowelbci::detail
