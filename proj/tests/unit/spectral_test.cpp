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

#include "vowelbci/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "vowelbci/errors.hpp"
#include "vowelbci/random.hpp"

using namespace vowelbci;

namespace {

std::vector<double> random_series(std::size_t n, rng_engine& rng) {
  gaussian_sampler gauss;
  std::vector<double> x(n);
  for (double& v : x) v = gauss(rng);
  return x;
}

double parseval_lhs(const Psd& psd, std::size_t n, double fs) {
  const double df = fs / static_cast<double>(n);
  return psd.power.sum() * df;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("constant series concentrates at DC with value N c^2 dt") {
  const std::size_t n = 1000;
  const double fs = 500.0;
  const double c = 1.7;
  const std::vector<double> x(n, c);
  const Psd psd = periodogram_psd(x, fs);

  REQUIRE(psd.bins() == 501);
  CHECK(psd.frequencies_hz(0) == 0.0);
  CHECK(psd.frequencies_hz(psd.bins() - 1) == doctest::Approx(250.0));

  const double expected_dc = static_cast<double>(n) * c * c / fs;
  CHECK(psd.power(0) == doctest::Approx(expected_dc).epsilon(1e-12));
  for (Eigen::Index k = 1; k < psd.bins(); ++k) {
    CHECK(psd.power(k) < 1e-20 * expected_dc);
  }
}

TEST_CASE("on-bin sine occupies a single interior bin") {
  const std::size_t n = 1000;
  const double fs = 500.0;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::sin(2.0 * std::numbers::pi * 25.0 * static_cast<double>(i) / fs);
  }
  const Psd psd = periodogram_psd(x, fs);

  Eigen::Index max_bin = 0;
  psd.power.maxCoeff(&max_bin);
  CHECK(psd.frequencies_hz(max_bin) == doctest::Approx(25.0));
  for (Eigen::Index k = 0; k < psd.bins(); ++k) {
    if (k == max_bin) continue;
    CHECK(psd.power(k) < 1e-10 * psd.power(max_bin));
  }
}

TEST_CASE("matches the direct-sum oracle bin for bin") {
  rng_engine rng(20260809);
  for (const std::size_t n : {64u, 257u, 1000u}) {
    for (int rep = 0; rep < 5; ++rep) {
      const std::vector<double> x = random_series(n, rng);
      const Psd psd = periodogram_psd(x, 500.0);
      const std::vector<double> expected = test::periodogram_direct(x, 500.0);
      REQUIRE(psd.bins() == static_cast<Eigen::Index>(expected.size()));
      double max_bin = 0.0;
      for (double p : expected) max_bin = std::max(max_bin, p);
      for (Eigen::Index k = 0; k < psd.bins(); ++k) {
        CHECK(std::abs(psd.power(k) - expected[static_cast<std::size_t>(k)]) <=
              1e-9 * max_bin);
      }
    }
  }
}

TEST_CASE("Parseval: sum of PSD times df equals mean square") {
  rng_engine rng(7);
  for (const std::size_t n : {64u, 999u, 1000u}) {
    const std::vector<double> x = random_series(n, rng);
    const Psd psd = periodogram_psd(x, 500.0);
    double mean_square = 0.0;
    for (double v : x) mean_square += v * v;
    mean_square /= static_cast<double>(n);
    CHECK(parseval_lhs(psd, n, 500.0) ==
          doctest::Approx(mean_square).epsilon(1e-9));
  }
}

TEST_CASE("quadratic scaling in the amplitude") {
  rng_engine rng(11);
  const std::vector<double> x = random_series(300, rng);
  std::vector<double> scaled(x.size());
  const double a = -2.75;
  for (std::size_t i = 0; i < x.size(); ++i) scaled[i] = a * x[i];
  const Psd base = periodogram_psd(x, 500.0);
  const Psd big = periodogram_psd(scaled, 500.0);
  for (Eigen::Index k = 0; k < base.bins(); ++k) {
    CHECK(big.power(k) == doctest::Approx(a * a * base.power(k)).epsilon(1e-12));
  }
}

TEST_CASE("circular shift preserves every bin") {
  rng_engine rng(13);
  const std::vector<double> x = random_series(256, rng);
  std::vector<double> shifted(x.size());
  const std::size_t shift = 37;
  for (std::size_t i = 0; i < x.size(); ++i) {
    shifted[i] = x[(i + shift) % x.size()];
  }
  const Psd a = periodogram_psd(x, 500.0);
  const Psd b = periodogram_psd(shifted, 500.0);
  const double scale = a.power.maxCoeff();
  for (Eigen::Index k = 0; k < a.bins(); ++k) {
    CHECK(std::abs(a.power(k) - b.power(k)) <= 1e-9 * scale);
  }
}

TEST_CASE("rejects short and non-finite input") {
  CHECK_THROWS_AS(periodogram_psd(std::vector<double>{1.0}, 500.0), error);
  std::vector<double> bad{1.0, std::nan(""), 2.0};
  CHECK_THROWS_AS(periodogram_psd(bad, 500.0), error);
}

TEST_CASE("odd length doubles the last bin, even length does not") {
  // Nyquist-rate alternation on an even series lands entirely on the last
  // (undoubled) bin; Parseval has already pinned the scaling for odd.
  const double fs = 8.0;
  std::vector<double> x(8);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = (i % 2 == 0) ? 1.0 : -1.0;
  const Psd psd = periodogram_psd(x, fs);
  const double dt = 1.0 / fs;
  // |X_4| = 8, scale dt/N, no doubling.
  CHECK(psd.power(psd.bins() - 1) ==
        doctest::Approx(dt / 8.0 * 64.0).epsilon(1e-12));
}

}  // TEST_SUITE
