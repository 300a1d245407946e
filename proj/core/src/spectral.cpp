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

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "fft.hpp"
#include "vowelbci/errors.hpp"

namespace vowelbci {

Psd periodogram_psd(std::span<const double> x, double sample_rate_hz) {
  const std::size_t n = x.size();
  if (n < 2) fail(errc::data, "periodogram needs at least 2 samples");
  if (!(sample_rate_hz > 0)) fail(errc::data, "sample rate must be positive");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i])) {
      fail(errc::data, "non-finite sample at index " + std::to_string(i));
    }
  }

  std::vector<std::complex<double>> spectrum(n);
  for (std::size_t i = 0; i < n; ++i) spectrum[i] = x[i];
  detail::fft(spectrum);

  const double dt = 1.0 / sample_rate_hz;
  const double scale = dt / static_cast<double>(n);
  const std::size_t n_bins = n / 2 + 1;
  const bool even = (n % 2 == 0);

  Psd psd;
  psd.delta_t_s = dt;
  psd.frequencies_hz.resize(static_cast<Eigen::Index>(n_bins));
  psd.power.resize(static_cast<Eigen::Index>(n_bins));
  for (std::size_t k = 0; k < n_bins; ++k) {
    psd.frequencies_hz(static_cast<Eigen::Index>(k)) =
        static_cast<double>(k) * sample_rate_hz / static_cast<double>(n);
    double p = scale * std::norm(spectrum[k]);
    const bool interior = k > 0 && !(even && k == n_bins - 1);
    if (interior) p *= 2.0;
    psd.power(static_cast<Eigen::Index>(k)) = p;
  }
  return psd;
}

}  // namespace vowelbci
