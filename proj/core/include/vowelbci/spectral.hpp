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

#ifndef VOWELBCI_SPECTRAL_HPP_
#define VOWELBCI_SPECTRAL_HPP_

#include <Eigen/Core>
#include <span>

namespace vowelbci {

/// One-sided power spectral density estimate.
struct Psd {
  Eigen::VectorXd frequencies_hz;  // ascending, 0 .. fs/2
  Eigen::VectorXd power;           // same length, nonnegative
  double delta_t_s = 0.0;

  Eigen::Index bins() const { return power.size(); }
};

/// Rectangular-window periodogram of the full series, one-sided:
///
///   S_k = (dt / N) |sum_n x_n exp(-2 pi i k n / N)|^2,  k = 0..floor(N/2),
///
/// with interior bins doubled (DC never, Nyquist not when N is even). Defined
/// by the direct sum; computed with a fast transform.
Psd periodogram_psd(std::span<const double> x, double sample_rate_hz);

}  // namespace vowelbci

#endif  // VOWELBCI_SPECTRAL_HPP_
