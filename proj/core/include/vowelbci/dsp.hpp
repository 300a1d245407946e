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

#ifndef VOWELBCI_DSP_HPP_
#define VOWELBCI_DSP_HPP_

#include <complex>
#include <span>
#include <vector>

#include "vowelbci/ingest.hpp"

namespace vowelbci {

/// Band-pass design parameters. `order` is the analog prototype order; the
/// realized recursive filter has 2*order poles (the usual butter(n, band)
/// convention).
struct BandPassSpec {
  double low_cut_hz = 2.0;
  double high_cut_hz = 50.0;
  int order = 4;
  double sample_rate_hz = kDefaultSampleRateHz;
};

/// One second-order section, a0 normalized to 1.
struct Biquad {
  double b0, b1, b2;
  double a1, a2;
};

class FilterCoefficients {
 public:
  FilterCoefficients() = default;
  FilterCoefficients(std::vector<Biquad> sections, double sample_rate_hz);

  const std::vector<Biquad>& sections() const { return sections_; }
  double sample_rate_hz() const { return sample_rate_hz_; }
  int n_poles() const { return 2 * static_cast<int>(sections_.size()); }

  /// Frequency response H(e^{j 2 pi f / fs}).
  std::complex<double> response_at(double freq_hz) const;
  double magnitude_db_at(double freq_hz) const;

  /// Poles of the realized filter (roots of each section denominator).
  std::vector<std::complex<double>> poles() const;

 private:
  std::vector<Biquad> sections_;
  double sample_rate_hz_ = kDefaultSampleRateHz;
};

/// Butterworth band-pass via analog prototype, lowpass-to-bandpass transform
/// and bilinear transform with frequency prewarping, emitted as second-order
/// sections. The -3 dB points land exactly on the cutoffs.
FilterCoefficients design_bandpass(const BandPassSpec& spec);

/// Zero-phase filtering: odd-reflection padding of 3x the filter order at
/// both ends, steady-state initial conditions, one forward and one reverse
/// pass. Output length equals input length.
std::vector<double> apply_filter(const FilterCoefficients& coeffs,
                                 std::span<const double> x);

/// Center to mean 0 and scale to sample standard deviation 1 (n-1
/// denominator). A constant series is an error, never silent zeros.
std::vector<double> zscore_normalize(std::span<const double> x);

/// Filter then normalize every channel of a trial's active window.
Trial preprocess_trial(const Trial& trial, const FilterCoefficients& coeffs);

std::vector<Trial> preprocess_trials(const std::vector<Trial>& trials,
                                     const FilterCoefficients& coeffs);

}  // namespace vowelbci

#endif  // VOWELBCI_DSP_HPP_
