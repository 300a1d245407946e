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

#include "vowelbci/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "vowelbci/errors.hpp"

namespace vowelbci {

namespace {

using cd = std::complex<double>;

constexpr double kPi = std::numbers::pi;

// Analog Butterworth lowpass prototype: n poles on the unit circle in the
// left half-plane, no zeros, unit gain.
std::vector<cd> prototype_poles(int order) {
  std::vector<cd> poles;
  poles.reserve(order);
  for (int k = 1; k <= order; ++k) {
    const double theta = kPi * (2.0 * k + order - 1.0) / (2.0 * order);
    poles.emplace_back(std::cos(theta), std::sin(theta));
  }
  return poles;
}

struct Zpk {
  std::vector<cd> zeros;
  std::vector<cd> poles;
  double gain = 1.0;
};

// Lowpass (cutoff 1 rad/s) to bandpass: s -> (s^2 + w0^2) / (bw * s).
Zpk lowpass_to_bandpass(const std::vector<cd>& lp_poles, double w_low, double w_high) {
  const double bw = w_high - w_low;
  const double w0_sq = w_low * w_high;
  Zpk out;
  out.poles.reserve(2 * lp_poles.size());
  for (const cd& p : lp_poles) {
    const cd half = 0.5 * bw * p;
    const cd root = std::sqrt(half * half - w0_sq);
    out.poles.push_back(half + root);
    out.poles.push_back(half - root);
  }
  out.zeros.assign(lp_poles.size(), cd{0.0, 0.0});
  out.gain = std::pow(bw, static_cast<double>(lp_poles.size()));
  return out;
}

// Bilinear transform z = (K + s) / (K - s), K = 2 fs. Zeros at infinity map
// to z = -1.
Zpk bilinear(const Zpk& analog, double sample_rate_hz) {
  const double K = 2.0 * sample_rate_hz;
  Zpk out;
  out.zeros.reserve(analog.poles.size());
  out.poles.reserve(analog.poles.size());

  cd num{1.0, 0.0};
  cd den{1.0, 0.0};
  for (const cd& z : analog.zeros) {
    out.zeros.push_back((K + z) / (K - z));
    num *= (K - z);
  }
  for (const cd& p : analog.poles) {
    out.poles.push_back((K + p) / (K - p));
    den *= (K - p);
  }
  out.zeros.resize(analog.poles.size(), cd{-1.0, 0.0});
  out.gain = analog.gain * (num / den).real();
  return out;
}

}  // namespace

FilterCoefficients::FilterCoefficients(std::vector<Biquad> sections,
                                       double sample_rate_hz)
    : sections_(std::move(sections)), sample_rate_hz_(sample_rate_hz) {}

std::complex<double> FilterCoefficients::response_at(double freq_hz) const {
  const double omega = 2.0 * kPi * freq_hz / sample_rate_hz_;
  const cd z1 = std::polar(1.0, -omega);
  const cd z2 = z1 * z1;
  cd h{1.0, 0.0};
  for (const Biquad& s : sections_) {
    h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
  }
  return h;
}

double FilterCoefficients::magnitude_db_at(double freq_hz) const {
  return 20.0 * std::log10(std::abs(response_at(freq_hz)));
}

std::vector<std::complex<double>> FilterCoefficients::poles() const {
  std::vector<cd> out;
  out.reserve(sections_.size() * 2);
  for (const Biquad& s : sections_) {
    // z^2 + a1 z + a2 = 0
    const cd disc = std::sqrt(cd{s.a1 * s.a1 - 4.0 * s.a2, 0.0});
    out.push_back((-s.a1 + disc) / 2.0);
    out.push_back((-s.a1 - disc) / 2.0);
  }
  return out;
}

FilterCoefficients design_bandpass(const BandPassSpec& spec) {
  if (!(spec.sample_rate_hz > 0)) {
    fail(errc::config, "sample rate must be positive");
  }
  const double nyquist = spec.sample_rate_hz / 2.0;
  if (!(spec.low_cut_hz > 0) || !(spec.low_cut_hz < spec.high_cut_hz)) {
    fail(errc::config, "band-pass cutoffs must satisfy 0 < low < high");
  }
  if (!(spec.high_cut_hz < nyquist)) {
    fail(errc::config, "high cutoff " + std::to_string(spec.high_cut_hz) +
                           " Hz is at or above the Nyquist frequency " +
                           std::to_string(nyquist) + " Hz");
  }
  if (spec.order < 2 || spec.order % 2 != 0) {
    fail(errc::config, "filter order must be a positive even integer");
  }

  const double fs = spec.sample_rate_hz;
  const double w_low = 2.0 * fs * std::tan(kPi * spec.low_cut_hz / fs);
  const double w_high = 2.0 * fs * std::tan(kPi * spec.high_cut_hz / fs);

  const Zpk digital =
      bilinear(lowpass_to_bandpass(prototype_poles(spec.order), w_low, w_high), fs);

  // Pair conjugate poles into sections. The bandpass has exactly order zeros
  // at z=+1 and order at z=-1, so every section gets one of each: numerator
  // g * (1 - z^-2).
  std::vector<cd> poles = digital.poles;
  std::sort(poles.begin(), poles.end(), [](const cd& a, const cd& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() > b.imag();
  });

  const int n_sections = spec.order;
  if (digital.gain <= 0.0) {
    fail(errc::numeric, "band-pass design produced non-positive gain");
  }
  const double section_gain = std::pow(digital.gain, 1.0 / n_sections);

  std::vector<Biquad> sections;
  sections.reserve(n_sections);
  for (int i = 0; i < n_sections; ++i) {
    const cd p = poles[2 * i];
    const cd q = poles[2 * i + 1];
    if (std::abs(p - std::conj(q)) > 1e-9 * std::max(1.0, std::abs(p))) {
      fail(errc::numeric, "band-pass poles did not pair into conjugates");
    }
    Biquad s{};
    s.b0 = section_gain;
    s.b1 = 0.0;
    s.b2 = -section_gain;
    s.a1 = -(p + q).real();
    s.a2 = (p * q).real();
    sections.push_back(s);
  }

  FilterCoefficients coeffs(std::move(sections), fs);
  for (const cd& p : coeffs.poles()) {
    if (!(std::abs(p) < 1.0)) {
      fail(errc::numeric, "designed filter is unstable (pole magnitude " +
                              std::to_string(std::abs(p)) + ")");
    }
  }
  return coeffs;
}

namespace {

// Direct-form-II-transposed state per section.
struct SectionState {
  double s1 = 0.0;
  double s2 = 0.0;
};

double run_section(const Biquad& c, SectionState& st, double x) {
  const double y = c.b0 * x + st.s1;
  st.s1 = c.b1 * x - c.a1 * y + st.s2;
  st.s2 = c.b2 * x - c.a2 * y;
  return y;
}

// Steady-state states for a constant input level, so a DC-offset input
// produces no startup transient. The level seen by section k is the input
// level scaled by the DC gains of the sections before it.
std::vector<SectionState> steady_states(const std::vector<Biquad>& sections,
                                        double input_level) {
  std::vector<SectionState> states(sections.size());
  double level = input_level;
  for (std::size_t k = 0; k < sections.size(); ++k) {
    const Biquad& c = sections[k];
    const double dc_gain = (c.b0 + c.b1 + c.b2) / (1.0 + c.a1 + c.a2);
    const double y = dc_gain * level;
    states[k].s2 = c.b2 * level - c.a2 * y;
    states[k].s1 = y - c.b0 * level;
    level = y;
  }
  return states;
}

void filter_in_place(const std::vector<Biquad>& sections, std::vector<double>& x) {
  std::vector<SectionState> states = steady_states(sections, x.empty() ? 0.0 : x[0]);
  for (double& v : x) {
    double y = v;
    for (std::size_t k = 0; k < sections.size(); ++k) {
      y = run_section(sections[k], states[k], y);
    }
    v = y;
  }
}

}  // namespace

std::vector<double> apply_filter(const FilterCoefficients& coeffs,
                                 std::span<const double> x) {
  const std::size_t pad = static_cast<std::size_t>(3 * coeffs.n_poles());
  const std::size_t n = x.size();
  if (n <= pad) {
    fail(errc::data, "series of length " + std::to_string(n) +
                         " is too short to filter (need > " +
                         std::to_string(pad) + " samples)");
  }

  // Odd reflection about the end samples keeps the extension continuous in
  // value, which together with the steady-state initialization suppresses
  // edge transients.
  std::vector<double> ext(n + 2 * pad);
  for (std::size_t i = 0; i < pad; ++i) {
    ext[i] = 2.0 * x[0] - x[pad - i];
  }
  std::copy(x.begin(), x.end(), ext.begin() + static_cast<std::ptrdiff_t>(pad));
  for (std::size_t i = 0; i < pad; ++i) {
    ext[pad + n + i] = 2.0 * x[n - 1] - x[n - 2 - i];
  }

  filter_in_place(coeffs.sections(), ext);
  std::reverse(ext.begin(), ext.end());
  filter_in_place(coeffs.sections(), ext);
  std::reverse(ext.begin(), ext.end());

  return {ext.begin() + static_cast<std::ptrdiff_t>(pad),
          ext.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

std::vector<double> zscore_normalize(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) fail(errc::data, "z-score needs at least 2 samples");

  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);

  double ss = 0.0;
  for (double v : x) {
    const double d = v - mean;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (sd == 0.0) {
    fail(errc::data, "cannot z-score a constant series (zero variance)");
  }

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (x[i] - mean) / sd;
  return out;
}

Trial preprocess_trial(const Trial& trial, const FilterCoefficients& coeffs) {
  Trial out = trial;
  const auto rows = trial.active.rows();
  std::vector<double> channel(static_cast<std::size_t>(rows));
  for (Eigen::Index c = 0; c < trial.active.cols(); ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) channel[static_cast<std::size_t>(r)] = trial.active(r, c);
    const std::vector<double> normalized = zscore_normalize(apply_filter(coeffs, channel));
    for (Eigen::Index r = 0; r < rows; ++r) out.active(r, c) = normalized[static_cast<std::size_t>(r)];
  }
  return out;
}

std::vector<Trial> preprocess_trials(const std::vector<Trial>& trials,
                                     const FilterCoefficients& coeffs) {
  std::vector<Trial> out;
  out.reserve(trials.size());
  for (const Trial& t : trials) out.push_back(preprocess_trial(t, coeffs));
  return out;
}

}  // namespace vowelbci
