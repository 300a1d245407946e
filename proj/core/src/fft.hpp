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

// Internal FFT used by the periodogram. Radix-2 Cooley-Tukey for power-of-two
// lengths, Bluestein's chirp-z algorithm otherwise, so any length works with
// O(n log n) cost.

#ifndef VOWELBCI_SRC_FFT_HPP_
#define VOWELBCI_SRC_FFT_HPP_

#include <complex>
#include <vector>

namespace vowelbci::detail {

/// In-place forward DFT: X_k = sum_n x_n exp(-2 pi i k n / N).
void fft(std::vector<std::complex<double>>& data);

}  // namespace vowelbci::detail

#endif  // VOWELBCI_SRC_FFT_HPP_
