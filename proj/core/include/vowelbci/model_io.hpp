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

#ifndef VOWELBCI_MODEL_IO_HPP_
#define VOWELBCI_MODEL_IO_HPP_

#include <filesystem>
#include <optional>

#include "vowelbci/dsp.hpp"
#include "vowelbci/dtsvm.hpp"

namespace vowelbci {

/// The self-describing model archive: dendrogram, per-level SVMs, per-channel
/// PCA models and the preprocessing settings, so prediction from raw session
/// files is fully reproducible. Stored as JSON; doubles are serialized with
/// round-trip precision, so a load/save cycle preserves predictions bit for
/// bit.
struct TrainedModel {
  int format_version = 1;
  DtSvmModel dtsvm;
  BandPassSpec bandpass;
  DistanceMetric metric = DistanceMetric::euclidean;
  double svm_c = 1.0;
  double svm_tol = 1e-3;
  std::optional<double> svm_sigma_config;  // unset = median heuristic
  std::uint64_t seed = 0;
};

void save_model(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace vowelbci

#endif  // VOWELBCI_MODEL_IO_HPP_
