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

#ifndef VOWELBCI_CONFIG_HPP_
#define VOWELBCI_CONFIG_HPP_

#include <filesystem>
#include <optional>
#include <string>

#include "vowelbci/dsp.hpp"
#include "vowelbci/dtsvm.hpp"
#include "vowelbci/eval.hpp"
#include "vowelbci/synth.hpp"

namespace vowelbci {

/// Everything the train/eval commands need. Lives in a flat `key = value`
/// file; unknown keys are errors, omitted keys take the defaults below.
struct PipelineConfig {
  std::filesystem::path data_dir;
  std::filesystem::path output_dir;
  BandPassSpec bandpass;
  SplitSpec split;
  DistanceMetric metric = DistanceMetric::euclidean;
  double svm_c = 1.0;
  std::optional<double> svm_sigma;  // unset = median heuristic, key "median"
  double svm_tol = 1e-3;
  int svm_max_passes = 1000;
  std::uint64_t seed = 0;

  DtSvmConfig dtsvm_config() const;
};

PipelineConfig load_pipeline_config(const std::filesystem::path& path);
void save_pipeline_config(const std::filesystem::path& path,
                          const PipelineConfig& config);

/// Synthetic-corpus spec in the same key = value format. Omitted signature
/// keys fall back to the stock class signatures.
SynthSpec load_synth_spec(const std::filesystem::path& path);
void save_synth_spec(const std::filesystem::path& path, const SynthSpec& spec);

/// Environment variable consulted when a config file does not set `seed`.
inline constexpr const char* kSeedEnvVar = "VOWELBCI_SEED";

/// The seed override from the environment, if set (and a valid integer).
std::optional<std::uint64_t> seed_from_env();

}  // namespace vowelbci

#endif  // VOWELBCI_CONFIG_HPP_
