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

// End-to-end orchestration: raw session files -> trials -> filtered and
// normalized windows -> per-channel PSD -> PCA features -> dendrogram SVM,
// plus evaluation and per-session prediction on top of a trained model.

#ifndef VOWELBCI_PIPELINE_HPP_
#define VOWELBCI_PIPELINE_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "vowelbci/config.hpp"
#include "vowelbci/eval.hpp"
#include "vowelbci/model_io.hpp"

namespace vowelbci {

struct TrainOutput {
  TrainedModel model;
  DtSvmTrainInfo svm_info;
  std::vector<double> explained_two_pc;    // per channel
  std::vector<int> low_variance_channels;  // 1-based, 2-PC share <= 0.75
  std::size_t train_size = 0;
};

/// Train on the S_n split of the given corpus. PCA models are fitted on the
/// training trials only and bundled into the model.
TrainOutput train_pipeline(const PipelineConfig& config,
                           const std::vector<std::filesystem::path>& session_files);

/// Context echoed into report files alongside the numbers.
struct ReportContext {
  std::uint64_t seed = 0;
  std::string metric;
  double svm_c = 1.0;
  std::vector<double> sigma_per_level;
  int m = 0;
  int n_prime = 0;
  int train_size = 0;
  int test_trial = 0;
  std::vector<int> dropped_trials;
  std::string dendrogram;
};

struct EvalOutput {
  EvalReport report;
  ReportContext context;
};

/// Rebuild the split with the model's preprocessing settings, transform S*
/// through the bundled PCA models, and score it.
EvalOutput evaluate_pipeline(const TrainedModel& model, const PipelineConfig& config,
                             const std::vector<std::filesystem::path>& session_files);

struct TrialPrediction {
  int trial_index = 0;
  PredictTrace trace;
};

/// Predict every (non-dropped) trial of one session file with the model's own
/// preprocessing and feature projection.
std::vector<TrialPrediction> predict_session(
    const TrainedModel& model, const std::filesystem::path& session_file,
    const std::set<int>& dropped_trials = {});

std::string render_report_text(const EvalReport& report, const ReportContext& context);
std::string render_report_json(const EvalReport& report, const ReportContext& context);

/// Write both report forms atomically; returns the two paths
/// (`eval_report_<metric>.txt` / `.json` under out_dir).
std::pair<std::filesystem::path, std::filesystem::path> write_report_files(
    const std::filesystem::path& out_dir, const EvalReport& report,
    const ReportContext& context);

/// Reload a JSON report (for re-rendering the text form).
std::pair<EvalReport, ReportContext> load_report_json(
    const std::filesystem::path& path);

}  // namespace vowelbci

#endif  // VOWELBCI_PIPELINE_HPP_
