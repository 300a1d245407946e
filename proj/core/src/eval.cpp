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

#include "vowelbci/eval.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "vowelbci/errors.hpp"
#include "vowelbci/ingest.hpp"
#include "vowelbci/random.hpp"

namespace vowelbci {

namespace eval_detail {

SplitIndices split_indices(const std::vector<int>& subjects,
                           const std::vector<int>& vowels,
                           const std::vector<int>& trial_indices,
                           const SplitSpec& spec) {
  const std::size_t n = subjects.size();
  if (n == 0) fail(errc::data, "nothing to split");
  if (spec.dropped_trials.count(spec.test_trial)) {
    fail(errc::config, "test trial " + std::to_string(spec.test_trial) +
                           " is in the dropped set");
  }
  if (spec.n_prime < 0) fail(errc::config, "n_prime must be nonnegative");

  // Every session must carry the full set of trial indices.
  std::map<std::pair<int, int>, std::set<int>> sessions;
  for (std::size_t i = 0; i < n; ++i) {
    if (!sessions[{subjects[i], vowels[i]}].insert(trial_indices[i]).second) {
      fail(errc::data, "duplicate trial " + std::to_string(trial_indices[i]) +
                           " for subject " + std::to_string(subjects[i]) +
                           ", vowel " + std::to_string(vowels[i]));
    }
  }
  for (const auto& [key, trials] : sessions) {
    for (int t = 1; t <= kTrialsPerSession; ++t) {
      if (!trials.count(t)) {
        fail(errc::data, "subject " + std::to_string(key.first) + ", vowel " +
                             std::to_string(key.second) + " is missing trial " +
                             std::to_string(t));
      }
    }
  }

  SplitIndices out;
  for (std::size_t i = 0; i < n; ++i) {
    const int trial = trial_indices[i];
    if (spec.dropped_trials.count(trial)) continue;
    if (trial == spec.test_trial) {
      out.test.push_back(i);
    } else {
      out.train.push_back(i);
    }
  }
  if (static_cast<std::size_t>(spec.n_prime) > out.train.size()) {
    fail(errc::config, "n_prime " + std::to_string(spec.n_prime) +
                           " exceeds the training-set size " +
                           std::to_string(out.train.size()));
  }

  out.test_like = out.test;
  std::vector<std::size_t> shuffled = out.train;
  rng_engine rng(spec.shuffle_seed);
  deterministic_shuffle(shuffled, rng);
  out.test_like.insert(out.test_like.end(), shuffled.begin(),
                       shuffled.begin() + spec.n_prime);
  return out;
}

}  // namespace eval_detail

double test_like_error(const DtSvmModel& model,
                       const std::vector<FeatureVector>& s_star) {
  if (s_star.empty()) fail(errc::data, "empty evaluation set");
  std::size_t wrong = 0;
  for (const FeatureVector& f : s_star) {
    if (predict_dtsvm(model, f.values) != f.label) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(s_star.size());
}

EvalReport confusion_matrix(const DtSvmModel& model,
                            const std::vector<FeatureVector>& s_star) {
  if (s_star.empty()) fail(errc::data, "empty evaluation set");
  const int k = model.dendrogram.n_classes;

  EvalReport report;
  report.confusion_counts = Eigen::MatrixXi::Zero(k, k);
  std::size_t wrong = 0;
  for (const FeatureVector& f : s_star) {
    if (f.label < 1 || f.label > k) {
      fail(errc::data, "label " + std::to_string(f.label) +
                           " outside the model's 1.." + std::to_string(k));
    }
    const int predicted = predict_dtsvm(model, f.values);
    report.confusion_counts(f.label - 1, predicted - 1) += 1;
    if (predicted != f.label) ++wrong;
  }

  report.confusion = Eigen::MatrixXd::Zero(k, k);
  report.per_class_accuracy = Eigen::VectorXd::Zero(k);
  report.per_class_error = Eigen::VectorXd::Zero(k);
  report.per_class_count = report.confusion_counts.rowwise().sum();
  for (int i = 0; i < k; ++i) {
    const int row_total = report.per_class_count(i);
    if (row_total == 0) continue;
    report.confusion.row(i) =
        report.confusion_counts.row(i).cast<double>() / row_total;
    report.per_class_accuracy(i) = report.confusion(i, i);
    report.per_class_error(i) = 1.0 - report.confusion(i, i);
  }
  report.overall_error =
      static_cast<double>(wrong) / static_cast<double>(s_star.size());
  return report;
}

}  // namespace vowelbci
