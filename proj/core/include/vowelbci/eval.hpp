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

#ifndef VOWELBCI_EVAL_HPP_
#define VOWELBCI_EVAL_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <set>
#include <vector>

#include "vowelbci/dtsvm.hpp"
#include "vowelbci/features.hpp"

namespace vowelbci {

/// The split protocol: drop warm-up/fatigue trials, hold out one trial index
/// per session as the test set, and extend it with n_prime training vectors
/// (picked by one seeded shuffle, and left in the training set) to form the
/// test-like set S*.
struct SplitSpec {
  std::set<int> dropped_trials{1, 10};
  int test_trial = 4;
  int n_prime = 100;
  std::uint64_t shuffle_seed = 0;
};

struct SplitIndices {
  std::vector<std::size_t> train;      // S_n, in stable dataset order
  std::vector<std::size_t> test;       // S_t
  std::vector<std::size_t> test_like;  // S* = S_t then the n' picks
};

/// Split any items carrying (subject_id, vowel/label, trial_index) metadata.
/// Fails if any (subject, vowel) pair is missing one of the 10 trial indices.
template <class T>
SplitIndices split_paper_protocol(const std::vector<T>& items, const SplitSpec& spec);

/// Fraction of S* the model mislabels (the pooled test-like error).
double test_like_error(const DtSvmModel& model,
                       const std::vector<FeatureVector>& s_star);

struct EvalReport {
  Eigen::MatrixXd confusion;             // [K x K], rows normalized when present
  Eigen::MatrixXi confusion_counts;      // raw counts
  Eigen::VectorXd per_class_accuracy;    // diag of confusion
  Eigen::VectorXd per_class_error;       // 1 - diag
  Eigen::VectorXi per_class_count;       // samples of each true class in S*
  double overall_error = 0.0;            // misclassified / |S*|
  int m = 0;                             // held-out test size
  int n_prime = 0;
};

/// Confusion matrix and per-class statistics over S*. overall_error equals
/// test_like_error on the same set by construction.
EvalReport confusion_matrix(const DtSvmModel& model,
                            const std::vector<FeatureVector>& s_star);

// -- Template implementation ------------------------------------------------

namespace eval_detail {

SplitIndices split_indices(const std::vector<int>& subjects,
                           const std::vector<int>& vowels,
                           const std::vector<int>& trial_indices,
                           const SplitSpec& spec);

}  // namespace eval_detail

template <class T>
SplitIndices split_paper_protocol(const std::vector<T>& items, const SplitSpec& spec) {
  std::vector<int> subjects, vowels, trials;
  subjects.reserve(items.size());
  vowels.reserve(items.size());
  trials.reserve(items.size());
  for (const T& item : items) {
    subjects.push_back(item.subject_id);
    trials.push_back(item.trial_index);
    if constexpr (requires { item.vowel_label; }) {
      vowels.push_back(item.vowel_label);
    } else {
      vowels.push_back(item.label);
    }
  }
  return eval_detail::split_indices(subjects, vowels, trials, spec);
}

template <class T>
std::vector<T> select_items(const std::vector<T>& items,
                            const std::vector<std::size_t>& indices) {
  std::vector<T> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(items[i]);
  return out;
}

}  // namespace vowelbci

#endif  // VOWELBCI_EVAL_HPP_
