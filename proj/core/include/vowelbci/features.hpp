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

#ifndef VOWELBCI_FEATURES_HPP_
#define VOWELBCI_FEATURES_HPP_

#include <Eigen/Core>
#include <vector>

#include "vowelbci/ingest.hpp"

namespace vowelbci {

/// Principal components kept per channel; 20 channels x 2 = the 40-dim
/// feature space.
inline constexpr int kComponentsPerChannel = 2;
inline constexpr int kFeatureDim = kSignalChannels * kComponentsPerChannel;

/// Fitted linear projection. Component rows are orthonormal, ordered by
/// descending eigenvalue, and sign-fixed so each row's largest-magnitude
/// entry is positive.
struct PcaModel {
  Eigen::VectorXd mean;
  Eigen::MatrixXd components;               // [n_kept x dim]
  Eigen::VectorXd explained_variance_ratio;  // [n_kept], fractions of total

  Eigen::Index dim() const { return mean.size(); }
  Eigen::Index n_kept() const { return components.rows(); }
};

/// Eigendecomposition of the mean-centered covariance (n-1 denominator).
PcaModel pca_fit(const Eigen::MatrixXd& rows, int n_kept);

/// Project one observation: components * (row - mean).
Eigen::VectorXd pca_transform(const PcaModel& model, const Eigen::VectorXd& row);

struct FeatureVector {
  Eigen::VectorXd values;  // length kFeatureDim
  int label = 0;           // vowel 1..5
  int subject_id = 0;
  int trial_index = 0;
};

struct FeatureAssembly {
  std::vector<FeatureVector> features;
  std::vector<PcaModel> channel_models;   // one per signal channel
  std::vector<double> explained_two_pc;   // per channel, sum of kept ratios
  std::vector<int> low_variance_channels; // 1-based channels with sum <= 0.75
};

/// Fit mode: per channel, stack the periodogram PSDs of every trial, fit a
/// 2-component PcaModel, project each trial, and concatenate the per-channel
/// pairs in channel order. Trials must already be filtered and normalized.
/// A channel whose two components explain <= 75% of variance is reported in
/// low_variance_channels, not rejected.
FeatureAssembly assemble_features(const std::vector<Trial>& trials);

/// Transform-only mode: reuse previously fitted channel models. Never refits,
/// so held-out data cannot leak into the projection.
std::vector<FeatureVector> assemble_features(
    const std::vector<Trial>& trials, const std::vector<PcaModel>& channel_models);

}  // namespace vowelbci

#endif  // VOWELBCI_FEATURES_HPP_
