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

#include "vowelbci/features.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>
#include <vector>

#include "vowelbci/errors.hpp"
#include "vowelbci/spectral.hpp"

namespace vowelbci {

PcaModel pca_fit(const Eigen::MatrixXd& rows, int n_kept) {
  const Eigen::Index n = rows.rows();
  const Eigen::Index dim = rows.cols();
  if (n < 2) fail(errc::data, "PCA needs at least 2 observations");
  if (n_kept < 1 || n_kept > std::min(n, dim)) {
    fail(errc::data, "cannot keep " + std::to_string(n_kept) +
                         " components from " + std::to_string(n) + "x" +
                         std::to_string(dim) + " data");
  }

  PcaModel model;
  model.mean = rows.colwise().mean();
  const Eigen::MatrixXd centered = rows.rowwise() - model.mean.transpose();
  const Eigen::MatrixXd covariance =
      centered.transpose() * centered / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  if (solver.info() != Eigen::Success) {
    fail(errc::numeric, "covariance eigendecomposition failed");
  }

  // Eigen returns ascending eigenvalues; take from the top.
  const Eigen::VectorXd eigenvalues = solver.eigenvalues();
  const double total_variance = eigenvalues.sum();
  if (!(total_variance > 0.0)) {
    fail(errc::data, "degenerate input: all observations identical");
  }

  model.components.resize(n_kept, dim);
  model.explained_variance_ratio.resize(n_kept);
  for (int k = 0; k < n_kept; ++k) {
    const Eigen::Index src = dim - 1 - k;
    Eigen::VectorXd axis = solver.eigenvectors().col(src);
    // Sign convention: largest-magnitude entry positive.
    Eigen::Index max_idx = 0;
    axis.cwiseAbs().maxCoeff(&max_idx);
    if (axis(max_idx) < 0.0) axis = -axis;
    model.components.row(k) = axis.transpose();
    model.explained_variance_ratio(k) =
        std::max(0.0, eigenvalues(src)) / total_variance;
  }
  return model;
}

Eigen::VectorXd pca_transform(const PcaModel& model, const Eigen::VectorXd& row) {
  if (row.size() != model.dim()) {
    fail(errc::data, "PCA transform dimension mismatch: row has " +
                         std::to_string(row.size()) + " entries, model expects " +
                         std::to_string(model.dim()));
  }
  return model.components * (row - model.mean);
}

namespace {

// PSDs of one channel across trials, stacked row per trial.
Eigen::MatrixXd channel_psd_matrix(const std::vector<Trial>& trials, int channel) {
  Eigen::MatrixXd stacked;
  std::vector<double> series;
  for (std::size_t t = 0; t < trials.size(); ++t) {
    const Eigen::MatrixXd& active = trials[t].active;
    series.resize(static_cast<std::size_t>(active.rows()));
    for (Eigen::Index r = 0; r < active.rows(); ++r) {
      series[static_cast<std::size_t>(r)] = active(r, channel);
    }
    const Psd psd = periodogram_psd(series, trials[t].sample_rate_hz);
    if (stacked.size() == 0) {
      stacked.resize(static_cast<Eigen::Index>(trials.size()), psd.bins());
    }
    stacked.row(static_cast<Eigen::Index>(t)) = psd.power.transpose();
  }
  return stacked;
}

void check_trials(const std::vector<Trial>& trials) {
  if (trials.empty()) fail(errc::data, "no trials to assemble features from");
  for (const Trial& t : trials) {
    if (t.active.cols() != kSignalChannels) {
      fail(errc::data, "trial has " + std::to_string(t.active.cols()) +
                           " channels, expected " + std::to_string(kSignalChannels));
    }
    if (t.active.rows() != trials.front().active.rows()) {
      fail(errc::data, "trials have inconsistent window lengths");
    }
  }
}

FeatureVector make_feature(const Trial& trial) {
  FeatureVector f;
  f.values.resize(kFeatureDim);
  f.label = trial.vowel_label;
  f.subject_id = trial.subject_id;
  f.trial_index = trial.trial_index;
  return f;
}

}  // namespace

FeatureAssembly assemble_features(const std::vector<Trial>& trials) {
  check_trials(trials);
  if (trials.size() < 2) {
    fail(errc::data, "fitting per-channel PCA needs at least 2 trials");
  }

  FeatureAssembly out;
  out.channel_models.reserve(kSignalChannels);
  out.explained_two_pc.reserve(kSignalChannels);
  out.features.reserve(trials.size());
  for (const Trial& t : trials) out.features.push_back(make_feature(t));

  for (int c = 0; c < kSignalChannels; ++c) {
    const Eigen::MatrixXd psds = channel_psd_matrix(trials, c);
    PcaModel model = pca_fit(psds, kComponentsPerChannel);
    const double explained = model.explained_variance_ratio.sum();
    out.explained_two_pc.push_back(explained);
    if (explained <= 0.75) out.low_variance_channels.push_back(c + 1);

    for (std::size_t t = 0; t < trials.size(); ++t) {
      const Eigen::VectorXd scores =
          model.components *
          (psds.row(static_cast<Eigen::Index>(t)).transpose() - model.mean);
      out.features[t].values.segment(c * kComponentsPerChannel,
                                     kComponentsPerChannel) = scores;
    }
    out.channel_models.push_back(std::move(model));
  }
  return out;
}

std::vector<FeatureVector> assemble_features(
    const std::vector<Trial>& trials, const std::vector<PcaModel>& channel_models) {
  check_trials(trials);
  if (channel_models.size() != static_cast<std::size_t>(kSignalChannels)) {
    fail(errc::model, "expected " + std::to_string(kSignalChannels) +
                          " channel models, got " +
                          std::to_string(channel_models.size()));
  }

  std::vector<FeatureVector> features;
  features.reserve(trials.size());
  for (const Trial& t : trials) features.push_back(make_feature(t));

  for (int c = 0; c < kSignalChannels; ++c) {
    const Eigen::MatrixXd psds = channel_psd_matrix(trials, c);
    const PcaModel& model = channel_models[static_cast<std::size_t>(c)];
    if (psds.cols() != model.dim()) {
      fail(errc::model, "channel " + std::to_string(c + 1) + " PSD has " +
                            std::to_string(psds.cols()) +
                            " bins but the fitted model expects " +
                            std::to_string(model.dim()));
    }
    if (model.n_kept() != kComponentsPerChannel) {
      fail(errc::model, "channel " + std::to_string(c + 1) + " model keeps " +
                            std::to_string(model.n_kept()) + " components");
    }
    for (std::size_t t = 0; t < trials.size(); ++t) {
      features[t].values.segment(c * kComponentsPerChannel, kComponentsPerChannel) =
          model.components *
          (psds.row(static_cast<Eigen::Index>(t)).transpose() - model.mean);
    }
  }
  return features;
}

}  // namespace vowelbci
