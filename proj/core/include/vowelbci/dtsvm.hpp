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

#ifndef VOWELBCI_DTSVM_HPP_
#define VOWELBCI_DTSVM_HPP_

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "vowelbci/features.hpp"
#include "vowelbci/svm.hpp"

namespace vowelbci {

struct ClassCentroid {
  int class_id = 0;
  Eigen::VectorXd centroid;
  int count = 0;
};

/// Mean feature vector per class. Classes 1..K must all be present.
std::vector<ClassCentroid> class_centroids(const std::vector<FeatureVector>& features);

enum class DistanceMetric { euclidean, seuclidean, cosine, spearman };

DistanceMetric parse_metric(const std::string& name);
std::string metric_name(DistanceMetric metric);
std::vector<DistanceMetric> all_metrics();

/// Distance between two group mean vectors. seuclidean needs the pooled
/// per-dimension standard deviation of the training features.
double group_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                      DistanceMetric metric,
                      const Eigen::VectorXd* pooled_std = nullptr);

/// One merge: the two groups joined at this level. group_a maps to +1 and
/// group_b to -1 in the level's classifier. Within a merge the larger group
/// comes first (ties: the group with the smaller minimum class id).
struct DendrogramMerge {
  std::vector<int> group_a;  // sorted class ids
  std::vector<int> group_b;
};

struct Dendrogram {
  std::vector<DendrogramMerge> merges;  // exactly K-1, in merge order
  int n_classes = 0;

  std::string to_string() const;  // e.g. [({4},{5}), ({2},{3}), ...]
};

/// Agglomerative centroid linkage: repeatedly join the globally closest pair
/// of groups, measuring distance between count-weighted group means. Ties on
/// distance resolve to the lexicographically smallest pair of sorted id sets.
Dendrogram build_dendrogram(const std::vector<ClassCentroid>& centroids,
                            DistanceMetric metric,
                            const Eigen::VectorXd* pooled_std = nullptr);

struct DtSvmConfig {
  DistanceMetric metric = DistanceMetric::euclidean;
  double c_penalty = 1.0;
  std::optional<double> sigma;  // unset: median pairwise distance per level
  double tol = 1e-3;
  int max_passes = 1000;
  std::uint64_t seed = 0;
};

struct DtSvmModel {
  Dendrogram dendrogram;
  std::vector<BinarySvmModel> classifiers;  // one per merge level
  std::vector<PcaModel> pca_models;         // bundled for end-to-end prediction

  Eigen::Index feature_dim() const;
};

struct DtSvmTrainInfo {
  std::vector<double> sigma_per_level;
  std::vector<bool> converged_per_level;
};

/// Build the dendrogram from class centroids, then train one binary SVM per
/// merge on exactly the two groups' vectors (group_a as +1).
DtSvmModel train_dtsvm(const std::vector<FeatureVector>& features,
                       const DtSvmConfig& config, DtSvmTrainInfo* info = nullptr);

/// Descend the dendrogram from the final merge; the sign of each level's
/// decision picks the subtree until a single class remains.
int predict_dtsvm(const DtSvmModel& model, const Eigen::VectorXd& x);

struct PredictStep {
  int level = 0;  // 1-based dendrogram level
  double decision = 0.0;
  bool chose_group_a = false;
};

struct PredictTrace {
  int label = 0;
  std::vector<PredictStep> steps;
};

PredictTrace predict_dtsvm_traced(const DtSvmModel& model, const Eigen::VectorXd& x);

/// Pooled per-dimension standard deviation (n-1) across feature vectors,
/// the scaling vector for the seuclidean metric.
Eigen::VectorXd pooled_feature_std(const std::vector<FeatureVector>& features);

}  // namespace vowelbci

#endif  // VOWELBCI_DTSVM_HPP_
