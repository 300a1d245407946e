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

#include "vowelbci/dtsvm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "vowelbci/errors.hpp"
#include "vowelbci/random.hpp"

namespace vowelbci {

std::vector<ClassCentroid> class_centroids(const std::vector<FeatureVector>& features) {
  if (features.empty()) fail(errc::data, "no feature vectors");
  int k = 0;
  for (const FeatureVector& f : features) k = std::max(k, f.label);
  if (k < 1) fail(errc::data, "labels must be positive");

  std::vector<ClassCentroid> centroids(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) {
    centroids[static_cast<std::size_t>(c)].class_id = c + 1;
    centroids[static_cast<std::size_t>(c)].centroid =
        Eigen::VectorXd::Zero(features.front().values.size());
  }
  for (const FeatureVector& f : features) {
    ClassCentroid& cc = centroids[static_cast<std::size_t>(f.label - 1)];
    cc.centroid += f.values;
    cc.count += 1;
  }
  for (ClassCentroid& cc : centroids) {
    if (cc.count == 0) {
      fail(errc::data, "class " + std::to_string(cc.class_id) +
                           " has no feature vectors");
    }
    cc.centroid /= static_cast<double>(cc.count);
  }
  return centroids;
}

DistanceMetric parse_metric(const std::string& name) {
  if (name == "euclidean") return DistanceMetric::euclidean;
  if (name == "seuclidean") return DistanceMetric::seuclidean;
  if (name == "cosine") return DistanceMetric::cosine;
  if (name == "spearman") return DistanceMetric::spearman;
  fail(errc::config, "unknown distance metric '" + name +
                         "' (expected euclidean|seuclidean|cosine|spearman)");
}

std::string metric_name(DistanceMetric metric) {
  switch (metric) {
    case DistanceMetric::euclidean:
      return "euclidean";
    case DistanceMetric::seuclidean:
      return "seuclidean";
    case DistanceMetric::cosine:
      return "cosine";
    case DistanceMetric::spearman:
      return "spearman";
  }
  return "unknown";
}

std::vector<DistanceMetric> all_metrics() {
  return {DistanceMetric::euclidean, DistanceMetric::seuclidean,
          DistanceMetric::cosine, DistanceMetric::spearman};
}

namespace {

// Average ranks, ties share the mean of their rank range.
Eigen::VectorXd average_ranks(const Eigen::VectorXd& v) {
  const Eigen::Index n = v.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return v(a) < v(b); });

  Eigen::VectorXd ranks(n);
  Eigen::Index i = 0;
  while (i < n) {
    Eigen::Index j = i;
    while (j + 1 < n && v(order[static_cast<std::size_t>(j + 1)]) ==
                            v(order[static_cast<std::size_t>(i)])) {
      ++j;
    }
    const double shared = 0.5 * static_cast<double>(i + j) + 1.0;  // 1-based
    for (Eigen::Index t = i; t <= j; ++t) {
      ranks(order[static_cast<std::size_t>(t)]) = shared;
    }
    i = j + 1;
  }
  return ranks;
}

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double n = static_cast<double>(a.size());
  const Eigen::VectorXd da = a.array() - a.mean();
  const Eigen::VectorXd db = b.array() - b.mean();
  const double denom = std::sqrt(da.squaredNorm() * db.squaredNorm());
  if (denom == 0.0) {
    fail(errc::data, "rank correlation undefined for a constant vector");
  }
  (void)n;
  return da.dot(db) / denom;
}

}  // namespace

double group_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                      DistanceMetric metric, const Eigen::VectorXd* pooled_std) {
  if (a.size() != b.size()) {
    fail(errc::data, "distance dimension mismatch: " + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()));
  }
  switch (metric) {
    case DistanceMetric::euclidean:
      return std::sqrt((a - b).squaredNorm());
    case DistanceMetric::seuclidean: {
      if (pooled_std == nullptr || pooled_std->size() != a.size()) {
        fail(errc::data, "seuclidean needs a pooled standard-deviation vector");
      }
      if ((pooled_std->array() <= 0.0).any()) {
        fail(errc::data, "seuclidean is undefined with a zero-variance dimension");
      }
      return std::sqrt(((a - b).array() / pooled_std->array()).square().sum());
    }
    case DistanceMetric::cosine: {
      const double na = a.norm();
      const double nb = b.norm();
      if (na == 0.0 || nb == 0.0) {
        fail(errc::data, "cosine distance undefined for a zero vector");
      }
      return 1.0 - a.dot(b) / (na * nb);
    }
    case DistanceMetric::spearman:
      return 1.0 - pearson(average_ranks(a), average_ranks(b));
  }
  fail(errc::config, "unknown metric");
}

std::string Dendrogram::to_string() const {
  const auto group = [](const std::vector<int>& ids) {
    std::string s = "{";
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(ids[i]);
    }
    return s + "}";
  };
  std::string s = "[";
  for (std::size_t i = 0; i < merges.size(); ++i) {
    if (i) s += ", ";
    s += "(" + group(merges[i].group_a) + "," + group(merges[i].group_b) + ")";
  }
  return s + "]";
}

namespace {

struct Group {
  std::vector<int> ids;  // sorted
  Eigen::VectorXd mean;
  int count = 0;
};

bool pair_less(const Group& a1, const Group& b1, const Group& a2, const Group& b2) {
  // Canonical pair key: (lexicographically smaller id set, other id set).
  const std::vector<int>& lo1 = std::min(a1.ids, b1.ids);
  const std::vector<int>& hi1 = std::max(a1.ids, b1.ids);
  const std::vector<int>& lo2 = std::min(a2.ids, b2.ids);
  const std::vector<int>& hi2 = std::max(a2.ids, b2.ids);
  if (lo1 != lo2) return lo1 < lo2;
  return hi1 < hi2;
}

}  // namespace

Dendrogram build_dendrogram(const std::vector<ClassCentroid>& centroids,
                            DistanceMetric metric, const Eigen::VectorXd* pooled_std) {
  if (centroids.size() < 2) fail(errc::data, "need at least 2 classes");

  std::vector<Group> groups;
  groups.reserve(centroids.size());
  for (const ClassCentroid& cc : centroids) {
    groups.push_back({{cc.class_id}, cc.centroid, cc.count});
  }

  Dendrogram out;
  out.n_classes = static_cast<int>(centroids.size());
  out.merges.reserve(centroids.size() - 1);

  while (groups.size() > 1) {
    std::size_t best_i = 0, best_j = 1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < groups.size(); ++i) {
      for (std::size_t j = i + 1; j < groups.size(); ++j) {
        const double d =
            group_distance(groups[i].mean, groups[j].mean, metric, pooled_std);
        if (d < best_d ||
            (d == best_d &&
             pair_less(groups[i], groups[j], groups[best_i], groups[best_j]))) {
          best_d = d;
          best_i = i;
          best_j = j;
        }
      }
    }

    const Group& gi = groups[best_i];
    const Group& gj = groups[best_j];
    // group_a is the larger group; ties go to the smaller minimum class id.
    const bool i_first = gi.ids.size() != gj.ids.size()
                             ? gi.ids.size() > gj.ids.size()
                             : gi.ids.front() < gj.ids.front();
    const Group& ga = i_first ? gi : gj;
    const Group& gb = i_first ? gj : gi;
    out.merges.push_back({ga.ids, gb.ids});

    Group merged;
    merged.ids.resize(gi.ids.size() + gj.ids.size());
    std::merge(gi.ids.begin(), gi.ids.end(), gj.ids.begin(), gj.ids.end(),
               merged.ids.begin());
    merged.count = gi.count + gj.count;
    merged.mean = (gi.mean * gi.count + gj.mean * gj.count) / merged.count;

    groups[best_i] = std::move(merged);
    groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(best_j));
  }
  return out;
}

Eigen::VectorXd pooled_feature_std(const std::vector<FeatureVector>& features) {
  if (features.size() < 2) fail(errc::data, "pooled std needs at least 2 vectors");
  const Eigen::Index dim = features.front().values.size();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  for (const FeatureVector& f : features) mean += f.values;
  mean /= static_cast<double>(features.size());
  Eigen::VectorXd ss = Eigen::VectorXd::Zero(dim);
  for (const FeatureVector& f : features) {
    ss.array() += (f.values - mean).array().square();
  }
  return (ss / static_cast<double>(features.size() - 1)).cwiseSqrt();
}

Eigen::Index DtSvmModel::feature_dim() const {
  if (classifiers.empty()) return 0;
  return classifiers.front().support_vectors.cols();
}

DtSvmModel train_dtsvm(const std::vector<FeatureVector>& features,
                       const DtSvmConfig& config, DtSvmTrainInfo* info) {
  const std::vector<ClassCentroid> centroids = class_centroids(features);
  for (const ClassCentroid& cc : centroids) {
    if (cc.count < 2) {
      fail(errc::data, "class " + std::to_string(cc.class_id) +
                           " has fewer than 2 vectors");
    }
  }

  Eigen::VectorXd pooled;
  const Eigen::VectorXd* pooled_ptr = nullptr;
  if (config.metric == DistanceMetric::seuclidean) {
    pooled = pooled_feature_std(features);
    pooled_ptr = &pooled;
  }

  DtSvmModel model;
  model.dendrogram = build_dendrogram(centroids, config.metric, pooled_ptr);
  model.classifiers.reserve(model.dendrogram.merges.size());
  if (info) {
    info->sigma_per_level.clear();
    info->converged_per_level.clear();
  }

  for (std::size_t level = 0; level < model.dendrogram.merges.size(); ++level) {
    const DendrogramMerge& merge = model.dendrogram.merges[level];
    const std::set<int> side_a(merge.group_a.begin(), merge.group_a.end());
    const std::set<int> side_b(merge.group_b.begin(), merge.group_b.end());

    std::vector<Eigen::Index> rows;
    std::vector<int> labels;
    for (std::size_t i = 0; i < features.size(); ++i) {
      if (side_a.count(features[i].label)) {
        rows.push_back(static_cast<Eigen::Index>(i));
        labels.push_back(1);
      } else if (side_b.count(features[i].label)) {
        rows.push_back(static_cast<Eigen::Index>(i));
        labels.push_back(-1);
      }
    }

    Eigen::MatrixXd X(static_cast<Eigen::Index>(rows.size()),
                      features.front().values.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      X.row(static_cast<Eigen::Index>(r)) =
          features[static_cast<std::size_t>(rows[r])].values.transpose();
    }

    KernelSpec kernel;
    kernel.sigma = config.sigma.value_or(median_pairwise_distance(X));
    SvmTrainStats stats;
    BinarySvmModel classifier =
        smo_train(X, labels, config.c_penalty, kernel, config.tol,
                  config.max_passes, derive_seed(config.seed, level), &stats);
    if (info) {
      info->sigma_per_level.push_back(kernel.sigma);
      info->converged_per_level.push_back(stats.converged);
    }
    model.classifiers.push_back(std::move(classifier));
  }
  return model;
}

namespace {

// Level (index into merges) whose merge produced exactly `ids`.
std::size_t level_of_group(const Dendrogram& dendrogram, const std::vector<int>& ids,
                           std::size_t below) {
  for (std::size_t level = below; level-- > 0;) {
    const DendrogramMerge& m = dendrogram.merges[level];
    if (m.group_a.size() + m.group_b.size() != ids.size()) continue;
    std::vector<int> joined(ids.size());
    std::merge(m.group_a.begin(), m.group_a.end(), m.group_b.begin(),
               m.group_b.end(), joined.begin());
    if (joined == ids) return level;
  }
  fail(errc::model, "dendrogram is missing the merge for a non-singleton group");
}

}  // namespace

PredictTrace predict_dtsvm_traced(const DtSvmModel& model, const Eigen::VectorXd& x) {
  if (model.classifiers.empty()) fail(errc::model, "empty model");
  if (x.size() != model.feature_dim()) {
    fail(errc::data, "prediction dimension mismatch: input has " +
                         std::to_string(x.size()) + " entries, model expects " +
                         std::to_string(model.feature_dim()));
  }

  PredictTrace trace;
  std::size_t level = model.dendrogram.merges.size() - 1;
  while (true) {
    const DendrogramMerge& merge = model.dendrogram.merges[level];
    const double decision = svm_decision(model.classifiers[level], x);
    const bool chose_a = decision >= 0.0;
    trace.steps.push_back({static_cast<int>(level) + 1, decision, chose_a});

    const std::vector<int>& side = chose_a ? merge.group_a : merge.group_b;
    if (side.size() == 1) {
      trace.label = side.front();
      return trace;
    }
    level = level_of_group(model.dendrogram, side, level);
  }
}

int predict_dtsvm(const DtSvmModel& model, const Eigen::VectorXd& x) {
  return predict_dtsvm_traced(model, x).label;
}

}  // namespace vowelbci
