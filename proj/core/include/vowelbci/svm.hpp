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

#ifndef VOWELBCI_SVM_HPP_
#define VOWELBCI_SVM_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

namespace vowelbci {

struct KernelSpec {
  double sigma = 1.0;  // RBF width, > 0
};

/// Gaussian kernel exp(-|x - y|^2 / (2 sigma^2)), in (0, 1].
double rbf_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double sigma);

/// Median of all pairwise Euclidean distances; the default kernel width.
/// Falls back to 1.0 when the median vanishes (duplicated points).
double median_pairwise_distance(const Eigen::MatrixXd& rows);

struct SvmTrainConfig {
  double c_penalty = 1.0;
  double tol = 1e-3;       // KKT slack
  int max_passes = 1000;   // bound on full sweeps over the data
  std::uint64_t seed = 0;  // drives working-set tie-breaking
};

/// Soft-margin binary SVM in dual form. dual_coefs holds alpha_i * y_i for
/// the retained support vectors, so sum(dual_coefs) ~ 0 and
/// 0 < |dual_coefs_i| <= c_penalty.
struct BinarySvmModel {
  Eigen::MatrixXd support_vectors;  // [n_sv x d]
  Eigen::VectorXd dual_coefs;
  double bias = 0.0;
  KernelSpec kernel;
  double c_penalty = 1.0;
  bool converged = true;
};

struct SvmTrainStats {
  int sweeps = 0;
  bool converged = false;
  /// Dual objective after every sweep (nondecreasing for a correct solver);
  /// only tracked when the Gram matrix is cached.
  std::vector<double> objective_per_sweep;
};

/// Two-variable working-set ascent on the SVM dual (SMO) with the classic
/// second-choice heuristics. Stops when every multiplier satisfies the KKT
/// conditions within tol; if max_passes sweeps are exhausted first the model
/// comes back flagged non-converged rather than throwing.
BinarySvmModel smo_train(const Eigen::MatrixXd& X, const std::vector<int>& y,
                         double c_penalty, const KernelSpec& kernel, double tol,
                         int max_passes, std::uint64_t seed = 0,
                         SvmTrainStats* stats = nullptr);

BinarySvmModel smo_train(const Eigen::MatrixXd& X, const std::vector<int>& y,
                         const KernelSpec& kernel, const SvmTrainConfig& config,
                         SvmTrainStats* stats = nullptr);

/// f(x) = sum_i dual_coefs_i k(sv_i, x) + bias.
double svm_decision(const BinarySvmModel& model, const Eigen::VectorXd& x);

/// sign(f); the tie f == 0 resolves to +1.
int svm_predict(const BinarySvmModel& model, const Eigen::VectorXd& x);

}  // namespace vowelbci

#endif  // VOWELBCI_SVM_HPP_
