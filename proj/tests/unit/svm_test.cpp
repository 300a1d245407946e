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

#include "vowelbci/svm.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "vowelbci/errors.hpp"
#include "vowelbci/random.hpp"

using namespace vowelbci;

namespace {

/// KKT audit on the final model over its training data.
bool kkt_holds(const BinarySvmModel& model, const Eigen::MatrixXd& X,
               const std::vector<int>& y, double tol) {
  // Recover alpha_i from the stored dual coefs by matching rows.
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    double alpha = 0.0;
    for (Eigen::Index s = 0; s < model.support_vectors.rows(); ++s) {
      if ((model.support_vectors.row(s) - X.row(i)).norm() == 0.0 &&
          ((model.dual_coefs(s) > 0) == (y[static_cast<std::size_t>(i)] > 0))) {
        alpha = std::abs(model.dual_coefs(s));
        break;
      }
    }
    const double yf = y[static_cast<std::size_t>(i)] * svm_decision(model, X.row(i));
    if (alpha <= 0.0) {
      if (yf < 1.0 - tol) return false;
    } else if (alpha >= model.c_penalty) {
      if (yf > 1.0 + tol) return false;
    } else {
      if (std::abs(yf - 1.0) > tol) return false;
    }
  }
  return true;
}

struct Blobs {
  Eigen::MatrixXd X;
  std::vector<int> y;
};

Blobs two_blobs(int n_per, double separation, double spread, rng_engine& rng, int dim = 2) {
  Blobs b;
  b.X.resize(2 * n_per, dim);
  gaussian_sampler gauss;
  for (int i = 0; i < 2 * n_per; ++i) {
    const int label = i < n_per ? 1 : -1;
    b.y.push_back(label);
    for (int j = 0; j < dim; ++j) {
      b.X(i, j) = spread * gauss(rng) + (j == 0 ? label * separation / 2 : 0.0);
    }
  }
  return b;
}

}  // namespace

TEST_SUITE("svm") {

TEST_CASE("rbf kernel closed forms") {
  Eigen::VectorXd x(2), y(2);
  x << 1.0, 2.0;
  y = x;
  CHECK(rbf_kernel(x, y, 1.5) == doctest::Approx(1.0));

  // |x-y|^2 = 2 sigma^2 -> exp(-1).
  const double sigma = 0.7;
  y << 1.0 + sigma * std::sqrt(2.0), 2.0;
  CHECK(rbf_kernel(x, y, sigma) == doctest::Approx(std::exp(-1.0)));

  // Monotone in sigma toward 1.
  double prev = 0.0;
  for (double s : {0.5, 1.0, 2.0, 4.0, 8.0, 100.0}) {
    const double k = rbf_kernel(x, y, s);
    CHECK(k > prev);
    CHECK(k <= 1.0);
    prev = k;
  }

  Eigen::VectorXd z(3);
  z.setZero();
  CHECK_THROWS_AS(rbf_kernel(x, z, 1.0), error);
}

TEST_CASE("gram matrix is positive semidefinite") {
  rng_engine rng(2026);
  gaussian_sampler gauss;
  for (int rep = 0; rep < 5; ++rep) {
    const int n = 10 + static_cast<int>(uniform_below(rng, 30));
    Eigen::MatrixXd X(n, 3);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < 3; ++j) X(i, j) = gauss(rng);
    }
    Eigen::MatrixXd gram(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        gram(i, j) = rbf_kernel(X.row(i), X.row(j), 1.3);
      }
    }
    const Eigen::MatrixXd sym = 0.5 * (gram + gram.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
    CHECK(eig.eigenvalues().minCoeff() > -1e-9);
  }
}

TEST_CASE("two symmetric points give a symmetric machine") {
  Eigen::MatrixXd X(2, 1);
  X << -1.0, 1.0;
  const std::vector<int> y{-1, 1};
  const BinarySvmModel model = smo_train(X, y, 10.0, {1.0}, 1e-3, 200);
  CHECK(model.converged);

  // Equal multipliers and a sign flip at the midpoint.
  REQUIRE(model.dual_coefs.size() == 2);
  CHECK(std::abs(model.dual_coefs(0)) ==
        doctest::Approx(std::abs(model.dual_coefs(1))).epsilon(1e-6));
  Eigen::VectorXd probe(1);
  probe << 0.4;
  CHECK(svm_predict(model, probe) == 1);
  probe << -0.4;
  CHECK(svm_predict(model, probe) == -1);
  probe << 0.0;
  CHECK(svm_decision(model, probe) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("XOR is separated by the RBF machine") {
  Eigen::MatrixXd X(4, 2);
  X << 0, 0, 1, 1, 0, 1, 1, 0;
  const std::vector<int> y{-1, -1, 1, 1};
  const BinarySvmModel model = smo_train(X, y, 100.0, {0.5}, 1e-3, 500);
  CHECK(model.converged);
  for (int i = 0; i < 4; ++i) {
    CHECK(svm_predict(model, X.row(i)) == y[static_cast<std::size_t>(i)]);
  }
  CHECK(kkt_holds(model, X, y, 1e-3));
}

TEST_CASE("identical points with opposite labels saturate at C") {
  Eigen::MatrixXd X(2, 2);
  X << 3.0, -1.0, 3.0, -1.0;
  const std::vector<int> y{1, -1};
  const BinarySvmModel model = smo_train(X, y, 1.0, {1.0}, 1e-3, 200);

  REQUIRE(model.dual_coefs.size() == 2);
  CHECK(std::abs(model.dual_coefs(0)) == doctest::Approx(1.0));
  CHECK(std::abs(model.dual_coefs(1)) == doctest::Approx(1.0));
  // Exactly one of the two training points is wrong.
  int errors = 0;
  for (int i = 0; i < 2; ++i) {
    if (svm_predict(model, X.row(i)) != y[static_cast<std::size_t>(i)]) ++errors;
  }
  CHECK(errors == 1);
  CHECK(kkt_holds(model, X, y, 1e-3));
}

TEST_CASE("KKT conditions hold on random problems") {
  rng_engine rng(20260810);
  for (int rep = 0; rep < 8; ++rep) {
    const int n_per = 10 + static_cast<int>(uniform_below(rng, 50));
    const double separation = uniform(rng, 0.5, 4.0);
    Blobs blobs = two_blobs(n_per, separation, 1.0, rng, 3);
    const double sigma = median_pairwise_distance(blobs.X);
    const double c = (rep % 3 == 0) ? 0.5 : (rep % 3 == 1 ? 1.0 : 10.0);
    SvmTrainStats stats;
    const BinarySvmModel model =
        smo_train(blobs.X, blobs.y, c, {sigma}, 1e-3, 1000, 7 + rep, &stats);
    CHECK(stats.converged);
    CHECK(kkt_holds(model, blobs.X, blobs.y, 1e-3));
    CHECK(std::abs(model.dual_coefs.sum()) <= 1e-6 * c);
  }
}

TEST_CASE("dual objective is nondecreasing across sweeps") {
  rng_engine rng(555);
  Blobs blobs = two_blobs(40, 1.0, 1.2, rng);
  SvmTrainStats stats;
  smo_train(blobs.X, blobs.y, 1.0, {median_pairwise_distance(blobs.X)}, 1e-3, 500,
            0, &stats);
  REQUIRE(stats.objective_per_sweep.size() >= 2);
  for (std::size_t i = 1; i < stats.objective_per_sweep.size(); ++i) {
    CHECK(stats.objective_per_sweep[i] >=
          stats.objective_per_sweep[i - 1] -
              1e-9 * (1.0 + std::abs(stats.objective_per_sweep[i - 1])));
  }
}

TEST_CASE("row permutation does not change predictions") {
  rng_engine rng(31337);
  Blobs blobs = two_blobs(30, 2.0, 1.0, rng);
  const double sigma = median_pairwise_distance(blobs.X);
  const BinarySvmModel base = smo_train(blobs.X, blobs.y, 1.0, {sigma}, 1e-3, 500, 5);

  std::vector<std::size_t> perm(blobs.y.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  deterministic_shuffle(perm, rng);
  Eigen::MatrixXd Xp(blobs.X.rows(), blobs.X.cols());
  std::vector<int> yp(blobs.y.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    Xp.row(static_cast<Eigen::Index>(i)) = blobs.X.row(static_cast<Eigen::Index>(perm[i]));
    yp[i] = blobs.y[perm[i]];
  }
  const BinarySvmModel permuted = smo_train(Xp, yp, 1.0, {sigma}, 1e-3, 500, 5);

  gaussian_sampler gauss;
  for (int probe = 0; probe < 50; ++probe) {
    Eigen::VectorXd x(2);
    x << 3.0 * gauss(rng), 3.0 * gauss(rng);
    CHECK(svm_predict(base, x) == svm_predict(permuted, x));
  }
}

TEST_CASE("decision respects the Lipschitz bound of the RBF") {
  rng_engine rng(404);
  Blobs blobs = two_blobs(25, 1.5, 1.0, rng);
  const double sigma = 1.1;
  const BinarySvmModel model = smo_train(blobs.X, blobs.y, 2.0, {sigma}, 1e-3, 500);
  const double lipschitz =
      model.dual_coefs.cwiseAbs().sum() / (sigma * std::exp(0.5));

  gaussian_sampler gauss;
  for (int rep = 0; rep < 30; ++rep) {
    Eigen::VectorXd a(2), b(2);
    a << gauss(rng), gauss(rng);
    b = a;
    b(0) += 0.05 * gauss(rng);
    b(1) += 0.05 * gauss(rng);
    const double df = std::abs(svm_decision(model, a) - svm_decision(model, b));
    CHECK(df <= lipschitz * (a - b).norm() + 1e-12);
  }
}

TEST_CASE("degenerate model evaluates to its bias") {
  BinarySvmModel model;
  model.kernel.sigma = 1.0;
  model.c_penalty = 1.0;
  model.bias = -0.75;
  model.support_vectors.resize(0, 2);
  model.dual_coefs.resize(0);
  Eigen::VectorXd x(2);
  x << 1.0, 2.0;
  CHECK(svm_decision(model, x) == doctest::Approx(-0.75));
  CHECK(svm_predict(model, x) == -1);

  model.bias = 0.0;
  CHECK(svm_predict(model, x) == 1);  // documented tie rule
}

TEST_CASE("training rejects degenerate inputs") {
  Eigen::MatrixXd X(2, 1);
  X << 0.0, 1.0;
  CHECK_THROWS_AS(smo_train(X, {1, 1}, 1.0, {1.0}, 1e-3, 100), error);
  CHECK_THROWS_AS(smo_train(X, {1, 0}, 1.0, {1.0}, 1e-3, 100), error);
  CHECK_THROWS_AS(smo_train(X, {1}, 1.0, {1.0}, 1e-3, 100), error);
  CHECK_THROWS_AS(smo_train(X, {1, -1}, -1.0, {1.0}, 1e-3, 100), error);
  CHECK_THROWS_AS(smo_train(X, {1, -1}, 1.0, {0.0}, 1e-3, 100), error);
}

TEST_CASE("median heuristic is scale-adaptive and guards duplicates") {
  Eigen::MatrixXd X(3, 1);
  X << 0.0, 1.0, 2.0;
  CHECK(median_pairwise_distance(X) == doctest::Approx(1.0));
  Eigen::MatrixXd scaled = 10.0 * X;
  CHECK(median_pairwise_distance(scaled) == doctest::Approx(10.0));
  Eigen::MatrixXd dup(2, 1);
  dup << 3.0, 3.0;
  CHECK(median_pairwise_distance(dup) == 1.0);
}

}  // TEST_SUITE
