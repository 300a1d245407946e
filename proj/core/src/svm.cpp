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

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "vowelbci/errors.hpp"
#include "vowelbci/random.hpp"

namespace vowelbci {

double rbf_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double sigma) {
  if (x.size() != y.size()) {
    fail(errc::data, "kernel dimension mismatch: " + std::to_string(x.size()) +
                         " vs " + std::to_string(y.size()));
  }
  if (!(sigma > 0)) fail(errc::config, "RBF sigma must be positive");
  return std::exp(-(x - y).squaredNorm() / (2.0 * sigma * sigma));
}

double median_pairwise_distance(const Eigen::MatrixXd& rows) {
  const Eigen::Index n = rows.rows();
  if (n < 2) return 1.0;
  std::vector<double> distances;
  distances.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      distances.push_back((rows.row(i) - rows.row(j)).norm());
    }
  }
  const std::size_t mid = distances.size() / 2;
  std::nth_element(distances.begin(), distances.begin() + static_cast<std::ptrdiff_t>(mid),
                   distances.end());
  const double median = distances[mid];
  return median > 0.0 ? median : 1.0;
}

namespace {

// Full Gram cache below this size; all training sets in this project fit.
constexpr Eigen::Index kGramCacheLimit = 2000;

class SmoSolver {
 public:
  SmoSolver(const Eigen::MatrixXd& X, const std::vector<int>& y, double c,
            double sigma, double tol, std::uint64_t seed)
      : X_(X),
        y_(y),
        n_(X.rows()),
        c_(c),
        sigma_(sigma),
        tol_(tol),
        rng_(seed),
        alpha_(Eigen::VectorXd::Zero(X.rows())),
        errors_(Eigen::VectorXd::Zero(X.rows())) {
    if (n_ <= kGramCacheLimit) {
      gram_.resize(n_, n_);
      for (Eigen::Index i = 0; i < n_; ++i) {
        gram_(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n_; ++j) {
          const double k = std::exp(-(X_.row(i) - X_.row(j)).squaredNorm() /
                                    (2.0 * sigma_ * sigma_));
          gram_(i, j) = k;
          gram_(j, i) = k;
        }
      }
    }
    refresh_errors();
  }

  bool run(int max_passes, std::vector<double>* objective_trace) {
    bool examine_all = true;
    for (int sweep = 0; sweep < max_passes; ++sweep) {
      if (examine_all) refresh_errors();
      int changed = 0;
      if (examine_all) {
        for (Eigen::Index i = 0; i < n_; ++i) changed += examine(i);
      } else {
        for (Eigen::Index i = 0; i < n_; ++i) {
          if (is_free(alpha_(i))) changed += examine(i);
        }
      }
      if (objective_trace && gram_.size() > 0) {
        objective_trace->push_back(dual_objective());
#ifndef NDEBUG
        const std::size_t m = objective_trace->size();
        if (m >= 2) {
          assert((*objective_trace)[m - 1] >=
                 (*objective_trace)[m - 2] - 1e-9 * (1.0 + std::abs((*objective_trace)[m - 2])));
        }
#endif
      }
      if (examine_all) {
        if (changed == 0) return kkt_satisfied();
        examine_all = false;
      } else if (changed == 0) {
        examine_all = true;
      }
    }
    return kkt_satisfied();
  }

  const Eigen::VectorXd& alpha() const { return alpha_; }
  double bias() const { return bias_; }

  /// Recompute the bias from the converged multipliers: mean over free
  /// vectors of y_i - g(x_i), or the midpoint of the feasible interval when
  /// no vector is free.
  void finalize_bias() {
    double sum = 0.0;
    int free_count = 0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      if (!is_free(alpha_(i))) continue;
      sum += y_[static_cast<std::size_t>(i)] - margin_without_bias(i);
      ++free_count;
    }
    if (free_count > 0) {
      bias_ = sum / free_count;
      refresh_errors();
      return;
    }
    // No free vectors: take the midpoint of the feasible interval.
    // alpha=0 wants y(g+b) >= 1; alpha=C wants y(g+b) <= 1.
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n_; ++i) {
      const double g = margin_without_bias(i);
      const int yi = y_[static_cast<std::size_t>(i)];
      const bool at_zero = alpha_(i) <= 0.0;
      if (at_zero) {
        // y_i (g + b) >= 1
        if (yi > 0) lower = std::max(lower, 1.0 - g);
        else upper = std::min(upper, -1.0 - g);
      } else {
        // y_i (g + b) <= 1
        if (yi > 0) upper = std::min(upper, 1.0 - g);
        else lower = std::max(lower, -1.0 - g);
      }
    }
    if (std::isfinite(lower) && std::isfinite(upper)) {
      bias_ = 0.5 * (lower + upper);
    } else if (std::isfinite(lower)) {
      bias_ = lower;
    } else if (std::isfinite(upper)) {
      bias_ = upper;
    }
    refresh_errors();
  }

  bool kkt_satisfied() {
    refresh_errors();
    for (Eigen::Index i = 0; i < n_; ++i) {
      const double yf = y_[static_cast<std::size_t>(i)] *
                        (errors_(i) + y_[static_cast<std::size_t>(i)]);
      if (alpha_(i) <= 0.0) {
        if (yf < 1.0 - tol_) return false;
      } else if (alpha_(i) >= c_) {
        if (yf > 1.0 + tol_) return false;
      } else {
        if (std::abs(yf - 1.0) > tol_) return false;
      }
    }
    return true;
  }

  double dual_objective() const {
    double obj = alpha_.sum();
    double quad = 0.0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      if (alpha_(i) == 0.0) continue;
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (alpha_(j) == 0.0) continue;
        quad += alpha_(i) * alpha_(j) * y_[static_cast<std::size_t>(i)] *
                y_[static_cast<std::size_t>(j)] * gram_(i, j);
      }
    }
    return obj - 0.5 * quad;
  }

 private:
  bool is_free(double a) const { return a > 0.0 && a < c_; }

  double kernel_at(Eigen::Index i, Eigen::Index j) const {
    if (gram_.size() > 0) return gram_(i, j);
    return std::exp(-(X_.row(i) - X_.row(j)).squaredNorm() / (2.0 * sigma_ * sigma_));
  }

  double margin_without_bias(Eigen::Index i) const {
    double g = 0.0;
    for (Eigen::Index j = 0; j < n_; ++j) {
      if (alpha_(j) == 0.0) continue;
      g += alpha_(j) * y_[static_cast<std::size_t>(j)] * kernel_at(j, i);
    }
    return g;
  }

  void refresh_errors() {
    for (Eigen::Index i = 0; i < n_; ++i) {
      errors_(i) = margin_without_bias(i) + bias_ -
                   y_[static_cast<std::size_t>(i)];
    }
  }

  int examine(Eigen::Index i2) {
    const int y2 = y_[static_cast<std::size_t>(i2)];
    const double a2 = alpha_(i2);
    const double e2 = errors_(i2);
    const double r2 = e2 * y2;
    const bool violates = (r2 < -tol_ && a2 < c_) || (r2 > tol_ && a2 > 0.0);
    if (!violates) return 0;

    // Heuristic 1: the free vector with the largest |E1 - E2|.
    Eigen::Index best = -1;
    double best_gap = -1.0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      if (!is_free(alpha_(i))) continue;
      const double gap = std::abs(errors_(i) - e2);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best >= 0 && take_step(best, i2)) return 1;

    // Heuristic 2: all free vectors, from a random start.
    const Eigen::Index offset =
        static_cast<Eigen::Index>(uniform_below(rng_, static_cast<std::uint64_t>(n_)));
    for (Eigen::Index k = 0; k < n_; ++k) {
      const Eigen::Index i = (k + offset) % n_;
      if (!is_free(alpha_(i))) continue;
      if (take_step(i, i2)) return 1;
    }
    // Heuristic 3: everything, from a fresh random start.
    const Eigen::Index offset2 =
        static_cast<Eigen::Index>(uniform_below(rng_, static_cast<std::uint64_t>(n_)));
    for (Eigen::Index k = 0; k < n_; ++k) {
      const Eigen::Index i = (k + offset2) % n_;
      if (take_step(i, i2)) return 1;
    }
    return 0;
  }

  bool take_step(Eigen::Index i1, Eigen::Index i2) {
    if (i1 == i2) return false;
    const int y1 = y_[static_cast<std::size_t>(i1)];
    const int y2 = y_[static_cast<std::size_t>(i2)];
    const double a1_old = alpha_(i1);
    const double a2_old = alpha_(i2);
    const double e1 = errors_(i1);
    const double e2 = errors_(i2);
    const double s = y1 * y2;

    double lo, hi;
    if (y1 != y2) {
      lo = std::max(0.0, a2_old - a1_old);
      hi = std::min(c_, c_ + a2_old - a1_old);
    } else {
      lo = std::max(0.0, a1_old + a2_old - c_);
      hi = std::min(c_, a1_old + a2_old);
    }
    if (lo >= hi) return false;

    const double k11 = kernel_at(i1, i1);
    const double k12 = kernel_at(i1, i2);
    const double k22 = kernel_at(i2, i2);
    const double eta = k11 + k22 - 2.0 * k12;

    double a2_new;
    if (eta > 0.0) {
      a2_new = a2_old + y2 * (e1 - e2) / eta;
      a2_new = std::clamp(a2_new, lo, hi);
    } else {
      // Degenerate curvature: pick the better endpoint of the feasible
      // segment by its objective value (minimization form).
      const double f1 = y1 * (e1 - bias_) - a1_old * k11 - s * a2_old * k12;
      const double f2 = y2 * (e2 - bias_) - s * a1_old * k12 - a2_old * k22;
      const double l1 = a1_old + s * (a2_old - lo);
      const double h1 = a1_old + s * (a2_old - hi);
      const double obj_lo = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 +
                            0.5 * lo * lo * k22 + s * lo * l1 * k12;
      const double obj_hi = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 +
                            0.5 * hi * hi * k22 + s * hi * h1 * k12;
      if (obj_lo < obj_hi - 1e-12) {
        a2_new = lo;
      } else if (obj_hi < obj_lo - 1e-12) {
        a2_new = hi;
      } else {
        return false;
      }
    }

    if (std::abs(a2_new - a2_old) < 1e-10 * (a2_new + a2_old + 1e-10)) {
      return false;
    }
    const double a1_new = a1_old + s * (a2_old - a2_new);

    const double d1 = y1 * (a1_new - a1_old);
    const double d2 = y2 * (a2_new - a2_old);
    const double b1 = bias_ - e1 - d1 * k11 - d2 * k12;
    const double b2 = bias_ - e2 - d1 * k12 - d2 * k22;
    const double bias_old = bias_;
    if (a1_new > 0.0 && a1_new < c_) {
      bias_ = b1;
    } else if (a2_new > 0.0 && a2_new < c_) {
      bias_ = b2;
    } else {
      bias_ = 0.5 * (b1 + b2);
    }

    alpha_(i1) = a1_new;
    alpha_(i2) = a2_new;
    const double db = bias_ - bias_old;
    if (gram_.size() > 0) {
      errors_ += d1 * gram_.col(i1) + d2 * gram_.col(i2);
      errors_.array() += db;
    } else {
      for (Eigen::Index j = 0; j < n_; ++j) {
        errors_(j) += d1 * kernel_at(i1, j) + d2 * kernel_at(i2, j) + db;
      }
    }
    return true;
  }

  const Eigen::MatrixXd& X_;
  const std::vector<int>& y_;
  Eigen::Index n_;
  double c_;
  double sigma_;
  double tol_;
  rng_engine rng_;
  Eigen::MatrixXd gram_;
  Eigen::VectorXd alpha_;
  Eigen::VectorXd errors_;  // f(x_i) - y_i
  double bias_ = 0.0;
};

}  // namespace

BinarySvmModel smo_train(const Eigen::MatrixXd& X, const std::vector<int>& y,
                         double c_penalty, const KernelSpec& kernel, double tol,
                         int max_passes, std::uint64_t seed, SvmTrainStats* stats) {
  const Eigen::Index n = X.rows();
  if (n < 2) fail(errc::data, "SVM training needs at least 2 rows");
  if (y.size() != static_cast<std::size_t>(n)) {
    fail(errc::data, "label count does not match row count");
  }
  bool has_pos = false, has_neg = false;
  for (int label : y) {
    if (label == 1) has_pos = true;
    else if (label == -1) has_neg = true;
    else fail(errc::data, "labels must be +1 or -1");
  }
  if (!has_pos || !has_neg) fail(errc::data, "both classes must be present");
  if (!(c_penalty > 0)) fail(errc::config, "C must be positive");
  if (!(kernel.sigma > 0)) fail(errc::config, "RBF sigma must be positive");
  if (!(tol > 0)) fail(errc::config, "tolerance must be positive");
  if (max_passes < 1) fail(errc::config, "max_passes must be positive");

  SmoSolver solver(X, y, c_penalty, kernel.sigma, tol, seed);
  std::vector<double> trace;
  solver.run(max_passes, &trace);
  solver.finalize_bias();
  const bool converged = solver.kkt_satisfied();

  if (stats) {
    stats->sweeps = static_cast<int>(trace.size());
    stats->converged = converged;
    stats->objective_per_sweep = std::move(trace);
  }

  const Eigen::VectorXd& alpha = solver.alpha();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (alpha(i) > 0.0) keep.push_back(i);
  }

  BinarySvmModel model;
  model.kernel = kernel;
  model.c_penalty = c_penalty;
  model.bias = solver.bias();
  model.converged = converged;
  model.support_vectors.resize(static_cast<Eigen::Index>(keep.size()), X.cols());
  model.dual_coefs.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    model.support_vectors.row(static_cast<Eigen::Index>(k)) = X.row(keep[k]);
    model.dual_coefs(static_cast<Eigen::Index>(k)) =
        alpha(keep[k]) * y[static_cast<std::size_t>(keep[k])];
  }
  return model;
}

BinarySvmModel smo_train(const Eigen::MatrixXd& X, const std::vector<int>& y,
                         const KernelSpec& kernel, const SvmTrainConfig& config,
                         SvmTrainStats* stats) {
  return smo_train(X, y, config.c_penalty, kernel, config.tol, config.max_passes,
                   config.seed, stats);
}

double svm_decision(const BinarySvmModel& model, const Eigen::VectorXd& x) {
  if (model.support_vectors.rows() > 0 && x.size() != model.support_vectors.cols()) {
    fail(errc::data, "decision dimension mismatch: input has " +
                         std::to_string(x.size()) + " entries, model expects " +
                         std::to_string(model.support_vectors.cols()));
  }
  double f = model.bias;
  const double denom = 2.0 * model.kernel.sigma * model.kernel.sigma;
  for (Eigen::Index i = 0; i < model.support_vectors.rows(); ++i) {
    f += model.dual_coefs(i) *
         std::exp(-(model.support_vectors.row(i).transpose() - x).squaredNorm() / denom);
  }
  return f;
}

int svm_predict(const BinarySvmModel& model, const Eigen::VectorXd& x) {
  return svm_decision(model, x) >= 0.0 ? 1 : -1;
}

}  // namespace vowelbci
