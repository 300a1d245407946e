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

#include <doctest.h>

#include <algorithm>
#include <set>

#include "vowelbci/errors.hpp"
#include "vowelbci/random.hpp"

using namespace vowelbci;

namespace {

/// Full metadata grid: n_subjects x 5 vowels x 10 trials, blob values.
std::vector<FeatureVector> grid_features(int n_subjects, double spread,
                                         rng_engine& rng) {
  const double centers[5][2] = {{0, 0}, {8, 0}, {0, 8}, {8, 8}, {4, 16}};
  gaussian_sampler gauss;
  std::vector<FeatureVector> features;
  for (int subject = 1; subject <= n_subjects; ++subject) {
    for (int vowel = 1; vowel <= 5; ++vowel) {
      for (int trial = 1; trial <= 10; ++trial) {
        FeatureVector f;
        f.subject_id = subject;
        f.label = vowel;
        f.trial_index = trial;
        f.values.resize(2);
        f.values << centers[vowel - 1][0] + spread * gauss(rng),
            centers[vowel - 1][1] + spread * gauss(rng);
        features.push_back(std::move(f));
      }
    }
  }
  return features;
}

DtSvmModel blob_model(const std::vector<FeatureVector>& train) {
  DtSvmConfig config;
  config.c_penalty = 10.0;
  return train_dtsvm(train, config);
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("default split sizes on the full corpus shape") {
  rng_engine rng(1);
  const auto features = grid_features(20, 0.5, rng);
  REQUIRE(features.size() == 1000);

  SplitSpec spec;
  spec.n_prime = 100;
  const SplitIndices split = split_paper_protocol(features, spec);
  CHECK(split.train.size() == 700);
  CHECK(split.test.size() == 100);
  CHECK(split.test_like.size() == 200);

  // The n' picks stay inside the training set.
  const std::set<std::size_t> train_set(split.train.begin(), split.train.end());
  for (std::size_t i = 100; i < split.test_like.size(); ++i) {
    CHECK(train_set.count(split.test_like[i]) == 1);
  }
  // Test vectors are exactly the trial-4 vectors.
  for (std::size_t i : split.test) CHECK(features[i].trial_index == 4);
  for (std::size_t i : split.train) {
    CHECK(features[i].trial_index != 4);
    CHECK(features[i].trial_index != 1);
    CHECK(features[i].trial_index != 10);
  }
}

TEST_CASE("n_prime 0 degenerates to the pure test set") {
  rng_engine rng(2);
  const auto features = grid_features(4, 0.5, rng);
  SplitSpec spec;
  spec.n_prime = 0;
  const SplitIndices split = split_paper_protocol(features, spec);
  CHECK(split.test_like == split.test);
}

TEST_CASE("same seed, same membership; different seed, different order") {
  rng_engine rng(3);
  const auto features = grid_features(6, 0.5, rng);
  SplitSpec spec;
  spec.n_prime = 20;
  spec.shuffle_seed = 42;
  const SplitIndices a = split_paper_protocol(features, spec);
  const SplitIndices b = split_paper_protocol(features, spec);
  CHECK(a.test_like == b.test_like);

  spec.shuffle_seed = 43;
  const SplitIndices c = split_paper_protocol(features, spec);
  CHECK(a.test_like != c.test_like);
}

TEST_CASE("missing trials and bad specs are rejected") {
  rng_engine rng(4);
  auto features = grid_features(2, 0.5, rng);
  features.pop_back();  // drop one trial
  CHECK_THROWS_WITH_AS(split_paper_protocol(features, SplitSpec{}),
                       doctest::Contains("missing trial"), error);

  const auto full = grid_features(2, 0.5, rng);
  SplitSpec bad;
  bad.test_trial = 1;  // collides with dropped {1, 10}
  CHECK_THROWS_AS(split_paper_protocol(full, bad), error);

  SplitSpec too_many;
  too_many.n_prime = 1000;
  CHECK_THROWS_AS(split_paper_protocol(full, too_many), error);
}

TEST_CASE("perfect predictor scores zero and an identity confusion") {
  rng_engine rng(5);
  const auto features = grid_features(6, 0.3, rng);
  SplitSpec spec;
  spec.n_prime = 30;
  const SplitIndices split = split_paper_protocol(features, spec);
  const DtSvmModel model = blob_model(select_items(features, split.train));

  const auto s_star = select_items(features, split.test_like);
  CHECK(test_like_error(model, s_star) == 0.0);

  const EvalReport report = confusion_matrix(model, s_star);
  CHECK(report.overall_error == 0.0);
  for (int i = 0; i < 5; ++i) {
    CHECK(report.confusion(i, i) == doctest::Approx(1.0));
    CHECK(report.per_class_accuracy(i) == doctest::Approx(1.0));
    CHECK(report.per_class_error(i) == doctest::Approx(0.0));
  }
}

TEST_CASE("confusion rows sum to one and the weighted diagonal matches") {
  rng_engine rng(6);
  const auto features = grid_features(6, 3.5, rng);  // overlapping blobs
  SplitSpec spec;
  spec.n_prime = 30;
  const SplitIndices split = split_paper_protocol(features, spec);
  const DtSvmModel model = blob_model(select_items(features, split.train));
  const auto s_star = select_items(features, split.test_like);

  const EvalReport report = confusion_matrix(model, s_star);
  for (int i = 0; i < 5; ++i) {
    if (report.per_class_count(i) == 0) continue;
    CHECK(report.confusion.row(i).sum() == doctest::Approx(1.0).epsilon(1e-9));
  }

  // overall_error == test_like_error exactly (same counting).
  CHECK(report.overall_error == test_like_error(model, s_star));

  // overall_error == 1 - sum_i w_i M_ii with w_i the class share.
  double weighted = 0.0;
  for (int i = 0; i < 5; ++i) {
    weighted += (static_cast<double>(report.per_class_count(i)) /
                 static_cast<double>(s_star.size())) *
                report.confusion(i, i);
  }
  CHECK(report.overall_error == doctest::Approx(1.0 - weighted).epsilon(1e-12));
}

TEST_CASE("error is permutation invariant") {
  rng_engine rng(7);
  const auto features = grid_features(4, 3.0, rng);
  SplitSpec spec;
  spec.n_prime = 10;
  const SplitIndices split = split_paper_protocol(features, spec);
  const DtSvmModel model = blob_model(select_items(features, split.train));
  auto s_star = select_items(features, split.test_like);

  const double base = test_like_error(model, s_star);
  deterministic_shuffle(s_star, rng);
  CHECK(test_like_error(model, s_star) == base);
}

TEST_CASE("test-like error lies between pure test and resubstitution parts") {
  rng_engine rng(8);
  const auto features = grid_features(6, 3.0, rng);
  SplitSpec spec;
  spec.n_prime = 50;
  const SplitIndices split = split_paper_protocol(features, spec);
  const DtSvmModel model = blob_model(select_items(features, split.train));

  const auto s_star = select_items(features, split.test_like);
  const auto pure_test = select_items(features, split.test);
  std::vector<FeatureVector> resub_part(s_star.begin() + split.test.size(),
                                        s_star.end());

  const double pooled = test_like_error(model, s_star);
  const double test_err = test_like_error(model, pure_test);
  const double resub_err = test_like_error(model, resub_part);
  CHECK(pooled >= std::min(test_err, resub_err) - 1e-12);
  CHECK(pooled <= std::max(test_err, resub_err) + 1e-12);
  // And the pooled value is the exact sample-weighted mixture.
  const double m = static_cast<double>(split.test.size());
  const double np = static_cast<double>(spec.n_prime);
  CHECK(pooled == doctest::Approx((m * test_err + np * resub_err) / (m + np))
                      .epsilon(1e-12));
}

TEST_CASE("constant wrong predictor errs on everything") {
  rng_engine rng(9);
  const auto features = grid_features(4, 0.3, rng);
  SplitSpec spec;
  spec.n_prime = 0;
  const SplitIndices split = split_paper_protocol(features, spec);
  const DtSvmModel model = blob_model(select_items(features, split.train));

  // Restrict S* to a single class and relabel it to something the model
  // cannot answer for these values.
  std::vector<FeatureVector> s_star;
  for (const auto& f : select_items(features, split.test)) {
    if (f.label == 1) {
      FeatureVector g = f;
      g.label = 2;
      s_star.push_back(std::move(g));
    }
  }
  REQUIRE(!s_star.empty());
  CHECK(test_like_error(model, s_star) == 1.0);
}

}  // TEST_SUITE
