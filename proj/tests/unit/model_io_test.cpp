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

#include "vowelbci/model_io.hpp"

#include <doctest.h>

#include <cstring>
#include <fstream>

#include "test_util.hpp"
#include "vowelbci/errors.hpp"
#include "vowelbci/random.hpp"

using namespace vowelbci;
using test::TempDir;

namespace {

TrainedModel small_trained_model() {
  rng_engine rng(606);
  gaussian_sampler gauss;
  std::vector<FeatureVector> features;
  const double centers[3][2] = {{0, 0}, {6, 0}, {0, 6}};
  int trial = 0;
  for (int cls = 1; cls <= 3; ++cls) {
    for (int i = 0; i < 12; ++i) {
      FeatureVector f;
      f.label = cls;
      f.subject_id = 1;
      f.trial_index = ++trial;
      f.values.resize(2);
      f.values << centers[cls - 1][0] + 0.8 * gauss(rng),
          centers[cls - 1][1] + 0.8 * gauss(rng);
      features.push_back(std::move(f));
    }
  }
  TrainedModel model;
  model.dtsvm = train_dtsvm(features, {});
  model.metric = DistanceMetric::euclidean;
  model.seed = 123;
  return model;
}

}  // namespace

TEST_SUITE("model_io") {

TEST_CASE("load(save(model)) reproduces decisions bit for bit") {
  TempDir dir("model");
  const TrainedModel model = small_trained_model();
  const auto path = dir / "model.json";
  save_model(path, model);
  const TrainedModel loaded = load_model(path);

  CHECK(loaded.metric == model.metric);
  CHECK(loaded.seed == model.seed);
  CHECK(loaded.bandpass.low_cut_hz == model.bandpass.low_cut_hz);
  REQUIRE(loaded.dtsvm.classifiers.size() == model.dtsvm.classifiers.size());
  REQUIRE(loaded.dtsvm.dendrogram.merges.size() ==
          model.dtsvm.dendrogram.merges.size());

  rng_engine rng(9);
  gaussian_sampler gauss;
  for (int rep = 0; rep < 200; ++rep) {
    Eigen::VectorXd x(2);
    x << 8.0 * gauss(rng), 8.0 * gauss(rng);
    const PredictTrace a = predict_dtsvm_traced(model.dtsvm, x);
    const PredictTrace b = predict_dtsvm_traced(loaded.dtsvm, x);
    CHECK(a.label == b.label);
    REQUIRE(a.steps.size() == b.steps.size());
    for (std::size_t s = 0; s < a.steps.size(); ++s) {
      // Bitwise equality of the decision values, not approximate.
      CHECK(std::memcmp(&a.steps[s].decision, &b.steps[s].decision,
                        sizeof(double)) == 0);
    }
  }

  // Second save of the loaded model is byte-identical.
  const auto path2 = dir / "model2.json";
  save_model(path2, loaded);
  CHECK(test::file_hash(path) == test::file_hash(path2));
}

TEST_CASE("rejects foreign and corrupt files") {
  TempDir dir("model");
  const auto path = dir / "not_model.json";
  {
    std::ofstream out(path);
    out << "{\"kind\": \"something-else\"}\n";
  }
  CHECK_THROWS_AS(load_model(path), error);

  const auto path2 = dir / "garbage.json";
  {
    std::ofstream out(path2);
    out << "{{{{\n";
  }
  CHECK_THROWS_AS(load_model(path2), error);
  CHECK_THROWS_AS(load_model(dir / "missing.json"), error);
}

}  // TEST_SUITE
