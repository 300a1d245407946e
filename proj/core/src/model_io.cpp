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

#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vowelbci/errors.hpp"

namespace vowelbci {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      fail(errc::parse, "ragged matrix in model file");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
  }
  return m;
}

json svm_to_json(const BinarySvmModel& model) {
  return {{"support_vectors", matrix_to_json(model.support_vectors)},
          {"dual_coefs", vector_to_json(model.dual_coefs)},
          {"bias", model.bias},
          {"sigma", model.kernel.sigma},
          {"c_penalty", model.c_penalty},
          {"converged", model.converged}};
}

BinarySvmModel svm_from_json(const json& j) {
  BinarySvmModel model;
  model.support_vectors = matrix_from_json(j.at("support_vectors"));
  model.dual_coefs = vector_from_json(j.at("dual_coefs"));
  model.bias = j.at("bias").get<double>();
  model.kernel.sigma = j.at("sigma").get<double>();
  model.c_penalty = j.at("c_penalty").get<double>();
  model.converged = j.at("converged").get<bool>();
  if (model.dual_coefs.size() != model.support_vectors.rows()) {
    fail(errc::parse, "dual coefficient count does not match support vectors");
  }
  return model;
}

json pca_to_json(const PcaModel& model) {
  return {{"mean", vector_to_json(model.mean)},
          {"components", matrix_to_json(model.components)},
          {"explained_variance_ratio", vector_to_json(model.explained_variance_ratio)}};
}

PcaModel pca_from_json(const json& j) {
  PcaModel model;
  model.mean = vector_from_json(j.at("mean"));
  model.components = matrix_from_json(j.at("components"));
  model.explained_variance_ratio = vector_from_json(j.at("explained_variance_ratio"));
  if (model.components.cols() != model.mean.size()) {
    fail(errc::parse, "PCA component width does not match mean dimension");
  }
  return model;
}

}  // namespace

void save_model(const std::filesystem::path& path, const TrainedModel& model) {
  json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "vowelbci-model";
  j["metric"] = metric_name(model.metric);
  j["seed"] = model.seed;
  j["svm"] = {{"c", model.svm_c},
              {"tol", model.svm_tol},
              {"sigma_config", model.svm_sigma_config
                                   ? json(*model.svm_sigma_config)
                                   : json("median")}};
  j["preprocessing"] = {{"bandpass_low_hz", model.bandpass.low_cut_hz},
                        {"bandpass_high_hz", model.bandpass.high_cut_hz},
                        {"bandpass_order", model.bandpass.order},
                        {"sample_rate_hz", model.bandpass.sample_rate_hz},
                        {"normalization", "zscore_per_trial_per_channel"}};

  json merges = json::array();
  for (const DendrogramMerge& merge : model.dtsvm.dendrogram.merges) {
    merges.push_back({{"group_a", merge.group_a}, {"group_b", merge.group_b}});
  }
  j["dendrogram"] = {{"n_classes", model.dtsvm.dendrogram.n_classes},
                     {"merges", std::move(merges)}};

  json classifiers = json::array();
  for (const BinarySvmModel& svm : model.dtsvm.classifiers) {
    classifiers.push_back(svm_to_json(svm));
  }
  j["classifiers"] = std::move(classifiers);

  json pca = json::array();
  for (const PcaModel& p : model.dtsvm.pca_models) pca.push_back(pca_to_json(p));
  j["pca_models"] = std::move(pca);

  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(errc::io, "cannot write " + tmp.string());
    out << j.dump() << '\n';
    if (!out) fail(errc::io, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(errc::io, "cannot rename " + tmp.string() + " to " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io, "cannot open model file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(errc::parse, "model file " + path.string() + ": " + e.what());
  }

  try {
    if (j.at("kind").get<std::string>() != "vowelbci-model") {
      fail(errc::parse, path.string() + " is not a model file");
    }
    TrainedModel model;
    model.format_version = j.at("format_version").get<int>();
    if (model.format_version != kFormatVersion) {
      fail(errc::model, "unsupported model format version " +
                            std::to_string(model.format_version));
    }
    model.metric = parse_metric(j.at("metric").get<std::string>());
    model.seed = j.at("seed").get<std::uint64_t>();
    const json& svm = j.at("svm");
    model.svm_c = svm.at("c").get<double>();
    model.svm_tol = svm.at("tol").get<double>();
    if (svm.at("sigma_config").is_string()) {
      model.svm_sigma_config.reset();
    } else {
      model.svm_sigma_config = svm.at("sigma_config").get<double>();
    }
    const json& pre = j.at("preprocessing");
    model.bandpass.low_cut_hz = pre.at("bandpass_low_hz").get<double>();
    model.bandpass.high_cut_hz = pre.at("bandpass_high_hz").get<double>();
    model.bandpass.order = pre.at("bandpass_order").get<int>();
    model.bandpass.sample_rate_hz = pre.at("sample_rate_hz").get<double>();

    const json& dendro = j.at("dendrogram");
    model.dtsvm.dendrogram.n_classes = dendro.at("n_classes").get<int>();
    for (const json& merge : dendro.at("merges")) {
      DendrogramMerge m;
      m.group_a = merge.at("group_a").get<std::vector<int>>();
      m.group_b = merge.at("group_b").get<std::vector<int>>();
      model.dtsvm.dendrogram.merges.push_back(std::move(m));
    }
    for (const json& classifier : j.at("classifiers")) {
      model.dtsvm.classifiers.push_back(svm_from_json(classifier));
    }
    for (const json& pca : j.at("pca_models")) {
      model.dtsvm.pca_models.push_back(pca_from_json(pca));
    }
    if (model.dtsvm.classifiers.size() != model.dtsvm.dendrogram.merges.size()) {
      fail(errc::parse, "classifier count does not match dendrogram merges");
    }
    return model;
  } catch (const json::exception& e) {
    fail(errc::parse, "model file " + path.string() + ": " + e.what());
  }
}

}  // namespace vowelbci
