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

#include "vowelbci/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "io_util.hpp"
#include "vowelbci/errors.hpp"

namespace vowelbci {

namespace {

using nlohmann::json;

void check_sample_rate(const std::vector<Trial>& trials, double expected_hz,
                       const char* who) {
  for (const Trial& t : trials) {
    if (t.sample_rate_hz != expected_hz) {
      fail(errc::config, std::string(who) + ": corpus sample rate " +
                             detail::format_double(t.sample_rate_hz) +
                             " Hz does not match the configured " +
                             detail::format_double(expected_hz) + " Hz");
    }
  }
}

}  // namespace

TrainOutput train_pipeline(const PipelineConfig& config,
                           const std::vector<std::filesystem::path>& session_files) {
  const std::vector<Trial> trials = build_dataset_from_files(session_files);
  check_sample_rate(trials, config.bandpass.sample_rate_hz, "train");

  const SplitIndices split = split_paper_protocol(trials, config.split);
  const FilterCoefficients coeffs = design_bandpass(config.bandpass);

  const std::vector<Trial> train_trials =
      preprocess_trials(select_items(trials, split.train), coeffs);
  FeatureAssembly assembly = assemble_features(train_trials);

  TrainOutput out;
  out.train_size = split.train.size();
  out.explained_two_pc = assembly.explained_two_pc;
  out.low_variance_channels = assembly.low_variance_channels;

  out.model.bandpass = config.bandpass;
  out.model.metric = config.metric;
  out.model.svm_c = config.svm_c;
  out.model.svm_tol = config.svm_tol;
  out.model.svm_sigma_config = config.svm_sigma;
  out.model.seed = config.seed;
  out.model.dtsvm = train_dtsvm(assembly.features, config.dtsvm_config(), &out.svm_info);
  out.model.dtsvm.pca_models = std::move(assembly.channel_models);
  return out;
}

EvalOutput evaluate_pipeline(const TrainedModel& model, const PipelineConfig& config,
                             const std::vector<std::filesystem::path>& session_files) {
  if (model.dtsvm.classifiers.empty()) fail(errc::model, "model has no classifiers");
  const std::vector<Trial> trials = build_dataset_from_files(session_files);
  check_sample_rate(trials, model.bandpass.sample_rate_hz, "eval");

  const SplitIndices split = split_paper_protocol(trials, config.split);
  const FilterCoefficients coeffs = design_bandpass(model.bandpass);

  const std::vector<Trial> s_star_trials =
      preprocess_trials(select_items(trials, split.test_like), coeffs);
  const std::vector<FeatureVector> s_star =
      assemble_features(s_star_trials, model.dtsvm.pca_models);
  if (!s_star.empty() && s_star.front().values.size() != model.dtsvm.feature_dim()) {
    fail(errc::model, "model expects dimension " +
                          std::to_string(model.dtsvm.feature_dim()) +
                          " but features have " +
                          std::to_string(s_star.front().values.size()));
  }

  EvalOutput out;
  out.report = confusion_matrix(model.dtsvm, s_star);
  out.report.m = static_cast<int>(split.test.size());
  out.report.n_prime = config.split.n_prime;

  out.context.seed = config.seed;
  out.context.metric = metric_name(model.metric);
  out.context.svm_c = model.svm_c;
  for (const BinarySvmModel& svm : model.dtsvm.classifiers) {
    out.context.sigma_per_level.push_back(svm.kernel.sigma);
  }
  out.context.m = out.report.m;
  out.context.n_prime = out.report.n_prime;
  out.context.train_size = static_cast<int>(split.train.size());
  out.context.test_trial = config.split.test_trial;
  out.context.dropped_trials.assign(config.split.dropped_trials.begin(),
                                    config.split.dropped_trials.end());
  out.context.dendrogram = model.dtsvm.dendrogram.to_string();
  return out;
}

std::vector<TrialPrediction> predict_session(const TrainedModel& model,
                                             const std::filesystem::path& session_file,
                                             const std::set<int>& dropped_trials) {
  const Session session = parse_session(session_file);
  std::vector<Trial> trials = segment_trials(session);
  check_sample_rate(trials, model.bandpass.sample_rate_hz, "predict");

  trials.erase(std::remove_if(trials.begin(), trials.end(),
                              [&](const Trial& t) {
                                return dropped_trials.count(t.trial_index) > 0;
                              }),
               trials.end());
  if (trials.empty()) fail(errc::data, "all trials dropped");

  const FilterCoefficients coeffs = design_bandpass(model.bandpass);
  const std::vector<Trial> preprocessed = preprocess_trials(trials, coeffs);
  const std::vector<FeatureVector> features =
      assemble_features(preprocessed, model.dtsvm.pca_models);

  std::vector<TrialPrediction> out;
  out.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    TrialPrediction p;
    p.trial_index = features[i].trial_index;
    p.trace = predict_dtsvm_traced(model.dtsvm, features[i].values);
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s;
}

}  // namespace

std::string render_report_text(const EvalReport& report, const ReportContext& context) {
  const int k = static_cast<int>(report.confusion.rows());
  std::string s;
  s += "vowelbci evaluation report\n";
  s += "==========================\n";
  s += "seed = " + std::to_string(context.seed) + "\n";
  s += "metric = " + context.metric + "\n";
  s += "svm_c = " + detail::format_double(context.svm_c) + "\n";
  s += "svm_sigma_per_level =";
  for (double sigma : context.sigma_per_level) s += " " + detail::format_double(sigma);
  s += "\n";
  s += "dendrogram = " + context.dendrogram + "\n";
  s += "dropped_trials = " + join_ints(context.dropped_trials) + "\n";
  s += "test_trial = " + std::to_string(context.test_trial) + "\n";
  s += "train_size = " + std::to_string(context.train_size) + "\n";
  s += "m = " + std::to_string(context.m) + "\n";
  s += "n_prime = " + std::to_string(context.n_prime) + "\n";
  s += "s_star_size = " + std::to_string(context.m + context.n_prime) + "\n";
  if (context.n_prime > 0) {
    s += "note: S* pools the held-out trials with n_prime vectors that remain\n";
    s += "      in the training set, so this is a test-like error, not a pure\n";
    s += "      held-out error.\n";
  } else {
    s += "note: n_prime = 0, this is a pure held-out test error.\n";
  }
  s += "overall_error = " + fixed4(report.overall_error) + "\n";
  s += "overall_accuracy = " + fixed4(1.0 - report.overall_error) + "\n";

  s += "\nconfusion matrix (row = true class, column = predicted, row-normalized)\n";
  s += "      ";
  for (int j = 0; j < k; ++j) s += "  pred=" + std::to_string(j + 1);
  s += "\n";
  for (int i = 0; i < k; ++i) {
    s += "true=" + std::to_string(i + 1);
    for (int j = 0; j < k; ++j) s += "  " + fixed4(report.confusion(i, j));
    s += "\n";
  }

  s += "\nper-class\n";
  s += "class  count  accuracy  error\n";
  for (int i = 0; i < k; ++i) {
    s += std::to_string(i + 1) + "      " + std::to_string(report.per_class_count(i)) +
         "     " + fixed4(report.per_class_accuracy(i)) + "    " +
         fixed4(report.per_class_error(i)) + "\n";
  }

  s += "\nconfusions ranked per class (off-diagonal, descending)\n";
  for (int i = 0; i < k; ++i) {
    std::vector<int> others;
    for (int j = 0; j < k; ++j) {
      if (j != i) others.push_back(j);
    }
    std::stable_sort(others.begin(), others.end(), [&](int a, int b) {
      return report.confusion(i, a) > report.confusion(i, b);
    });
    s += "true=" + std::to_string(i + 1) + ":";
    for (int j : others) {
      s += " " + std::to_string(j + 1) + ":" + fixed4(report.confusion(i, j));
    }
    s += "\n";
  }
  return s;
}

std::string render_report_json(const EvalReport& report, const ReportContext& context) {
  json j;
  j["kind"] = "vowelbci-eval-report";
  j["format_version"] = 1;
  j["seed"] = context.seed;
  j["metric"] = context.metric;
  j["svm"] = {{"c", context.svm_c}, {"sigma_per_level", context.sigma_per_level}};
  j["split"] = {{"dropped_trials", context.dropped_trials},
                {"test_trial", context.test_trial},
                {"train_size", context.train_size},
                {"m", context.m},
                {"n_prime", context.n_prime},
                {"s_star_size", context.m + context.n_prime},
                {"pure_test", context.n_prime == 0}};
  j["dendrogram"] = context.dendrogram;
  j["overall_error"] = report.overall_error;

  const int k = static_cast<int>(report.confusion.rows());
  json confusion = json::array();
  json counts = json::array();
  for (int i = 0; i < k; ++i) {
    json row = json::array();
    json count_row = json::array();
    for (int jcol = 0; jcol < k; ++jcol) {
      row.push_back(report.confusion(i, jcol));
      count_row.push_back(report.confusion_counts(i, jcol));
    }
    confusion.push_back(std::move(row));
    counts.push_back(std::move(count_row));
  }
  j["confusion"] = std::move(confusion);
  j["confusion_counts"] = std::move(counts);

  json per_class = json::array();
  for (int i = 0; i < k; ++i) {
    per_class.push_back({{"label", i + 1},
                         {"count", report.per_class_count(i)},
                         {"accuracy", report.per_class_accuracy(i)},
                         {"error", report.per_class_error(i)}});
  }
  j["per_class"] = std::move(per_class);
  return j.dump(2) + "\n";
}

std::pair<std::filesystem::path, std::filesystem::path> write_report_files(
    const std::filesystem::path& out_dir, const EvalReport& report,
    const ReportContext& context) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    fail(errc::io, "cannot create output directory " + out_dir.string());
  }
  const auto text_path = out_dir / ("eval_report_" + context.metric + ".txt");
  const auto json_path = out_dir / ("eval_report_" + context.metric + ".json");
  detail::write_file_atomic(text_path, render_report_text(report, context));
  detail::write_file_atomic(json_path, render_report_json(report, context));
  return {text_path, json_path};
}

std::pair<EvalReport, ReportContext> load_report_json(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io, "cannot open report file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(errc::parse, "report file " + path.string() + ": " + e.what());
  }

  try {
    if (j.at("kind").get<std::string>() != "vowelbci-eval-report") {
      fail(errc::parse, path.string() + " is not an evaluation report");
    }
    EvalReport report;
    ReportContext context;
    context.seed = j.at("seed").get<std::uint64_t>();
    context.metric = j.at("metric").get<std::string>();
    context.svm_c = j.at("svm").at("c").get<double>();
    context.sigma_per_level =
        j.at("svm").at("sigma_per_level").get<std::vector<double>>();
    const json& split = j.at("split");
    context.dropped_trials = split.at("dropped_trials").get<std::vector<int>>();
    context.test_trial = split.at("test_trial").get<int>();
    context.train_size = split.at("train_size").get<int>();
    context.m = split.at("m").get<int>();
    context.n_prime = split.at("n_prime").get<int>();
    context.dendrogram = j.at("dendrogram").get<std::string>();
    report.m = context.m;
    report.n_prime = context.n_prime;
    report.overall_error = j.at("overall_error").get<double>();

    const json& confusion = j.at("confusion");
    const int k = static_cast<int>(confusion.size());
    report.confusion.resize(k, k);
    report.confusion_counts.resize(k, k);
    for (int i = 0; i < k; ++i) {
      for (int jcol = 0; jcol < k; ++jcol) {
        report.confusion(i, jcol) =
            confusion[static_cast<std::size_t>(i)][static_cast<std::size_t>(jcol)]
                .get<double>();
        report.confusion_counts(i, jcol) =
            j.at("confusion_counts")[static_cast<std::size_t>(i)]
                                    [static_cast<std::size_t>(jcol)]
                                        .get<int>();
      }
    }
    report.per_class_accuracy.resize(k);
    report.per_class_error.resize(k);
    report.per_class_count.resize(k);
    for (const json& entry : j.at("per_class")) {
      const int label = entry.at("label").get<int>();
      report.per_class_accuracy(label - 1) = entry.at("accuracy").get<double>();
      report.per_class_error(label - 1) = entry.at("error").get<double>();
      report.per_class_count(label - 1) = entry.at("count").get<int>();
    }
    return {report, context};
  } catch (const json::exception& e) {
    fail(errc::parse, "report file " + path.string() + ": " + e.what());
  }
}

}  // namespace vowelbci
