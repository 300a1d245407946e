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

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "vowelbci/config.hpp"
#include "vowelbci/errors.hpp"
#include "vowelbci/pipeline.hpp"

namespace {

using namespace vowelbci;

std::set<int> parse_trial_list(const std::string& list) {
  std::set<int> out;
  if (list.empty()) return out;
  std::stringstream ss(list);
  std::string token;
  while (std::getline(ss, token, ',')) {
    try {
      out.insert(std::stoi(token));
    } catch (const std::exception&) {
      fail(errc::usage, "bad trial number '" + token + "'");
    }
  }
  for (int t : out) {
    if (t < 1 || t > kTrialsPerSession) {
      fail(errc::usage, "trial " + std::to_string(t) + " outside 1..10");
    }
  }
  return out;
}

PipelineConfig load_config_with_overrides(const std::string& config_path,
                                          const std::string& data_dir,
                                          const std::string& out_dir) {
  PipelineConfig config = load_pipeline_config(config_path);
  if (!data_dir.empty()) config.data_dir = data_dir;
  if (!out_dir.empty()) config.output_dir = out_dir;
  if (config.data_dir.empty()) fail(errc::config, "no data_dir configured");
  if (config.output_dir.empty()) fail(errc::config, "no output_dir configured");
  return config;
}

void write_train_log(const std::filesystem::path& path, const TrainOutput& out) {
  std::string log;
  log += "train size = " + std::to_string(out.train_size) + "\n";
  log += "L = " + out.model.dtsvm.dendrogram.to_string() + "\n";
  log += "per-channel explained variance (2 PCs):\n";
  for (std::size_t c = 0; c < out.explained_two_pc.size(); ++c) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "  ch%02zu = %.4f\n", c + 1, out.explained_two_pc[c]);
    log += buf;
  }
  for (int c : out.low_variance_channels) {
    log += "warning: channel " + std::to_string(c) +
           " explained variance <= 0.75 with 2 components\n";
  }
  log += "per-level classifiers:\n";
  for (std::size_t i = 0; i < out.svm_info.sigma_per_level.size(); ++i) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "  psi%zu: sigma = %.6g, converged = %s\n", i + 1,
                  out.svm_info.sigma_per_level[i],
                  out.svm_info.converged_per_level[i] ? "yes" : "no");
    log += buf;
  }
  std::ofstream f(path, std::ios::trunc);
  if (!f) fail(errc::io, "cannot write " + path.string());
  f << log;
}

int cmd_synth(const std::string& spec_path, const std::string& out_dir) {
  SynthSpec spec;
  if (spec_path.empty()) {
    spec = default_synth_spec();
    if (const auto env = seed_from_env()) spec.seed = *env;
  } else {
    spec = load_synth_spec(spec_path);
  }
  const std::filesystem::path manifest = generate_corpus(spec, out_dir);
  std::cout << manifest.string() << "\n";
  return 0;
}

int cmd_train(const std::string& config_path, const std::string& data_dir,
              const std::string& out_dir) {
  const PipelineConfig config = load_config_with_overrides(config_path, data_dir, out_dir);
  const auto files = list_session_files(config.data_dir);
  if (files.empty()) fail(errc::data, "no session files in " + config.data_dir.string());

  TrainOutput out;
  try {
    out = train_pipeline(config, files);
  } catch (const error&) {
    throw;
  }

  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec || !std::filesystem::is_directory(config.output_dir)) {
    fail(errc::io, "cannot create output directory " + config.output_dir.string());
  }
  const auto model_path = config.output_dir / "model.json";
  save_model(model_path, out.model);
  write_train_log(config.output_dir / "train.log", out);

  for (int c : out.low_variance_channels) {
    std::cerr << "warning: channel " << c
              << " explained variance <= 0.75 with 2 components\n";
  }
  for (std::size_t i = 0; i < out.svm_info.converged_per_level.size(); ++i) {
    if (!out.svm_info.converged_per_level[i]) {
      std::cerr << "warning: classifier psi" << (i + 1)
                << " did not reach the KKT tolerance\n";
    }
  }
  std::cout << "model: " << model_path.string() << "\n";
  std::cout << "log: " << (config.output_dir / "train.log").string() << "\n";
  std::cout << "L = " << out.model.dtsvm.dendrogram.to_string() << "\n";
  return 0;
}

int cmd_eval(const std::string& model_path, const std::string& config_path,
             const std::string& data_dir, const std::string& out_dir) {
  const PipelineConfig config = load_config_with_overrides(config_path, data_dir, out_dir);
  const TrainedModel model = load_model(model_path);
  const auto files = list_session_files(config.data_dir);
  if (files.empty()) fail(errc::data, "no session files in " + config.data_dir.string());

  const EvalOutput out = evaluate_pipeline(model, config, files);
  const auto [text_path, json_path] =
      write_report_files(config.output_dir, out.report, out.context);
  std::cout << "report: " << text_path.string() << "\n";
  std::cout << "report-json: " << json_path.string() << "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "overall_error = %.4f\n", out.report.overall_error);
  std::cout << buf;
  return 0;
}

int cmd_predict(const std::string& model_path, const std::string& session_path,
                const std::string& drop_list) {
  const TrainedModel model = load_model(model_path);
  const auto predictions =
      predict_session(model, session_path, parse_trial_list(drop_list));
  for (const TrialPrediction& p : predictions) {
    char head[32];
    std::snprintf(head, sizeof head, "trial %02d: label=%d  path:", p.trial_index,
                  p.trace.label);
    std::cout << head;
    for (const PredictStep& step : p.trace.steps) {
      const DendrogramMerge& merge =
          model.dtsvm.dendrogram.merges[static_cast<std::size_t>(step.level - 1)];
      const std::vector<int>& side =
          step.chose_group_a ? merge.group_a : merge.group_b;
      std::cout << " psi" << step.level << (step.chose_group_a ? "->+1{" : "->-1{");
      for (std::size_t i = 0; i < side.size(); ++i) {
        if (i) std::cout << ",";
        std::cout << side[i];
      }
      std::cout << "}";
    }
    std::cout << "\n";
  }
  return 0;
}

int cmd_report(const std::string& report_path, const std::string& out_path) {
  const auto [report, context] = load_report_json(report_path);
  const std::string text = render_report_text(report, context);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path, std::ios::trunc);
    if (!f) fail(errc::io, "cannot write " + out_path);
    f << text;
    std::cout << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EEG vowel-imagery recognition pipeline"};
  app.require_subcommand(1);

  std::string spec_path, out_dir, config_path, data_dir, model_path, session_path;
  std::string drop_list, report_path, report_out;

  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic session corpus");
  synth->add_option("--spec", spec_path, "Synth spec file (key = value)");
  synth->add_option("--out", out_dir, "Output directory")->required();

  CLI::App* train = app.add_subcommand("train", "Train a model on a corpus");
  train->add_option("--config", config_path, "Pipeline config file")->required();
  train->add_option("--data-dir", data_dir, "Override the configured data_dir");
  train->add_option("--out", out_dir, "Override the configured output_dir");

  CLI::App* eval = app.add_subcommand("eval", "Evaluate a model on the S* split");
  eval->add_option("--model", model_path, "Model file")->required();
  eval->add_option("--config", config_path, "Pipeline config file")->required();
  eval->add_option("--data-dir", data_dir, "Override the configured data_dir");
  eval->add_option("--out", out_dir, "Override the configured output_dir");

  CLI::App* predict = app.add_subcommand("predict", "Predict the trials of one session");
  predict->add_option("--model", model_path, "Model file")->required();
  predict->add_option("--session", session_path, "Session CSV")->required();
  predict->add_option("--drop-trials", drop_list, "Trial indices to skip, e.g. 1,10");

  CLI::App* report = app.add_subcommand("report", "Render a JSON report as text");
  report->add_option("report", report_path, "Evaluation report (.json)")->required();
  report->add_option("--out", report_out, "Write to a file instead of stdout");

  try {
    app.parse(argc, argv);
    if (synth->parsed()) return cmd_synth(spec_path, out_dir);
    if (train->parsed()) return cmd_train(config_path, data_dir, out_dir);
    if (eval->parsed()) return cmd_eval(model_path, config_path, data_dir, out_dir);
    if (predict->parsed()) return cmd_predict(model_path, session_path, drop_list);
    if (report->parsed()) return cmd_report(report_path, report_out);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error:usage: " << e.what() << "\n";
    return 1;
  } catch (const vowelbci::error& e) {
    std::cerr << "error:" << e.category() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error:internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
