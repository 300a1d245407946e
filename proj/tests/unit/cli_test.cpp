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

// Exercises the installed command-line surface end to end by spawning the
// real binary (path injected by the build).

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <string>

#include "test_util.hpp"

using vowelbci::test::TempDir;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run(const std::string& args) {
  const std::string command =
      std::string(VOWELBCI_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = ::popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buffer[4096];
  while (std::fgets(buffer, sizeof buffer, pipe) != nullptr) {
    result.output += buffer;
  }
  const int status = ::pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

void write(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

bool has_error_category_line(const std::string& output) {
  static const std::regex pattern("(^|\n)error:[a-z]+: ");
  return std::regex_search(output, pattern);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("synth, train, eval, predict, report work end to end") {
  TempDir dir("cli");
  write(dir / "synth.cfg",
        "n_subjects = 2\nnoise_sigma = 0.4\nsubject_variability = 0.1\nseed = 3\n");
  write(dir / "pipeline.cfg", "data_dir = " + (dir / "corpus").string() +
                                  "\noutput_dir = " + (dir / "out").string() +
                                  "\nsplit_n_prime = 10\nseed = 3\n");

  const RunResult synth = run("synth --spec " + (dir / "synth.cfg").string() +
                              " --out " + (dir / "corpus").string());
  CHECK(synth.exit_code == 0);
  CHECK(synth.output.find("manifest.json") != std::string::npos);

  const RunResult train = run("train --config " + (dir / "pipeline.cfg").string());
  CHECK(train.exit_code == 0);
  CHECK(train.output.find("model.json") != std::string::npos);
  CHECK(train.output.find("L = [(") != std::string::npos);

  const RunResult eval = run("eval --model " + (dir / "out" / "model.json").string() +
                             " --config " + (dir / "pipeline.cfg").string());
  CHECK(eval.exit_code == 0);
  CHECK(eval.output.find("overall_error") != std::string::npos);

  const RunResult predict =
      run("predict --model " + (dir / "out" / "model.json").string() +
          " --session " + (dir / "corpus" / "s01_v2.csv").string() +
          " --drop-trials 1,10");
  CHECK(predict.exit_code == 0);
  // 8 trials, each with at most 4 classifier firings in the trace.
  int trial_lines = 0;
  std::stringstream lines(predict.output);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("trial ", 0) != 0) continue;
    ++trial_lines;
    std::size_t count = 0, pos = 0;
    while ((pos = line.find("psi", pos)) != std::string::npos) {
      ++count;
      pos += 3;
    }
    CHECK(count >= 1);
    CHECK(count <= 4);
  }
  CHECK(trial_lines == 8);

  const RunResult report =
      run("report " + (dir / "out" / "eval_report_euclidean.json").string());
  CHECK(report.exit_code == 0);
  CHECK(report.output.find("confusion matrix") != std::string::npos);
}

TEST_CASE("failures exit nonzero with a category prefix") {
  TempDir dir("cli_err");

  const RunResult nocmd = run("");
  CHECK(nocmd.exit_code != 0);
  CHECK(has_error_category_line(nocmd.output));

  write(dir / "bad_synth.cfg", "class1_tones = 60:0:1@1-10\n");
  const RunResult badspec = run("synth --spec " + (dir / "bad_synth.cfg").string() +
                                " --out " + (dir / "x").string());
  CHECK(badspec.exit_code != 0);
  CHECK(badspec.output.find("error:config: ") != std::string::npos);

  write(dir / "cfg.cfg",
        "data_dir = " + (dir / "nowhere").string() + "\noutput_dir = " +
            (dir / "out").string() + "\n");
  const RunResult noData = run("train --config " + (dir / "cfg.cfg").string());
  CHECK(noData.exit_code != 0);
  CHECK(has_error_category_line(noData.output));

  const RunResult noModel = run("predict --model " + (dir / "none.json").string() +
                                " --session " + (dir / "none.csv").string());
  CHECK(noModel.exit_code != 0);
  CHECK(noModel.output.find("error:io: ") != std::string::npos);

  // Malformed session file -> parse category.
  write(dir / "bad.csv", "subject,1,vowel,1,rate,500\nt,ch01\n1,2\n");
  write(dir / "mini_synth.cfg", "n_subjects = 1\nseed = 1\nnoise_sigma = 0.3\n");
  const RunResult synth = run("synth --spec " + (dir / "mini_synth.cfg").string() +
                              " --out " + (dir / "corpus").string());
  REQUIRE(synth.exit_code == 0);
  write(dir / "train.cfg", "data_dir = " + (dir / "corpus").string() +
                               "\noutput_dir = " + (dir / "out").string() +
                               "\nsplit_n_prime = 5\nseed = 1\n");
  const RunResult train = run("train --config " + (dir / "train.cfg").string());
  REQUIRE(train.exit_code == 0);
  const RunResult badsession =
      run("predict --model " + (dir / "out" / "model.json").string() +
          " --session " + (dir / "bad.csv").string());
  CHECK(badsession.exit_code != 0);
  CHECK(badsession.output.find("error:parse: ") != std::string::npos);
}

TEST_CASE("synth twice with one seed gives identical manifests") {
  TempDir dir("cli_det");
  write(dir / "s.cfg", "n_subjects = 1\nseed = 12\n");
  const RunResult a =
      run("synth --spec " + (dir / "s.cfg").string() + " --out " + (dir / "a").string());
  const RunResult b =
      run("synth --spec " + (dir / "s.cfg").string() + " --out " + (dir / "b").string());
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(vowelbci::test::file_hash(dir / "a" / "manifest.json") ==
        vowelbci::test::file_hash(dir / "b" / "manifest.json"));
}

}  // TEST_SUITE
