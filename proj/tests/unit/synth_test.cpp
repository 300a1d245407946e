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

#include "vowelbci/synth.hpp"

#include <doctest.h>

#include <filesystem>

#include "test_util.hpp"
#include "vowelbci/errors.hpp"
#include "vowelbci/spectral.hpp"

using namespace vowelbci;
using test::TempDir;

TEST_SUITE("synth") {

TEST_CASE("default spec is valid and structurally complete") {
  SynthSpec spec = default_synth_spec();
  CHECK_NOTHROW(validate_synth_spec(spec));
  const Session session = generate_session(spec, 1, 1);
  CHECK(session.samples.rows() == 30000);
  CHECK(session.samples.cols() == kFileChannels);
  CHECK(session.samples.allFinite());
}

TEST_CASE("out-of-band tone is rejected") {
  SynthSpec spec = default_synth_spec();
  spec.class_signatures[0][0].center_hz = 60.0;
  CHECK_THROWS_WITH_AS(validate_synth_spec(spec), doctest::Contains("passband"),
                       error);
  spec.class_signatures[0][0].center_hz = 1.0;
  CHECK_THROWS_AS(validate_synth_spec(spec), error);
}

TEST_CASE("identical class signatures are rejected") {
  SynthSpec spec = default_synth_spec();
  spec.class_signatures[1] = spec.class_signatures[0];
  CHECK_THROWS_AS(validate_synth_spec(spec), error);
}

TEST_CASE("noiseless generation gives pure tones peaking at the class center") {
  SynthSpec spec = default_synth_spec();
  spec.noise_sigma = 0.0;
  spec.subject_variability = 0.0;
  spec.n_subjects = 1;
  for (int vowel = 1; vowel <= kNumClasses; ++vowel) {
    const Session session = generate_session(spec, 1, vowel);
    const std::vector<Trial> trials = segment_trials(session);
    const Trial& trial = trials[3];
    // One channel from each tone's subset.
    for (const int channel : {1, 11}) {
      std::vector<double> series(1000);
      for (int r = 0; r < 1000; ++r) series[static_cast<std::size_t>(r)] = trial.active(r, channel - 1);
      const Psd psd = periodogram_psd(series, spec.sample_rate_hz);
      Eigen::Index max_bin = 0;
      psd.power.maxCoeff(&max_bin);
      const auto& tones = spec.class_signatures[static_cast<std::size_t>(vowel - 1)];
      const double expected =
          channel <= 10 ? tones[0].center_hz : tones[1].center_hz;
      CHECK(psd.frequencies_hz(max_bin) == doctest::Approx(expected));
    }
  }
}

TEST_CASE("rest and active phases differ in signature-band power") {
  SynthSpec spec = default_synth_spec();
  spec.noise_sigma = 0.5;
  spec.n_subjects = 1;
  const Session session = generate_session(spec, 1, 2);

  // Compare band power around the class alpha tone between the rest window
  // and the active window of the same trial.
  const double center = spec.class_signatures[1][0].center_hz;
  const auto band_power = [&](int start_row) {
    std::vector<double> series(1000);
    for (int r = 0; r < 1000; ++r) {
      series[static_cast<std::size_t>(r)] = session.samples(start_row + r, 0);
    }
    const Psd psd = periodogram_psd(series, spec.sample_rate_hz);
    double power = 0.0;
    for (Eigen::Index k = 0; k < psd.bins(); ++k) {
      if (std::abs(psd.frequencies_hz(k) - center) <= 1.0) power += psd.power(k);
    }
    return power;
  };
  const double rest = band_power(200);      // inside the 3 s rest
  const double active = band_power(1750);   // inside the kept active window
  CHECK(active > 10.0 * rest);
}

TEST_CASE("same seed twice gives byte-identical corpora") {
  SynthSpec spec = default_synth_spec();
  spec.n_subjects = 1;
  spec.seed = 99;
  TempDir dir_a("synth_a");
  TempDir dir_b("synth_b");
  generate_corpus(spec, dir_a.path());
  generate_corpus(spec, dir_b.path());

  for (const auto& entry : std::filesystem::directory_iterator(dir_a.path())) {
    const auto name = entry.path().filename();
    CHECK(test::file_hash(entry.path()) == test::file_hash(dir_b.path() / name));
  }
}

TEST_CASE("session generation is independent of order") {
  SynthSpec spec = default_synth_spec();
  spec.n_subjects = 2;
  spec.seed = 5;
  const Session first = generate_session(spec, 2, 3);
  generate_session(spec, 1, 1);  // unrelated draw in between
  const Session again = generate_session(spec, 2, 3);
  CHECK((first.samples - again.samples).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("corpus has one file per (subject, vowel) plus a manifest") {
  SynthSpec spec = default_synth_spec();
  spec.n_subjects = 2;
  TempDir dir("synth_corpus");
  const auto manifest = generate_corpus(spec, dir.path());
  CHECK(std::filesystem::exists(manifest));
  int csv_count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir.path())) {
    if (entry.path().extension() == ".csv") ++csv_count;
  }
  CHECK(csv_count == 10);
}

TEST_CASE("subject variability moves the tone frequency between subjects") {
  SynthSpec spec = default_synth_spec();
  spec.noise_sigma = 0.0;
  spec.subject_variability = 2.0;
  spec.n_subjects = 2;
  spec.seed = 31;

  const auto peak_freq = [&](int subject) {
    const Session session = generate_session(spec, subject, 1);
    const std::vector<Trial> trials = segment_trials(session);
    std::vector<double> series(1000);
    for (int r = 0; r < 1000; ++r) series[static_cast<std::size_t>(r)] = trials[0].active(r, 0);
    const Psd psd = periodogram_psd(series, spec.sample_rate_hz);
    Eigen::Index max_bin = 0;
    psd.power.maxCoeff(&max_bin);
    return psd.frequencies_hz(max_bin);
  };
  CHECK(peak_freq(1) != peak_freq(2));
}

}  // TEST_SUITE
