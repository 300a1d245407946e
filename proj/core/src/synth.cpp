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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "vowelbci/errors.hpp"
#include "vowelbci/random.hpp"

namespace vowelbci {

namespace {

// Tone centers must sit strictly inside the analysis passband so the filter
// does not eat the class signal.
constexpr double kPassbandLowHz = 2.0;
constexpr double kPassbandHighHz = 50.0;

constexpr double kReferenceNoise = 1e-9;

std::vector<int> channel_range(int first, int last) {
  std::vector<int> out;
  for (int c = first; c <= last; ++c) out.push_back(c);
  return out;
}

}  // namespace

SynthSpec default_synth_spec() {
  SynthSpec spec;
  for (int cls = 0; cls < kNumClasses; ++cls) {
    ToneSpec alpha;
    alpha.center_hz = 8.0 + 1.5 * cls;  // 8, 9.5, 11, 12.5, 14
    alpha.amplitude = 1.0;
    alpha.channels = channel_range(1, 10);
    ToneSpec beta;
    beta.center_hz = 20.0 + 2.0 * cls;  // 20, 22, 24, 26, 28
    beta.amplitude = 1.0;
    beta.channels = channel_range(11, 20);
    spec.class_signatures[static_cast<std::size_t>(cls)] = {alpha, beta};
  }
  return spec;
}

void validate_synth_spec(const SynthSpec& spec) {
  if (spec.n_subjects < 1) fail(errc::config, "n_subjects must be >= 1");
  if (!(spec.sample_rate_hz > 0)) fail(errc::config, "sample rate must be positive");
  if (spec.noise_sigma < 0) fail(errc::config, "noise_sigma must be nonnegative");
  if (spec.subject_variability < 0) {
    fail(errc::config, "subject_variability must be nonnegative");
  }

  std::set<std::string> seen;
  for (int cls = 0; cls < kNumClasses; ++cls) {
    const auto& tones = spec.class_signatures[static_cast<std::size_t>(cls)];
    if (tones.empty()) {
      fail(errc::config, "class " + std::to_string(cls + 1) + " has no signature");
    }
    std::string key;
    for (const ToneSpec& tone : tones) {
      if (!(tone.center_hz > kPassbandLowHz) || !(tone.center_hz < kPassbandHighHz)) {
        fail(errc::config, "tone at " + std::to_string(tone.center_hz) +
                               " Hz lies outside the 2-50 Hz passband");
      }
      if (tone.bandwidth_hz < 0) fail(errc::config, "bandwidth must be nonnegative");
      if (!(tone.amplitude > 0)) fail(errc::config, "amplitude must be positive");
      if (tone.channels.empty()) fail(errc::config, "tone has no channels");
      for (int c : tone.channels) {
        if (c < 1 || c > kSignalChannels) {
          fail(errc::config, "tone channel " + std::to_string(c) +
                                 " outside 1.." + std::to_string(kSignalChannels));
        }
      }
      key += std::to_string(tone.center_hz) + "/" + std::to_string(tone.amplitude) + ";";
    }
    if (!seen.insert(key).second) {
      fail(errc::config, "two classes share an identical signature");
    }
  }
}

Session generate_session(const SynthSpec& spec, int subject, int vowel) {
  validate_synth_spec(spec);
  if (subject < 1 || subject > spec.n_subjects) {
    fail(errc::config, "subject outside 1.." + std::to_string(spec.n_subjects));
  }
  if (vowel < 1 || vowel > kNumClasses) fail(errc::config, "vowel outside 1..5");

  Session session;
  session.subject_id = subject;
  session.vowel_label = vowel;
  session.sample_rate_hz = spec.sample_rate_hz;
  const int trial_len = session.trial_len();
  const int rest_len = static_cast<int>(std::lround(kRestSeconds * spec.sample_rate_hz));
  const int rows = session.n_trials * trial_len;
  session.samples.resize(rows, kFileChannels);

  // Subject stream: one amplitude scale and one frequency shift per tone,
  // identical across this subject's five sessions.
  const auto& tones = spec.class_signatures[static_cast<std::size_t>(vowel - 1)];
  std::vector<double> amp_scale(tones.size());
  std::vector<double> freq_shift(tones.size());
  {
    rng_engine subject_rng(
        derive_seed(spec.seed, 0x500000ULL + static_cast<std::uint64_t>(subject)));
    gaussian_sampler gauss;
    for (std::size_t t = 0; t < tones.size(); ++t) {
      amp_scale[t] = std::exp(spec.subject_variability * 0.5 * gauss(subject_rng));
      freq_shift[t] = spec.subject_variability * gauss(subject_rng);
    }
  }

  // Session stream: noise and per-trial tone randomization.
  rng_engine rng(derive_seed(spec.seed,
                             0x100000ULL + 10ULL * static_cast<std::uint64_t>(subject) +
                                 static_cast<std::uint64_t>(vowel)));
  gaussian_sampler gauss;

  const double dt = 1.0 / spec.sample_rate_hz;
  for (int trial = 0; trial < session.n_trials; ++trial) {
    const int base = trial * trial_len;

    // Broadband noise everywhere, near-zero reference channel.
    for (int r = 0; r < trial_len; ++r) {
      for (int c = 0; c < kSignalChannels; ++c) {
        session.samples(base + r, c) = spec.noise_sigma * gauss(rng);
      }
      session.samples(base + r, kFileChannels - 1) = kReferenceNoise * gauss(rng);
    }

    // Class tones over the whole active phase.
    for (std::size_t t = 0; t < tones.size(); ++t) {
      const ToneSpec& tone = tones[t];
      const double freq = tone.center_hz + freq_shift[t] +
                          (tone.bandwidth_hz > 0
                               ? uniform(rng, -0.5 * tone.bandwidth_hz,
                                         0.5 * tone.bandwidth_hz)
                               : 0.0);
      const double phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
      const double amplitude = tone.amplitude * amp_scale[t];
      for (int c : tone.channels) {
        for (int r = rest_len; r < trial_len; ++r) {
          session.samples(base + r, c - 1) +=
              amplitude * std::sin(2.0 * std::numbers::pi * freq * (r * dt) + phase);
        }
      }
    }
  }
  return session;
}

std::vector<Session> generate_sessions(const SynthSpec& spec) {
  validate_synth_spec(spec);
  std::vector<Session> sessions;
  sessions.reserve(static_cast<std::size_t>(spec.n_subjects) * kNumClasses);
  for (int subject = 1; subject <= spec.n_subjects; ++subject) {
    for (int vowel = 1; vowel <= kNumClasses; ++vowel) {
      sessions.push_back(generate_session(spec, subject, vowel));
    }
  }
  return sessions;
}

namespace {

nlohmann::json tone_to_json(const ToneSpec& tone) {
  return {{"center_hz", tone.center_hz},
          {"bandwidth_hz", tone.bandwidth_hz},
          {"amplitude", tone.amplitude},
          {"channels", tone.channels}};
}

}  // namespace

std::filesystem::path generate_corpus(const SynthSpec& spec,
                                      const std::filesystem::path& out_dir) {
  validate_synth_spec(spec);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    fail(errc::io, "cannot create output directory " + out_dir.string());
  }

  nlohmann::json manifest;
  manifest["format_version"] = 1;
  manifest["seed"] = spec.seed;
  manifest["n_subjects"] = spec.n_subjects;
  manifest["sample_rate_hz"] = spec.sample_rate_hz;
  manifest["noise_sigma"] = spec.noise_sigma;
  manifest["subject_variability"] = spec.subject_variability;
  for (int cls = 0; cls < kNumClasses; ++cls) {
    for (const ToneSpec& tone : spec.class_signatures[static_cast<std::size_t>(cls)]) {
      manifest["class_signatures"][std::to_string(cls + 1)].push_back(
          tone_to_json(tone));
    }
  }

  std::vector<std::string> files;
  for (int subject = 1; subject <= spec.n_subjects; ++subject) {
    for (int vowel = 1; vowel <= kNumClasses; ++vowel) {
      char name[32];
      std::snprintf(name, sizeof name, "s%02d_v%d.csv", subject, vowel);
      write_session_csv(out_dir / name, generate_session(spec, subject, vowel));
      files.emplace_back(name);
    }
  }
  manifest["files"] = files;

  const std::filesystem::path manifest_path = out_dir / "manifest.json";
  const std::filesystem::path tmp = manifest_path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(errc::io, "cannot write " + tmp.string());
    out << manifest.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, manifest_path, ec);
  if (ec) fail(errc::io, "cannot rename manifest into place");
  return manifest_path;
}

}  // namespace vowelbci
