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

#ifndef VOWELBCI_SYNTH_HPP_
#define VOWELBCI_SYNTH_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "vowelbci/ingest.hpp"

namespace vowelbci {

/// One narrowband component of a class signature, applied to a subset of the
/// signal channels during the active phase.
struct ToneSpec {
  double center_hz = 10.0;
  double bandwidth_hz = 0.0;  // per-trial frequency drawn in center +- bw/2
  double amplitude = 1.0;
  std::vector<int> channels;  // 1-based signal channels (1..20)
};

struct SynthSpec {
  int n_subjects = 20;
  double sample_rate_hz = kDefaultSampleRateHz;
  double noise_sigma = 1.0;          // broadband noise level (rest and active)
  double subject_variability = 0.5;  // per-subject amplitude/frequency jitter
  std::uint64_t seed = 0;
  std::array<std::vector<ToneSpec>, kNumClasses> class_signatures;
};

/// The stock spec: two tones per class (alpha band on channels 1-10, beta
/// band on channels 11-20), all centers on periodogram bins.
SynthSpec default_synth_spec();

/// Validate invariants: tone centers inside the 2-50 Hz passband, distinct
/// signatures per class, positive amplitudes, channels in range.
void validate_synth_spec(const SynthSpec& spec);

/// One session, deterministic in (spec.seed, subject, vowel) alone: rest
/// phases are pure noise, active phases add the subject-jittered class tones,
/// the reference channel is near-zero.
Session generate_session(const SynthSpec& spec, int subject, int vowel);

/// All n_subjects x 5 sessions (memory heavy; prefer generate_corpus for
/// anything full-sized).
std::vector<Session> generate_sessions(const SynthSpec& spec);

/// Write every session as a CSV under out_dir plus a `manifest.json`
/// describing the spec, the seed and the file list. Returns the manifest
/// path. Identical specs produce byte-identical trees.
std::filesystem::path generate_corpus(const SynthSpec& spec,
                                      const std::filesystem::path& out_dir);

}  // namespace vowelbci

#endif  // VOWELBCI_SYNTH_HPP_
