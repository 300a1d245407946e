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

#ifndef VOWELBCI_INGEST_HPP_
#define VOWELBCI_INGEST_HPP_

#include <Eigen/Core>
#include <filesystem>
#include <vector>

namespace vowelbci {

// Recording geometry. The last file column is the reference electrode and is
// dropped at segmentation.
inline constexpr int kFileChannels = 21;
inline constexpr int kSignalChannels = 20;
inline constexpr int kTrialsPerSession = 10;
inline constexpr int kNumClasses = 5;
inline constexpr double kDefaultSampleRateHz = 500.0;

// Per-trial timing (seconds). rest + transition + kept + tail = trial.
inline constexpr double kRestSeconds = 3.0;
inline constexpr double kTransitionSeconds = 0.5;
inline constexpr double kActiveKeptSeconds = 2.0;
inline constexpr double kTrialSeconds = 6.0;

/// One recording session: a single subject imagining a single vowel for ten
/// rest/imagination trials. `samples` is [n_samples x 21] in file channel
/// order, reference last.
struct Session {
  int subject_id = 0;
  int vowel_label = 0;  // 1=/a/ 2=/e/ 3=/i/ 4=/o/ 5=/u/
  double sample_rate_hz = kDefaultSampleRateHz;
  int n_trials = kTrialsPerSession;
  Eigen::MatrixXd samples;

  int trial_len() const;   // samples per trial (3000 at 500 Hz)
  int active_len() const;  // samples kept per trial (1000 at 500 Hz)
};

/// The 2 s active-imagination core of one trial, reference channel removed.
struct Trial {
  int subject_id = 0;
  int vowel_label = 0;
  int trial_index = 0;  // 1-based
  double sample_rate_hz = kDefaultSampleRateHz;
  Eigen::MatrixXd active;  // [active_len x 20]
};

/// Parse a session CSV (see README for the format). Throws errc::parse with
/// the offending row/column on any malformation.
Session parse_session(const std::filesystem::path& path);

/// Write a session in the same format. Used by the corpus generator; the
/// value precision is fixed so identical sessions produce identical bytes.
void write_session_csv(const std::filesystem::path& path, const Session& session);

/// Cut a session into its 10 trials, keeping for each the 2 s active window
/// (skip 3 s rest and the 0.5 s transition, drop the final 0.5 s) and
/// dropping the reference channel.
std::vector<Trial> segment_trials(const Session& session);

/// Segment every session and concatenate, ordered by (subject, vowel,
/// trial_index) regardless of input order. Duplicate (subject, vowel) pairs
/// are rejected.
std::vector<Trial> build_dataset(const std::vector<Session>& sessions);

/// Streaming variant: parse and segment one file at a time so only one
/// session is ever resident.
std::vector<Trial> build_dataset_from_files(
    const std::vector<std::filesystem::path>& paths);

/// Session files (`*.csv`, excluding the corpus manifest) under a directory,
/// sorted by filename.
std::vector<std::filesystem::path> list_session_files(
    const std::filesystem::path& dir);

}  // namespace vowelbci

#endif  // VOWELBCI_INGEST_HPP_
