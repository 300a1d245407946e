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

#include "vowelbci/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>

#include "vowelbci/errors.hpp"

namespace vowelbci {

namespace {

// Number of decimal significant digits written per sample. Six digits keep
// the quantization ~120 dB below unit-amplitude content while holding corpus
// files to a manageable size.
constexpr int kCsvPrecision = 6;

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

double parse_double_field(std::string_view field, const std::string& where) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    fail(errc::parse, where + ": cannot parse value '" + std::string(field) + "'");
  }
  if (!std::isfinite(value)) {
    fail(errc::parse, where + ": non-finite value '" + std::string(field) + "'");
  }
  return value;
}

long parse_int_field(std::string_view field, const std::string& where) {
  long value = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    fail(errc::parse, where + ": cannot parse integer '" + std::string(field) + "'");
  }
  return value;
}

std::string channel_name(int col_zero_based) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "ch%02d", col_zero_based + 1);
  return buf;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

int checked_samples_per(double seconds, double rate_hz, const std::string& what) {
  const double samples = seconds * rate_hz;
  const double rounded = std::round(samples);
  if (std::abs(samples - rounded) > 1e-9 || rounded < 1) {
    fail(errc::config, what + ": " + std::to_string(seconds) +
                           " s is not an integral number of samples at " +
                           std::to_string(rate_hz) + " Hz");
  }
  return static_cast<int>(rounded);
}

}  // namespace

int Session::trial_len() const {
  return checked_samples_per(kTrialSeconds, sample_rate_hz, "trial length");
}

int Session::active_len() const {
  return checked_samples_per(kActiveKeptSeconds, sample_rate_hz, "active window");
}

Session parse_session(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io, "cannot open session file " + path.string());
  const std::string where = path.filename().string();

  std::string line;
  if (!std::getline(in, line)) fail(errc::parse, where + ": empty file");
  strip_cr(line);

  // Header: subject,<id>,vowel,<1-5>,rate,<hz>
  const auto header = split_fields(line);
  if (header.size() != 6 || header[0] != "subject" || header[2] != "vowel" ||
      header[4] != "rate") {
    fail(errc::parse, where + ": malformed header line '" + line + "'");
  }
  Session session;
  session.subject_id =
      static_cast<int>(parse_int_field(header[1], where + ": header subject"));
  session.vowel_label =
      static_cast<int>(parse_int_field(header[3], where + ": header vowel"));
  session.sample_rate_hz = parse_double_field(header[5], where + ": header rate");
  if (session.subject_id < 1) {
    fail(errc::parse, where + ": subject id must be >= 1");
  }
  if (session.vowel_label < 1 || session.vowel_label > kNumClasses) {
    fail(errc::parse, where + ": vowel label must be in 1..5");
  }
  if (!(session.sample_rate_hz > 0)) {
    fail(errc::parse, where + ": sample rate must be positive");
  }

  // Column header: t,ch01,...,ch21
  if (!std::getline(in, line)) fail(errc::parse, where + ": missing column header");
  strip_cr(line);
  {
    const auto cols = split_fields(line);
    if (cols.size() != kFileChannels + 1 || cols[0] != "t") {
      fail(errc::parse, where + ": malformed column header (expected t,ch01,...,ch21)");
    }
    for (int c = 0; c < kFileChannels; ++c) {
      if (cols[c + 1] != channel_name(c)) {
        fail(errc::parse, where + ": column " + std::to_string(c + 2) +
                              " named '" + std::string(cols[c + 1]) +
                              "', expected '" + channel_name(c) + "'");
      }
    }
  }

  const int expected_rows = session.n_trials * session.trial_len();
  session.samples.resize(expected_rows, kFileChannels);

  int row = 0;  // 1-based data row index in messages
  while (std::getline(in, line)) {
    strip_cr(line);
    if (line.empty()) continue;
    ++row;
    if (row > expected_rows) break;  // reported as a row-count error below
    const auto fields = split_fields(line);
    if (fields.size() != kFileChannels + 1) {
      fail(errc::parse, where + ": row " + std::to_string(row) + ": expected " +
                            std::to_string(kFileChannels + 1) + " columns, found " +
                            std::to_string(fields.size()));
    }
    const std::string row_where = where + ": row " + std::to_string(row);
    parse_double_field(fields[0], row_where + ", column t");
    for (int c = 0; c < kFileChannels; ++c) {
      session.samples(row - 1, c) =
          parse_double_field(fields[c + 1], row_where + ", column " + channel_name(c));
    }
  }
  if (row != expected_rows) {
    fail(errc::parse, where + ": row count " +
                          (row > expected_rows ? "> " : "") +
                          std::to_string(row) + " does not match expected " +
                          std::to_string(expected_rows));
  }
  return session;
}

void write_session_csv(const std::filesystem::path& path, const Session& session) {
  const int rows = static_cast<int>(session.samples.rows());
  const int cols = static_cast<int>(session.samples.cols());
  if (cols != kFileChannels) {
    fail(errc::data, "session has " + std::to_string(cols) + " channels, expected " +
                         std::to_string(kFileChannels));
  }

  std::string out;
  out.reserve(static_cast<std::size_t>(rows) * (kFileChannels + 1) * 14);

  char buf[64];
  const auto append_double = [&](double v) {
    const auto res = std::to_chars(buf, buf + sizeof buf, v,
                                   std::chars_format::general, kCsvPrecision);
    out.append(buf, res.ptr);
  };

  out += "subject," + std::to_string(session.subject_id) + ",vowel," +
         std::to_string(session.vowel_label) + ",rate,";
  append_double(session.sample_rate_hz);
  out += '\n';

  out += 't';
  for (int c = 0; c < kFileChannels; ++c) {
    out += ',';
    out += channel_name(c);
  }
  out += '\n';

  const double dt = 1.0 / session.sample_rate_hz;
  for (int r = 0; r < rows; ++r) {
    append_double(r * dt);
    for (int c = 0; c < kFileChannels; ++c) {
      out += ',';
      append_double(session.samples(r, c));
    }
    out += '\n';
  }

  // Atomic replace: write to a sibling temp file, then rename.
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) fail(errc::io, "cannot write " + tmp.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) fail(errc::io, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(errc::io, "cannot rename " + tmp.string() + " to " + path.string());
}

std::vector<Trial> segment_trials(const Session& session) {
  const int trial_len = session.trial_len();
  const int rest = checked_samples_per(kRestSeconds, session.sample_rate_hz, "rest");
  const int transition =
      checked_samples_per(kTransitionSeconds, session.sample_rate_hz, "transition");
  const int kept = session.active_len();

  if (session.samples.rows() != session.n_trials * trial_len) {
    fail(errc::data, "session sample count " + std::to_string(session.samples.rows()) +
                         " does not equal trials x trial length");
  }
  if (session.samples.cols() != kFileChannels) {
    fail(errc::data, "session has " + std::to_string(session.samples.cols()) +
                         " channels, expected " + std::to_string(kFileChannels));
  }
  if (!session.samples.allFinite()) {
    fail(errc::data, "session contains non-finite samples");
  }

  std::vector<Trial> trials;
  trials.reserve(session.n_trials);
  for (int j = 1; j <= session.n_trials; ++j) {
    Trial trial;
    trial.subject_id = session.subject_id;
    trial.vowel_label = session.vowel_label;
    trial.trial_index = j;
    trial.sample_rate_hz = session.sample_rate_hz;
    const int start = (j - 1) * trial_len + rest + transition;
    trial.active = session.samples.block(start, 0, kept, kSignalChannels);
    trials.push_back(std::move(trial));
  }
  return trials;
}

namespace {

void append_sorted(std::vector<Trial>& dataset, std::vector<Trial> trials) {
  dataset.insert(dataset.end(), std::make_move_iterator(trials.begin()),
                 std::make_move_iterator(trials.end()));
}

void sort_dataset(std::vector<Trial>& dataset) {
  std::sort(dataset.begin(), dataset.end(), [](const Trial& a, const Trial& b) {
    return std::tie(a.subject_id, a.vowel_label, a.trial_index) <
           std::tie(b.subject_id, b.vowel_label, b.trial_index);
  });
}

void check_duplicate(std::set<std::pair<int, int>>& seen, int subject, int vowel) {
  if (!seen.insert({subject, vowel}).second) {
    fail(errc::data, "duplicate session for subject " + std::to_string(subject) +
                         ", vowel " + std::to_string(vowel));
  }
}

}  // namespace

std::vector<Trial> build_dataset(const std::vector<Session>& sessions) {
  if (sessions.empty()) fail(errc::data, "no sessions given");
  std::set<std::pair<int, int>> seen;
  std::vector<Trial> dataset;
  dataset.reserve(sessions.size() * kTrialsPerSession);
  for (const Session& session : sessions) {
    check_duplicate(seen, session.subject_id, session.vowel_label);
    append_sorted(dataset, segment_trials(session));
  }
  sort_dataset(dataset);
  return dataset;
}

std::vector<Trial> build_dataset_from_files(
    const std::vector<std::filesystem::path>& paths) {
  if (paths.empty()) fail(errc::data, "no session files given");
  std::set<std::pair<int, int>> seen;
  std::vector<Trial> dataset;
  dataset.reserve(paths.size() * kTrialsPerSession);
  for (const auto& path : paths) {
    const Session session = parse_session(path);
    check_duplicate(seen, session.subject_id, session.vowel_label);
    append_sorted(dataset, segment_trials(session));
  }
  sort_dataset(dataset);
  return dataset;
}

std::vector<std::filesystem::path> list_session_files(
    const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    fail(errc::io, "not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().extension() != ".csv") continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace vowelbci
