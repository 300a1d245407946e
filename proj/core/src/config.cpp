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

#include "vowelbci/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "io_util.hpp"
#include "vowelbci/errors.hpp"

namespace vowelbci {

using detail::format_double;
using detail::write_file_atomic;

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

/// `key = value` lines, '#' comments, duplicate keys rejected.
class KeyValueFile {
 public:
  explicit KeyValueFile(const std::filesystem::path& path) : path_(path) {
    std::ifstream in(path);
    if (!in) fail(errc::io, "cannot open config file " + path.string());
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string stripped = trim(line);
      if (stripped.empty()) continue;
      const auto eq = stripped.find('=');
      if (eq == std::string::npos) {
        fail(errc::config, where(line_no) + ": expected 'key = value'");
      }
      const std::string key = trim(stripped.substr(0, eq));
      const std::string value = trim(stripped.substr(eq + 1));
      if (key.empty()) fail(errc::config, where(line_no) + ": empty key");
      if (!entries_.emplace(key, Entry{value, line_no}).second) {
        fail(errc::config, where(line_no) + ": duplicate key '" + key + "'");
      }
    }
  }

  bool has(const std::string& key) {
    used_.insert(key);
    return entries_.count(key) > 0;
  }

  std::string get_string(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second.value;
  }

  double get_double(const std::string& key, double fallback) {
    used_.insert(key);
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    return parse_double(it->second);
  }

  long long get_int(const std::string& key, long long fallback) {
    used_.insert(key);
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    return parse_int(it->second);
  }

  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) {
    used_.insert(key);
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const Entry& e = it->second;
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
    if (ec != std::errc{} || p != e.value.data() + e.value.size()) {
      fail(errc::config, where(e.line_no) + ": '" + e.value + "' is not an unsigned integer");
    }
    return v;
  }

  std::set<int> get_int_set(const std::string& key, const std::set<int>& fallback) {
    used_.insert(key);
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::set<int> out;
    if (trim(it->second.value).empty()) return out;
    std::stringstream ss(it->second.value);
    std::string token;
    while (std::getline(ss, token, ',')) {
      out.insert(static_cast<int>(parse_int(Entry{trim(token), it->second.line_no})));
    }
    return out;
  }

  /// Fail on any key that was never consulted.
  void reject_unknown() const {
    for (const auto& [key, entry] : entries_) {
      if (!used_.count(key)) {
        fail(errc::config, where(entry.line_no) + ": unknown key '" + key + "'");
      }
    }
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  struct Entry {
    std::string value;
    int line_no;
  };

  std::string where(int line_no) const {
    return path_.filename().string() + ":" + std::to_string(line_no);
  }

  double parse_double(const Entry& e) const {
    double v = 0;
    const auto [p, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
    if (ec != std::errc{} || p != e.value.data() + e.value.size()) {
      fail(errc::config, where(e.line_no) + ": '" + e.value + "' is not a number");
    }
    return v;
  }

  long long parse_int(const Entry& e) const {
    long long v = 0;
    const auto [p, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
    if (ec != std::errc{} || p != e.value.data() + e.value.size()) {
      fail(errc::config, where(e.line_no) + ": '" + e.value + "' is not an integer");
    }
    return v;
  }

  std::filesystem::path path_;
  std::map<std::string, Entry> entries_;
  mutable std::set<std::string> used_;
};

std::uint64_t env_seed_or(std::uint64_t fallback) {
  return seed_from_env().value_or(fallback);
}

std::string tones_to_string(const std::vector<ToneSpec>& tones) {
  std::string out;
  for (std::size_t i = 0; i < tones.size(); ++i) {
    if (i) out += "; ";
    const ToneSpec& t = tones[i];
    out += format_double(t.center_hz) + ":" + format_double(t.bandwidth_hz) + ":" +
           format_double(t.amplitude) + "@";
    // Compress consecutive channels into ranges.
    std::vector<int> chans = t.channels;
    std::sort(chans.begin(), chans.end());
    std::size_t k = 0;
    bool first = true;
    while (k < chans.size()) {
      std::size_t j = k;
      while (j + 1 < chans.size() && chans[j + 1] == chans[j] + 1) ++j;
      if (!first) out += ",";
      first = false;
      out += std::to_string(chans[k]);
      if (j > k) out += "-" + std::to_string(chans[j]);
      k = j + 1;
    }
  }
  return out;
}

std::vector<ToneSpec> parse_tones(const std::string& value, const std::string& where) {
  std::vector<ToneSpec> tones;
  std::stringstream tone_stream(value);
  std::string tone_str;
  while (std::getline(tone_stream, tone_str, ';')) {
    tone_str = trim(tone_str);
    if (tone_str.empty()) continue;
    const auto at = tone_str.find('@');
    if (at == std::string::npos) {
      fail(errc::config, where + ": tone '" + tone_str +
                             "' must look like center:bandwidth:amplitude@channels");
    }
    const std::string nums = tone_str.substr(0, at);
    const std::string chans = tone_str.substr(at + 1);

    ToneSpec tone;
    double parts[3];
    std::stringstream num_stream(nums);
    std::string part;
    int count = 0;
    while (std::getline(num_stream, part, ':')) {
      part = trim(part);
      if (count >= 3) break;
      double v = 0;
      const auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
      if (ec != std::errc{} || p != part.data() + part.size()) {
        fail(errc::config, where + ": '" + part + "' is not a number");
      }
      parts[count++] = v;
    }
    if (count != 3) {
      fail(errc::config, where + ": tone needs center:bandwidth:amplitude");
    }
    tone.center_hz = parts[0];
    tone.bandwidth_hz = parts[1];
    tone.amplitude = parts[2];

    std::stringstream chan_stream(chans);
    std::string chunk;
    while (std::getline(chan_stream, chunk, ',')) {
      chunk = trim(chunk);
      const auto dash = chunk.find('-');
      const auto parse_chan = [&](const std::string& s) {
        int v = 0;
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size()) {
          fail(errc::config, where + ": '" + s + "' is not a channel number");
        }
        return v;
      };
      if (dash == std::string::npos) {
        tone.channels.push_back(parse_chan(chunk));
      } else {
        const int lo = parse_chan(trim(chunk.substr(0, dash)));
        const int hi = parse_chan(trim(chunk.substr(dash + 1)));
        if (hi < lo) fail(errc::config, where + ": reversed channel range");
        for (int c = lo; c <= hi; ++c) tone.channels.push_back(c);
      }
    }
    tones.push_back(std::move(tone));
  }
  return tones;
}

}  // namespace

std::optional<std::uint64_t> seed_from_env() {
  const char* env = std::getenv(kSeedEnvVar);
  if (env == nullptr || *env == '\0') return std::nullopt;
  std::uint64_t v = 0;
  const char* end = env + std::string_view(env).size();
  const auto [p, ec] = std::from_chars(env, end, v);
  if (ec != std::errc{} || p != end) {
    fail(errc::config, std::string(kSeedEnvVar) + " is not an unsigned integer");
  }
  return v;
}

DtSvmConfig PipelineConfig::dtsvm_config() const {
  DtSvmConfig config;
  config.metric = metric;
  config.c_penalty = svm_c;
  config.sigma = svm_sigma;
  config.tol = svm_tol;
  config.max_passes = svm_max_passes;
  config.seed = seed;
  return config;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  KeyValueFile kv(path);
  PipelineConfig config;

  config.data_dir = kv.get_string("data_dir", "");
  config.output_dir = kv.get_string("output_dir", "");
  config.bandpass.low_cut_hz = kv.get_double("bandpass_low_hz", config.bandpass.low_cut_hz);
  config.bandpass.high_cut_hz = kv.get_double("bandpass_high_hz", config.bandpass.high_cut_hz);
  config.bandpass.order = static_cast<int>(kv.get_int("bandpass_order", config.bandpass.order));
  config.bandpass.sample_rate_hz =
      kv.get_double("sample_rate_hz", config.bandpass.sample_rate_hz);
  config.split.dropped_trials =
      kv.get_int_set("split_dropped_trials", config.split.dropped_trials);
  config.split.test_trial =
      static_cast<int>(kv.get_int("split_test_trial", config.split.test_trial));
  config.split.n_prime = static_cast<int>(kv.get_int("split_n_prime", config.split.n_prime));
  config.metric = parse_metric(kv.get_string("metric", "euclidean"));
  config.svm_c = kv.get_double("svm_c", config.svm_c);
  const std::string sigma = kv.get_string("svm_sigma", "median");
  if (sigma == "median") {
    config.svm_sigma.reset();
  } else {
    double v = 0;
    const auto [p, ec] = std::from_chars(sigma.data(), sigma.data() + sigma.size(), v);
    if (ec != std::errc{} || p != sigma.data() + sigma.size() || !(v > 0)) {
      fail(errc::config, "svm_sigma must be 'median' or a positive number");
    }
    config.svm_sigma = v;
  }
  config.svm_tol = kv.get_double("svm_tol", config.svm_tol);
  config.svm_max_passes =
      static_cast<int>(kv.get_int("svm_max_passes", config.svm_max_passes));
  config.seed = kv.has("seed") ? kv.get_uint("seed", 0) : env_seed_or(0);
  config.split.shuffle_seed = config.seed;

  kv.reject_unknown();

  if (!(config.svm_c > 0)) fail(errc::config, "svm_c must be positive");
  if (!(config.svm_tol > 0)) fail(errc::config, "svm_tol must be positive");
  if (config.svm_max_passes < 1) fail(errc::config, "svm_max_passes must be >= 1");
  for (int t : config.split.dropped_trials) {
    if (t < 1 || t > kTrialsPerSession) {
      fail(errc::config, "dropped trial " + std::to_string(t) + " outside 1..10");
    }
  }
  if (config.split.test_trial < 1 || config.split.test_trial > kTrialsPerSession) {
    fail(errc::config, "test trial outside 1..10");
  }
  if (config.split.dropped_trials.count(config.split.test_trial)) {
    fail(errc::config, "test trial is in the dropped set");
  }
  if (config.split.n_prime < 0) fail(errc::config, "split_n_prime must be >= 0");
  design_bandpass(config.bandpass);  // validates the filter spec eagerly
  return config;
}

void save_pipeline_config(const std::filesystem::path& path,
                          const PipelineConfig& config) {
  std::string out;
  out += "data_dir = " + config.data_dir.string() + "\n";
  out += "output_dir = " + config.output_dir.string() + "\n";
  out += "bandpass_low_hz = " + format_double(config.bandpass.low_cut_hz) + "\n";
  out += "bandpass_high_hz = " + format_double(config.bandpass.high_cut_hz) + "\n";
  out += "bandpass_order = " + std::to_string(config.bandpass.order) + "\n";
  out += "sample_rate_hz = " + format_double(config.bandpass.sample_rate_hz) + "\n";
  out += "split_dropped_trials = ";
  bool first = true;
  for (int t : config.split.dropped_trials) {
    if (!first) out += ",";
    first = false;
    out += std::to_string(t);
  }
  out += "\n";
  out += "split_test_trial = " + std::to_string(config.split.test_trial) + "\n";
  out += "split_n_prime = " + std::to_string(config.split.n_prime) + "\n";
  out += "metric = " + metric_name(config.metric) + "\n";
  out += "svm_c = " + format_double(config.svm_c) + "\n";
  out += "svm_sigma = " +
         (config.svm_sigma ? format_double(*config.svm_sigma) : std::string("median")) +
         "\n";
  out += "svm_tol = " + format_double(config.svm_tol) + "\n";
  out += "svm_max_passes = " + std::to_string(config.svm_max_passes) + "\n";
  out += "seed = " + std::to_string(config.seed) + "\n";
  write_file_atomic(path, out);
}

SynthSpec load_synth_spec(const std::filesystem::path& path) {
  KeyValueFile kv(path);
  SynthSpec spec = default_synth_spec();
  spec.n_subjects = static_cast<int>(kv.get_int("n_subjects", spec.n_subjects));
  spec.sample_rate_hz = kv.get_double("sample_rate_hz", spec.sample_rate_hz);
  spec.noise_sigma = kv.get_double("noise_sigma", spec.noise_sigma);
  spec.subject_variability =
      kv.get_double("subject_variability", spec.subject_variability);
  spec.seed = kv.has("seed") ? kv.get_uint("seed", 0) : env_seed_or(0);
  for (int cls = 1; cls <= kNumClasses; ++cls) {
    const std::string key = "class" + std::to_string(cls) + "_tones";
    if (kv.has(key)) {
      spec.class_signatures[static_cast<std::size_t>(cls - 1)] =
          parse_tones(kv.get_string(key, ""), path.filename().string() + ": " + key);
    }
  }
  kv.reject_unknown();
  validate_synth_spec(spec);
  return spec;
}

void save_synth_spec(const std::filesystem::path& path, const SynthSpec& spec) {
  std::string out;
  out += "n_subjects = " + std::to_string(spec.n_subjects) + "\n";
  out += "sample_rate_hz = " + format_double(spec.sample_rate_hz) + "\n";
  out += "noise_sigma = " + format_double(spec.noise_sigma) + "\n";
  out += "subject_variability = " + format_double(spec.subject_variability) + "\n";
  out += "seed = " + std::to_string(spec.seed) + "\n";
  for (int cls = 1; cls <= kNumClasses; ++cls) {
    out += "class" + std::to_string(cls) + "_tones = " +
           tones_to_string(spec.class_signatures[static_cast<std::size_t>(cls - 1)]) +
           "\n";
  }
  write_file_atomic(path, out);
}

}  // namespace vowelbci
