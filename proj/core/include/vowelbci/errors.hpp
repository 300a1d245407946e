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

#ifndef VOWELBCI_ERRORS_HPP_
#define VOWELBCI_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace vowelbci {

/// Coarse failure categories. The CLI prints them as a machine-parseable
/// prefix (`error:<category>: ...`) on stderr, one line per failure.
enum class errc {
  usage,    // bad command line
  config,   // invalid configuration value or file
  parse,    // malformed input file (session CSV, model, report)
  data,     // structurally valid input that violates a precondition
  model,    // model/corpus mismatch or unusable model
  io,       // filesystem failure
  numeric,  // numerical breakdown (should not happen on valid input)
};

const char* category_name(errc code) noexcept;

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  errc code() const noexcept { return code_; }
  const char* category() const noexcept { return category_name(code_); }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
  throw error(code, what);
}

}  // namespace vowelbci

#endif  // VOWELBCI_ERRORS_HPP_
