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

#include "vowelbci/errors.hpp"

namespace vowelbci {

const char* category_name(errc code) noexcept {
  switch (code) {
    case errc::usage:
      return "usage";
    case errc::config:
      return "config";
    case errc::parse:
      return "parse";
    case errc::data:
      return "data";
    case errc::model:
      return "model";
    case errc::io:
      return "io";
    case errc::numeric:
      return "numeric";
  }
  return "unknown";
}

}  // namespace vowelbci
