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

#ifndef VOWELBCI_SRC_IO_UTIL_HPP_
#define VOWELBCI_SRC_IO_UTIL_HPP_

#include <filesystem>
#include <string>

namespace vowelbci::detail {

/// Write via a sibling `.tmp` file and rename, so readers never observe a
/// partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace vowelbci::detail

#endif  // VOWELBCI_SRC_IO_UTIL_HPP_
