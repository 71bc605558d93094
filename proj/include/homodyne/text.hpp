// Copyright 2026 The Homodyne Noise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Text helpers shared by the CSV writers and readers.

#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace homodyne::text {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

double parse_double(std::string_view s);
std::uint64_t parse_u64(std::string_view s);
long long parse_i64(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);

/// Parses a `# key=value key=value` comment line (without a JSON value
/// containing spaces). Returns an empty map for other lines.
std::map<std::string, std::string> parse_metadata(std::string_view line);

/// Reads a CSV body: skips `#` lines, checks the header, and returns the rows
/// split into fields. Metadata from comment lines is merged into `meta`.
std::vector<std::vector<std::string>> read_csv(std::istream& in, std::string_view expected_header,
                                               std::map<std::string, std::string>& meta);

}  // namespace homodyne::text
