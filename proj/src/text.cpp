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

#include "homodyne/text.hpp"

#include <charconv>
#include <cmath>

#include "homodyne/errors.hpp"

namespace homodyne::text {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        fail(ErrorKind::Io, "cannot parse number \"" + std::string(s) + "\"");
    }
    return v;
}

std::uint64_t parse_u64(std::string_view s) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        fail(ErrorKind::Io, "cannot parse unsigned integer \"" + std::string(s) + "\"");
    }
    return v;
}

long long parse_i64(std::string_view s) {
    long long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        fail(ErrorKind::Io, "cannot parse integer \"" + std::string(s) + "\"");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::map<std::string, std::string> parse_metadata(std::string_view line) {
    std::map<std::string, std::string> meta;
    if (line.empty() || line.front() != '#') return meta;
    line.remove_prefix(1);
    for (std::string_view tok : split(line, ' ')) {
        const std::size_t eq = tok.find('=');
        if (tok.empty() || eq == std::string_view::npos || eq == 0) continue;
        meta.emplace(std::string(tok.substr(0, eq)), std::string(tok.substr(eq + 1)));
    }
    return meta;
}

std::vector<std::vector<std::string>> read_csv(std::istream& in, std::string_view expected_header,
                                               std::map<std::string, std::string>& meta) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool header_seen = false;
    std::size_t columns = split(expected_header, ',').size();
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            for (auto& [k, v] : parse_metadata(line)) meta[k] = v;
            continue;
        }
        if (!header_seen) {
            if (line != expected_header) {
                fail(ErrorKind::Io, "expected CSV header \"" + std::string(expected_header) + "\", got \"" + line + "\"");
            }
            header_seen = true;
            continue;
        }
        auto fields = split(line, ',');
        if (fields.size() != columns) fail(ErrorKind::Io, "CSV row has wrong number of fields: \"" + line + "\"");
        rows.emplace_back(fields.begin(), fields.end());
    }
    if (!header_seen) fail(ErrorKind::Io, "CSV header \"" + std::string(expected_header) + "\" not found");
    return rows;
}

}  // namespace homodyne::text
