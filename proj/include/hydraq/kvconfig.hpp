// Copyright 2026 The hydraq Authors
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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hydraq {

/**
 * Plain-text key-value document with optional `[section]` headers.
 *
 *     # comment
 *     [bench]
 *     seed = 7
 *     tasks = usg, conductivity
 *
 * Keys before the first header live in the unnamed section "". Lookups of
 * missing or malformed values throw ConfigError naming `source:section.key`.
 */
class KvDocument {
  public:
    static KvDocument parse(std::string_view text,
                            std::string source = "<memory>");
    static KvDocument load(const std::string &path);

    [[nodiscard]] bool has_section(const std::string &section) const;
    [[nodiscard]] bool has(const std::string &section,
                           const std::string &key) const;

    [[nodiscard]] std::string get_string(const std::string &section,
                                         const std::string &key) const;
    [[nodiscard]] std::string get_string(const std::string &section,
                                         const std::string &key,
                                         const std::string &fallback) const;
    [[nodiscard]] double get_double(const std::string &section,
                                    const std::string &key) const;
    [[nodiscard]] double get_double(const std::string &section,
                                    const std::string &key,
                                    double fallback) const;
    [[nodiscard]] std::int64_t get_int(const std::string &section,
                                       const std::string &key) const;
    [[nodiscard]] std::int64_t get_int(const std::string &section,
                                       const std::string &key,
                                       std::int64_t fallback) const;
    /// Comma-separated list, items trimmed, empty items dropped.
    [[nodiscard]] std::vector<std::string>
    get_list(const std::string &section, const std::string &key) const;
    [[nodiscard]] std::vector<std::string>
    get_list(const std::string &section, const std::string &key,
             const std::vector<std::string> &fallback) const;

    /// Keys in `section` that are not in `allowed` (typo detection).
    [[nodiscard]] std::vector<std::string>
    unknown_keys(const std::string &section,
                 const std::vector<std::string> &allowed) const;
    [[nodiscard]] std::vector<std::string> sections() const;

    [[nodiscard]] const std::string &source() const noexcept { return source_; }

    /// "source:section.key", used in error messages.
    [[nodiscard]] std::string where(const std::string &section,
                                    const std::string &key) const;

  private:
    std::string source_;
    std::map<std::string, std::map<std::string, std::string>> values_;
};

std::string_view trim(std::string_view text);

/// Locale-independent number parsing; nullopt unless the whole string parses.
std::optional<double> parse_double(std::string_view text);
std::optional<std::int64_t> parse_int(std::string_view text);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

} // namespace hydraq
