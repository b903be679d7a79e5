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

#include "hydraq/kvconfig.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "hydraq/errors.hpp"

namespace hydraq {

std::string_view trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    const auto *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        return std::nullopt;
    }
    return value;
}

std::optional<std::int64_t> parse_int(std::string_view text) {
    text = trim(text);
    std::int64_t value = 0;
    const auto *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        return std::nullopt;
    }
    return value;
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

KvDocument KvDocument::parse(std::string_view text, std::string source) {
    KvDocument doc;
    doc.source_ = std::move(source);
    std::string section;
    doc.values_[section];
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            nl = text.size();
        }
        auto line = trim(text.substr(pos, nl - pos));
        pos = nl + 1;
        ++line_no;
        if (line.empty() || line.front() == '#' || line.front() == ';') {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(doc.source_ + ":" + std::to_string(line_no) +
                                  ": unterminated section header");
            }
            section = std::string(trim(line.substr(1, line.size() - 2)));
            doc.values_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(doc.source_ + ":" + std::to_string(line_no) +
                              ": expected `key = value`");
        }
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) {
            throw ConfigError(doc.source_ + ":" + std::to_string(line_no) +
                              ": empty key");
        }
        doc.values_[section][key] = std::string(trim(line.substr(eq + 1)));
    }
    return doc;
}

KvDocument KvDocument::load(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(path + ": cannot open config file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

bool KvDocument::has_section(const std::string &section) const {
    return values_.contains(section);
}

bool KvDocument::has(const std::string &section, const std::string &key) const {
    const auto it = values_.find(section);
    return it != values_.end() && it->second.contains(key);
}

std::string KvDocument::where(const std::string &section,
                              const std::string &key) const {
    return source_ + ":" + (section.empty() ? key : section + "." + key);
}

std::string KvDocument::get_string(const std::string &section,
                                   const std::string &key) const {
    const auto it = values_.find(section);
    if (it == values_.end() || !it->second.contains(key)) {
        throw ConfigError(where(section, key) + ": missing required field");
    }
    return it->second.at(key);
}

std::string KvDocument::get_string(const std::string &section,
                                   const std::string &key,
                                   const std::string &fallback) const {
    return has(section, key) ? get_string(section, key) : fallback;
}

double KvDocument::get_double(const std::string &section,
                              const std::string &key) const {
    const auto text = get_string(section, key);
    const auto value = parse_double(text);
    if (!value) {
        throw ConfigError(where(section, key) + ": expected a number, got '" +
                          text + "'");
    }
    return *value;
}

double KvDocument::get_double(const std::string &section,
                              const std::string &key, double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

std::int64_t KvDocument::get_int(const std::string &section,
                                 const std::string &key) const {
    const auto text = get_string(section, key);
    const auto value = parse_int(text);
    if (!value) {
        throw ConfigError(where(section, key) +
                          ": expected an integer, got '" + text + "'");
    }
    return *value;
}

std::int64_t KvDocument::get_int(const std::string &section,
                                 const std::string &key,
                                 std::int64_t fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

std::vector<std::string> KvDocument::get_list(const std::string &section,
                                              const std::string &key) const {
    const auto text = get_string(section, key);
    std::vector<std::string> items;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string::npos) {
            comma = text.size();
        }
        const auto item = trim(std::string_view(text).substr(pos, comma - pos));
        if (!item.empty()) {
            items.emplace_back(item);
        }
        pos = comma + 1;
    }
    return items;
}

std::vector<std::string>
KvDocument::get_list(const std::string &section, const std::string &key,
                     const std::vector<std::string> &fallback) const {
    return has(section, key) ? get_list(section, key) : fallback;
}

std::vector<std::string>
KvDocument::unknown_keys(const std::string &section,
                         const std::vector<std::string> &allowed) const {
    std::vector<std::string> out;
    const auto it = values_.find(section);
    if (it == values_.end()) {
        return out;
    }
    for (const auto &[key, value] : it->second) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            out.push_back(key);
        }
    }
    return out;
}

std::vector<std::string> KvDocument::sections() const {
    std::vector<std::string> out;
    for (const auto &[name, body] : values_) {
        out.push_back(name);
    }
    return out;
}

} // namespace hydraq
