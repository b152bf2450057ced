// Copyright 2026 The Authors.
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

#include "submod/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "submod/core.hpp"

namespace submod {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::string unquote(const std::string& raw, const std::string& where) {
  if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
    return raw.substr(1, raw.size() - 2);
  }
  if (!raw.empty() && (raw.front() == '"' || raw.back() == '"')) {
    throw LoadError(where + ": unbalanced quotes in '" + raw + "'");
  }
  return raw;
}

std::vector<std::string> split_array(const std::string& body,
                                     const std::string& where) {
  std::vector<std::string> items;
  std::string current;
  bool quoted = false;
  for (char c : body) {
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      items.push_back(unquote(trim(current), where));
      current.clear();
    } else {
      current += c;
    }
  }
  const std::string last = trim(current);
  if (!last.empty()) items.push_back(unquote(last, where));
  if (quoted) throw LoadError(where + ": unterminated quote in array");
  return items;
}

double parse_double(const std::string& raw, const std::string& where) {
  double value = 0.0;
  const char* begin = raw.data();
  const char* end = begin + raw.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw LoadError(where + ": expected a number, got '" + raw + "'");
  }
  return value;
}

std::int64_t parse_int(const std::string& raw, const std::string& where) {
  std::int64_t value = 0;
  const char* begin = raw.data();
  const char* end = begin + raw.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw LoadError(where + ": expected an integer, got '" + raw + "'");
  }
  return value;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str(), path);
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text,
                                            const std::string& origin) {
  KeyValueConfig config;
  config.origin_ = origin;
  std::istringstream stream(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const std::string where = origin + ":" + std::to_string(line_no);
    const std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    if (body.front() == '[') {
      throw LoadError(where + ": section headers are not supported");
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw LoadError(where + ": expected 'key = value'");
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw LoadError(where + ": empty key");
    if (config.entries_.count(key)) {
      throw LoadError(where + ": duplicate key '" + key + "'");
    }
    Entry entry;
    if (!value.empty() && value.front() == '[') {
      if (value.back() != ']') {
        throw LoadError(where + ": array must close on the same line");
      }
      entry.is_array = true;
      entry.items = split_array(value.substr(1, value.size() - 2), where);
    } else {
      entry.items.push_back(unquote(value, where));
    }
    config.entries_.emplace(key, std::move(entry));
  }
  return config;
}

bool KeyValueConfig::has(const std::string& key) const {
  return entries_.count(key) != 0;
}

const KeyValueConfig::Entry& KeyValueConfig::require(const std::string& key,
                                                     bool array) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) {
    throw LoadError(origin_ + ": missing required key '" + key + "'");
  }
  if (it->second.is_array != array) {
    throw LoadError(origin_ + ": key '" + key + "' has the wrong shape (" +
                    (array ? "expected array" : "expected scalar") + ")");
  }
  it->second.used = true;
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key) const {
  return require(key, false).items.front();
}

std::string KeyValueConfig::get_string_or(const std::string& key,
                                          const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

std::int64_t KeyValueConfig::get_int(const std::string& key) const {
  return parse_int(require(key, false).items.front(), origin_ + " key " + key);
}

std::int64_t KeyValueConfig::get_int_or(const std::string& key,
                                        std::int64_t fallback) const {
  return has(key) ? get_int(key) : fallback;
}

double KeyValueConfig::get_double(const std::string& key) const {
  return parse_double(require(key, false).items.front(),
                      origin_ + " key " + key);
}

double KeyValueConfig::get_double_or(const std::string& key,
                                     double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::vector<std::string> KeyValueConfig::get_string_array(
    const std::string& key) const {
  return require(key, true).items;
}

std::vector<double> KeyValueConfig::get_double_array(
    const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : require(key, true).items) {
    out.push_back(parse_double(item, origin_ + " key " + key));
  }
  return out;
}

std::vector<std::int64_t> KeyValueConfig::get_int_array(
    const std::string& key) const {
  std::vector<std::int64_t> out;
  for (const auto& item : require(key, true).items) {
    out.push_back(parse_int(item, origin_ + " key " + key));
  }
  return out;
}

std::optional<std::vector<double>> KeyValueConfig::get_double_array_optional(
    const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return get_double_array(key);
}

std::vector<std::string> KeyValueConfig::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [key, entry] : entries_) {
    if (!entry.used) out.push_back(key);
  }
  return out;
}

}  // namespace submod
