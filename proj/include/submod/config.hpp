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

//
// Flat TOML-style `key = value` configuration files, shared by the sweep
// spec and the scenario sidecar. Supported values: bare or double-quoted
// scalars and single-level arrays `[a, b, c]`. `#` starts a comment outside
// quotes. Duplicate keys are an error; section headers are not supported.

#ifndef SUBMOD_CONFIG_HPP_
#define SUBMOD_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace submod {

class KeyValueConfig {
 public:
  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_string(const std::string& text,
                                     const std::string& origin = "<string>");

  bool has(const std::string& key) const;

  // Typed getters throw LoadError naming the key and file on a missing
  // required key or an unparsable value.
  std::string get_string(const std::string& key) const;
  std::string get_string_or(const std::string& key,
                            const std::string& fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int_or(const std::string& key, std::int64_t fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;

  std::vector<std::string> get_string_array(const std::string& key) const;
  std::vector<double> get_double_array(const std::string& key) const;
  std::vector<std::int64_t> get_int_array(const std::string& key) const;
  std::optional<std::vector<double>> get_double_array_optional(
      const std::string& key) const;

  // Keys never read through a getter; run_sweep uses this to reject typos.
  std::vector<std::string> unused_keys() const;

 private:
  struct Entry {
    std::vector<std::string> items;
    bool is_array = false;
    mutable bool used = false;
  };
  const Entry& require(const std::string& key, bool array) const;

  std::string origin_;
  std::map<std::string, Entry> entries_;
};

}  // namespace submod

#endif  // SUBMOD_CONFIG_HPP_
