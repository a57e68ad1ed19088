// Copyright 2026 The TopoClaw Authors
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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "topoclaw/capability.hpp"
#include "topoclaw/error.hpp"

namespace topoclaw::detail {

// Reads a JSON object field by field and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const nlohmann::json& j, std::string context)
      : json_(j), context_(std::move(context)) {
    if (!j.is_object()) {
      throw Error(ErrorKind::schema, context_ + ": expected a JSON object");
    }
  }

  const nlohmann::json& required(const std::string& key) {
    seen_.insert(key);
    auto it = json_.find(key);
    if (it == json_.end()) {
      throw Error(ErrorKind::missing_field,
                  context_ + ": missing field \"" + key + "\"");
    }
    return *it;
  }

  const nlohmann::json* optional(const std::string& key) {
    seen_.insert(key);
    auto it = json_.find(key);
    return it == json_.end() ? nullptr : &*it;
  }

  std::string string(const std::string& key) {
    return as_string(required(key), key);
  }

  std::string string_or(const std::string& key, std::string fallback) {
    const auto* j = optional(key);
    return j ? as_string(*j, key) : fallback;
  }

  bool boolean_or(const std::string& key, bool fallback) {
    const auto* j = optional(key);
    if (!j) return fallback;
    if (!j->is_boolean()) type_error(key, "boolean");
    return j->get<bool>();
  }

  std::int64_t integer(const std::string& key) {
    const auto& j = required(key);
    if (!j.is_number_integer()) type_error(key, "integer");
    return j.get<std::int64_t>();
  }

  std::vector<std::string> string_list(const std::string& key) {
    return as_string_list(required(key), key);
  }

  std::vector<std::string> string_list_or_empty(const std::string& key) {
    const auto* j = optional(key);
    return j ? as_string_list(*j, key) : std::vector<std::string>{};
  }

  CapabilitySet string_set(const std::string& key) {
    auto list = string_list(key);
    return {list.begin(), list.end()};
  }

  std::map<std::string, std::string> string_map_or_empty(const std::string& key) {
    std::map<std::string, std::string> out;
    const auto* j = optional(key);
    if (!j) return out;
    if (!j->is_object()) type_error(key, "object of strings");
    for (auto it = j->begin(); it != j->end(); ++it) {
      if (!it.value().is_string()) type_error(key + "." + it.key(), "string");
      out.emplace(it.key(), it.value().get<std::string>());
    }
    return out;
  }

  const std::string& context() const { return context_; }

  // Rejects any key that was never requested.
  void finish() const {
    for (auto it = json_.begin(); it != json_.end(); ++it) {
      if (!seen_.count(it.key())) {
        throw Error(ErrorKind::schema,
                    context_ + ": unknown key \"" + it.key() + "\"");
      }
    }
  }

 private:
  [[noreturn]] void type_error(const std::string& key, const char* type) const {
    throw Error(ErrorKind::schema,
                context_ + ": field \"" + key + "\" must be " + type);
  }

  std::string as_string(const nlohmann::json& j, const std::string& key) const {
    if (!j.is_string()) type_error(key, "a string");
    return j.get<std::string>();
  }

  std::vector<std::string> as_string_list(const nlohmann::json& j,
                                          const std::string& key) const {
    if (!j.is_array()) type_error(key, "an array of strings");
    std::vector<std::string> out;
    for (const auto& item : j) {
      if (!item.is_string()) type_error(key, "an array of strings");
      out.push_back(item.get<std::string>());
    }
    return out;
  }

  const nlohmann::json& json_;
  std::string context_;
  std::set<std::string> seen_;
};

inline nlohmann::json parse_json_text(const std::string& text,
                                      const std::string& context) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse, context + ": " + e.what());
  }
}

}  // namespace topoclaw::detail
