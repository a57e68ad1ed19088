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

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace topoclaw {

struct Verdict {
  bool allow = true;
  std::string reason;
  // Ordered evidence shown in decisions, e.g. the sets that fed a privilege
  // intersection.
  std::vector<std::pair<std::string, std::string>> details;

  static Verdict allowed() { return {}; }
  static Verdict denied(std::string reason) { return {false, std::move(reason), {}}; }

  Verdict& with(std::string key, std::string value) {
    details.emplace_back(std::move(key), std::move(value));
    return *this;
  }

  bool operator==(const Verdict&) const = default;
};

nlohmann::json verdict_to_json(const Verdict& v);
Verdict verdict_from_json(const nlohmann::json& j);

}  // namespace topoclaw
