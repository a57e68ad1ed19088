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

#include "topoclaw/capability.hpp"

#include <algorithm>
#include <iterator>

#include "topoclaw/error.hpp"

namespace topoclaw {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::unknown_id: return "unknown_id";
    case ErrorKind::parse: return "parse";
    case ErrorKind::schema: return "schema";
    case ErrorKind::cycle: return "cycle";
    case ErrorKind::unknown_verb: return "unknown_verb";
    case ErrorKind::forward_reference: return "forward_reference";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::unreachable: return "unreachable";
    case ErrorKind::search_guard: return "search_guard";
    case ErrorKind::unknown_key: return "unknown_key";
    case ErrorKind::invalid_parent: return "invalid_parent";
    case ErrorKind::not_member: return "not_member";
    case ErrorKind::unverifiable: return "unverifiable";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::timestamp_regression: return "timestamp_regression";
    case ErrorKind::sandbox_denied: return "sandbox_denied";
    case ErrorKind::cron_syntax: return "cron_syntax";
    case ErrorKind::cron_range: return "cron_range";
    case ErrorKind::no_next_fire: return "no_next_fire";
    case ErrorKind::missing_field: return "missing_field";
    case ErrorKind::duplicate: return "duplicate";
    case ErrorKind::bad_enum: return "bad_enum";
    case ErrorKind::unmet_constraint: return "unmet_constraint";
    case ErrorKind::mode_mismatch: return "mode_mismatch";
    case ErrorKind::scenario: return "scenario";
  }
  return "unknown";
}

bool is_valid_capability_id(std::string_view id) {
  if (id.empty() || id.front() == '.' || id.back() == '.') return false;
  char prev = '.';
  for (char c : id) {
    const bool token_char =
        (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    if (c == '.') {
      if (prev == '.') return false;
    } else if (!token_char) {
      return false;
    }
    prev = c;
  }
  return true;
}

void check_capability_ids(const CapabilitySet& ids, std::string_view what) {
  for (const auto& id : ids) {
    if (!is_valid_capability_id(id)) {
      throw Error(ErrorKind::invalid_argument,
                  "malformed capability id \"" + id + "\" in " +
                      std::string(what));
    }
  }
}

bool is_subset(const CapabilitySet& sub, const CapabilitySet& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

CapabilitySet intersect(const CapabilitySet& a, const CapabilitySet& b) {
  CapabilitySet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.end()));
  return out;
}

CapabilitySet difference(const CapabilitySet& a, const CapabilitySet& b) {
  CapabilitySet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::inserter(out, out.end()));
  return out;
}

std::string join(const CapabilitySet& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ',';
    out += id;
  }
  return out;
}

}  // namespace topoclaw
