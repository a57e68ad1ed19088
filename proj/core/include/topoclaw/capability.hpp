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

#include <set>
#include <string>
#include <string_view>

namespace topoclaw {

// Dot-namespaced capability identifiers ("fs.search", "sms.send").
using CapabilitySet = std::set<std::string>;

// Lowercase tokens of [a-z0-9_] joined by single dots.
bool is_valid_capability_id(std::string_view id);

// Throws Error(invalid_argument) naming the first malformed id.
void check_capability_ids(const CapabilitySet& ids, std::string_view what);

bool is_subset(const CapabilitySet& sub, const CapabilitySet& super);

CapabilitySet intersect(const CapabilitySet& a, const CapabilitySet& b);

CapabilitySet difference(const CapabilitySet& a, const CapabilitySet& b);

// Comma-joined, sorted (sets are already ordered).
std::string join(const CapabilitySet& ids);

// Privileges share the capability namespace.
struct PrivilegeSet {
  CapabilitySet privileges;

  bool operator==(const PrivilegeSet&) const = default;
};

}  // namespace topoclaw
