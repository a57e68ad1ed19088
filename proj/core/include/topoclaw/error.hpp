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

#include <stdexcept>
#include <string>
#include <string_view>

namespace topoclaw {

enum class ErrorKind {
  invalid_argument,
  unknown_id,
  parse,
  schema,
  cycle,
  unknown_verb,
  forward_reference,
  infeasible,
  unreachable,
  search_guard,
  unknown_key,
  invalid_parent,
  not_member,
  unverifiable,
  configuration,
  timestamp_regression,
  sandbox_denied,
  cron_syntax,
  cron_range,
  no_next_fire,
  missing_field,
  duplicate,
  bad_enum,
  unmet_constraint,
  mode_mismatch,
  scenario,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace topoclaw
