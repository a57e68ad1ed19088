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

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "topoclaw/governance.hpp"

namespace topoclaw {

enum class OutcomeStatus { executed, denied, skipped, error };

std::string_view to_string(OutcomeStatus status);

// Result of pushing one action (or one failed submission, when
// `action_id` is empty) through the pipeline.
struct ActionOutcome {
  std::string ref;
  std::string action_id;
  std::string node_id;
  OutcomeStatus status = OutcomeStatus::error;
  std::optional<PolicyDecision> hub;
  std::optional<PolicyDecision> edge;
  std::string detail;
};

nlohmann::json outcome_to_json(const ActionOutcome& o);

}  // namespace topoclaw
