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

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "topoclaw/cron.hpp"
#include "topoclaw/governance.hpp"
#include "topoclaw/placement.hpp"
#include "topoclaw/taskgraph.hpp"
#include "topoclaw/topology.hpp"

namespace topoclaw {

enum class DeploymentMode { single_node, social_only, full_dual };

std::string_view to_string(DeploymentMode mode);
DeploymentMode deployment_mode_from_string(std::string_view text);

enum class StimulusKind { intent, message, clock_advance };

std::string_view to_string(StimulusKind kind);

struct Stimulus {
  SimTime at = 0;
  std::string actor;
  StimulusKind kind = StimulusKind::intent;

  // intent
  IntentScript intent;
  // Set when `actor` asks another user's twin to act: that user's twin
  // runs the intent with origin external over `channel`.
  std::optional<std::string> target_user;
  std::optional<std::string> channel;
  std::optional<Solver> solver;

  // message
  std::string space;
  std::string text;

  // clock_advance
  SimTime to = 0;
};

struct Scenario {
  std::string scenario_id;
  std::string description;
  std::optional<DeploymentMode> mode;
  // user -> that user's devices. Node ids are unique across users.
  std::map<std::string, DeviceGraph> devices;
  SocialGraph social;
  // key_ref -> shared secret
  std::map<std::string, std::string> keys;
  PolicyConfig policy;
  std::size_t memory_capacity = 32;
  // node -> relative path -> initial content
  std::map<std::string, std::map<std::string, std::string>> workspaces;
  std::vector<Stimulus> script;

  // All users' devices in one graph.
  DeviceGraph combined_graph() const;
  // User owning `node_id`, or nullptr.
  const std::string* owner_of(std::string_view node_id) const;
};

// Throws Error(schema / missing_field / ...) naming the problem, or
// Error(scenario) for cross-reference violations.
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::filesystem::path& file);

// Throws Error(mode_mismatch) when the scenario cannot run in `mode`.
void check_mode(const Scenario& s, DeploymentMode mode);

// Accepts integer milliseconds or an ISO-8601 UTC string.
SimTime time_from_json(const nlohmann::json& j);

}  // namespace topoclaw
