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

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "topoclaw/capability.hpp"
#include "topoclaw/rational.hpp"

namespace topoclaw {

enum class EffectKind { read, write, exec, send, noop };

std::string_view to_string(EffectKind kind);
EffectKind effect_kind_from_string(std::string_view text);

// `target` is a path for read/write, a command line for exec, a channel id
// for send and empty for noop. Relative read/write paths are resolved
// against the executing node's workspace once the action is placed.
struct EffectDescriptor {
  EffectKind kind = EffectKind::noop;
  std::string target;

  bool operator==(const EffectDescriptor&) const = default;
};

struct ActionSpec {
  std::string action_id;
  std::string verb;
  CapabilitySet required_capabilities;
  EffectDescriptor effect;
  std::map<std::string, std::string> params;

  bool operator==(const ActionSpec&) const = default;
};

struct DependencyEdge {
  std::string from_action;
  std::string to_action;
  Rational payload_units{0};

  bool operator==(const DependencyEdge&) const = default;
};

struct TaskDag {
  std::vector<ActionSpec> actions;
  std::vector<DependencyEdge> deps;

  const ActionSpec* find_action(std::string_view action_id) const;
  const ActionSpec& action(std::string_view action_id) const;

  bool operator==(const TaskDag&) const = default;
};

struct IntentStep {
  std::string id;
  std::string verb;
  std::map<std::string, std::string> args;
  std::vector<std::string> needs;
  Rational payload_units{0};

  bool operator==(const IntentStep&) const = default;
};

struct IntentScript {
  std::string intent_id;
  std::vector<IntentStep> steps;

  bool operator==(const IntentScript&) const = default;
};

struct VerbEntry {
  CapabilitySet required_capabilities;
  // Target may contain "{arg}" placeholders filled from the step's args.
  EffectDescriptor effect_template;

  bool operator==(const VerbEntry&) const = default;
};

using VerbTable = std::map<std::string, VerbEntry, std::less<>>;

// Throws Error(schema/cycle/duplicate/unknown_id) on the first violated
// invariant: unique ids, resolvable endpoints, no self-loops, acyclic,
// non-empty capabilities unless noop, non-empty exec target.
void validate_dag(const TaskDag& dag);

// One action per step, edges exactly the "needs" relation. Errors:
// unknown_verb, forward_reference, missing_field (placeholder without arg).
TaskDag compile_intent(const IntentScript& script, const VerbTable& verbs);

// Kahn's algorithm; ties go to the smallest action id. Throws Error(cycle)
// listing the vertices of one cycle.
std::vector<std::string> topo_order(const TaskDag& dag);

// Canonical bytes of an action used as an event payload.
std::string canonical_action_bytes(const ActionSpec& action);

nlohmann::json action_to_json(const ActionSpec& action);
ActionSpec action_from_json(const nlohmann::json& j);
nlohmann::json dag_to_json(const TaskDag& dag);
TaskDag dag_from_json(const nlohmann::json& j);
nlohmann::json intent_to_json(const IntentScript& script);
IntentScript intent_from_json(const nlohmann::json& j);
nlohmann::json verb_table_to_json(const VerbTable& verbs);
VerbTable verb_table_from_json(const nlohmann::json& j);

}  // namespace topoclaw
