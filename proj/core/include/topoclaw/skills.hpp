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

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "topoclaw/capability.hpp"
#include "topoclaw/taskgraph.hpp"
#include "topoclaw/topology.hpp"

namespace topoclaw {

enum class SkillCategory { utility, cross_device, social, system };
enum class RequiredEnv { pc, mobile, any };

std::string_view to_string(SkillCategory c);
SkillCategory skill_category_from_string(std::string_view text);
std::string_view to_string(RequiredEnv e);
RequiredEnv required_env_from_string(std::string_view text);

bool env_matches(RequiredEnv required, EnvironmentClass actual);

struct SkillManifest {
  std::string name;
  std::string version;
  std::string description;
  SkillCategory category = SkillCategory::utility;
  RequiredEnv required_env = RequiredEnv::any;
  CapabilitySet required_capabilities;
  std::string verb;
  // Stub handler id, "builtin.<name>".
  std::string entry;

  bool operator==(const SkillManifest&) const = default;
};

SkillManifest manifest_from_json(const nlohmann::json& j);
nlohmann::json manifest_to_json(const SkillManifest& m);
SkillManifest load_manifest(const std::filesystem::path& file);

// Verb every table carries regardless of installed skills.
inline constexpr std::string_view kNoopVerb = "noop";

class SkillRegistry {
 public:
  // Throws Error(duplicate) on a repeated (name, version) or verb, and
  // Error(configuration) when the entry names no known handler.
  void add(SkillManifest m);

  // Reads every `<dir>/<skill>/manifest.json`.
  static SkillRegistry load_directory(const std::filesystem::path& dir);

  // Ordered by (name, version).
  const std::vector<SkillManifest>& skills() const { return skills_; }
  const SkillManifest* find(std::string_view name) const;
  const SkillManifest* find_by_verb(std::string_view verb) const;

  // Verb table for the intent compiler, including the noop verb.
  VerbTable verb_table() const;

 private:
  std::vector<SkillManifest> skills_;
};

// Smallest node id whose environment and profile satisfy the manifest.
// Throws Error(unmet_constraint).
std::string resolve_skill_node(const SkillManifest& m, const DeviceGraph& g);

struct AuthorRef {
  std::string user_id;
  std::string display_name;
  bool operator==(const AuthorRef&) const = default;
};

struct AssistantTemplate {
  std::string template_id;
  std::string system_prompt;
  std::vector<std::string> skill_names;
  std::map<std::string, std::string> behavioral_defaults;
  RequiredEnv platform_constraints = RequiredEnv::any;
  AuthorRef author;
  std::string use_case;

  bool operator==(const AssistantTemplate&) const = default;
};

nlohmann::json template_to_json(const AssistantTemplate& t);
AssistantTemplate template_from_json(const nlohmann::json& j);

// Compact JSON with sorted keys; the portable record.
std::string serialize_template(const AssistantTemplate& t);
AssistantTemplate parse_template_record(std::string_view record);

struct BoundAssistant {
  AssistantTemplate source;
  std::string home_node;
  // skill name -> node id
  std::map<std::string, std::string> skill_nodes;
  VerbTable verbs;
};

// Throws Error(unknown_id) for a skill missing from the registry and
// Error(unmet_constraint) when the graph cannot host the template.
BoundAssistant instantiate_template(std::string_view record, const DeviceGraph& g,
                                    const SkillRegistry& registry);
nlohmann::json bound_assistant_to_json(const BoundAssistant& b);

// Side effects available to a handler on its executing node. Paths are
// absolute and already bound to the node's workspace.
class HandlerContext {
 public:
  virtual ~HandlerContext() = default;
  virtual const DeviceNode& node() const = 0;
  virtual const Identity& owner() const = 0;
  virtual std::optional<std::string> read_file(std::string_view path) const = 0;
  // Absolute paths of files under `dir`, ascending.
  virtual std::vector<std::string> list_files(std::string_view dir) const = 0;
  virtual void write_file(std::string_view path, std::string content) = 0;
  virtual void remove_file(std::string_view path) = 0;
  // Posts `text` to a shared space as the owner's twin.
  virtual void emit_message(const std::string& space_id, const std::string& text) = 0;
  // Consolidates a system observation carrying `directive`.
  virtual void remember(const std::string& directive, const std::string& content) = 0;
  // Names of skills visible to the node's runtime.
  virtual std::vector<std::string> skill_names() const = 0;
};

struct HandlerResult {
  std::string summary;
};

struct BuiltinHandler {
  std::string entry;
  EffectDescriptor effect_template;
  std::function<HandlerResult(const ActionSpec&, HandlerContext&)> run;
};

const std::vector<BuiltinHandler>& builtin_handlers();
const BuiltinHandler* find_handler(std::string_view entry);

}  // namespace topoclaw
