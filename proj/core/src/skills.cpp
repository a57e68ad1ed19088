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

#include "topoclaw/skills.hpp"

#include <algorithm>
#include <tuple>

#include "json_reader.hpp"
#include "topoclaw/error.hpp"
#include "topoclaw/io.hpp"

namespace topoclaw {

using nlohmann::json;

std::string_view to_string(SkillCategory c) {
  switch (c) {
    case SkillCategory::utility: return "utility";
    case SkillCategory::cross_device: return "cross_device";
    case SkillCategory::social: return "social";
    case SkillCategory::system: return "system";
  }
  return "utility";
}

SkillCategory skill_category_from_string(std::string_view text) {
  if (text == "utility") return SkillCategory::utility;
  if (text == "cross_device") return SkillCategory::cross_device;
  if (text == "social") return SkillCategory::social;
  if (text == "system") return SkillCategory::system;
  throw Error(ErrorKind::bad_enum, "unknown skill category \"" + std::string(text) + "\"");
}

std::string_view to_string(RequiredEnv e) {
  switch (e) {
    case RequiredEnv::pc: return "pc";
    case RequiredEnv::mobile: return "mobile";
    case RequiredEnv::any: return "any";
  }
  return "any";
}

RequiredEnv required_env_from_string(std::string_view text) {
  if (text == "pc") return RequiredEnv::pc;
  if (text == "mobile") return RequiredEnv::mobile;
  if (text == "any") return RequiredEnv::any;
  throw Error(ErrorKind::bad_enum, "unknown required_env \"" + std::string(text) + "\"");
}

bool env_matches(RequiredEnv required, EnvironmentClass actual) {
  switch (required) {
    case RequiredEnv::any: return true;
    case RequiredEnv::pc: return actual == EnvironmentClass::pc;
    case RequiredEnv::mobile: return actual == EnvironmentClass::mobile;
  }
  return false;
}

namespace {

// Capabilities only handsets provide; a pc-only skill cannot ask for them.
const CapabilitySet kHandsetCapabilities = {"sms.send", "deeplink.open", "telephony.call"};

}  // namespace

SkillManifest manifest_from_json(const json& j) {
  detail::ObjectReader r(j, "skill manifest");
  SkillManifest m;
  m.name = r.string("name");
  m.version = r.string("version");
  m.description = r.string("description");
  m.category = skill_category_from_string(r.string("category"));
  m.required_env = required_env_from_string(r.string("required_env"));
  m.required_capabilities = r.string_set("required_capabilities");
  m.verb = r.string("verb");
  m.entry = r.string("entry");
  r.finish();
  if (m.name.empty() || m.verb.empty()) {
    throw Error(ErrorKind::schema, "skill manifest: empty name or verb");
  }
  check_capability_ids(m.required_capabilities, "skill " + m.name);
  if (m.required_env == RequiredEnv::pc) {
    if (auto clash = intersect(m.required_capabilities, kHandsetCapabilities); !clash.empty()) {
      throw Error(ErrorKind::schema, "skill " + m.name + " requires pc but needs handset " +
                                         "capabilities {" + join(clash) + "}");
    }
  }
  return m;
}

json manifest_to_json(const SkillManifest& m) {
  return {{"name", m.name},
          {"version", m.version},
          {"description", m.description},
          {"category", to_string(m.category)},
          {"required_env", to_string(m.required_env)},
          {"required_capabilities", m.required_capabilities},
          {"verb", m.verb},
          {"entry", m.entry}};
}

SkillManifest load_manifest(const std::filesystem::path& file) {
  try {
    return manifest_from_json(read_json_file(file));
  } catch (const Error& e) {
    throw Error(e.kind(), file.string() + ": " + e.what());
  }
}

void SkillRegistry::add(SkillManifest m) {
  for (const auto& s : skills_) {
    if (s.name == m.name && s.version == m.version) {
      throw Error(ErrorKind::duplicate,
                  "skill " + m.name + "@" + m.version + " is already registered");
    }
    if (s.verb == m.verb) {
      throw Error(ErrorKind::duplicate, "verb \"" + m.verb + "\" of skill " + m.name +
                                            " is already bound by skill " + s.name);
    }
  }
  if (m.verb == kNoopVerb) {
    throw Error(ErrorKind::duplicate, "verb \"noop\" is reserved");
  }
  if (!find_handler(m.entry)) {
    throw Error(ErrorKind::configuration,
                "skill " + m.name + " names unknown handler \"" + m.entry + "\"");
  }
  auto pos = std::lower_bound(skills_.begin(), skills_.end(), m,
                              [](const SkillManifest& a, const SkillManifest& b) {
                                return std::tie(a.name, a.version) < std::tie(b.name, b.version);
                              });
  skills_.insert(pos, std::move(m));
}

SkillRegistry SkillRegistry::load_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorKind::configuration, "skill directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    auto manifest = entry.path() / "manifest.json";
    if (entry.is_directory() && std::filesystem::exists(manifest)) files.push_back(manifest);
  }
  std::sort(files.begin(), files.end());
  SkillRegistry registry;
  for (const auto& f : files) registry.add(load_manifest(f));
  return registry;
}

const SkillManifest* SkillRegistry::find(std::string_view name) const {
  for (const auto& s : skills_) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const SkillManifest* SkillRegistry::find_by_verb(std::string_view verb) const {
  for (const auto& s : skills_) {
    if (s.verb == verb) return &s;
  }
  return nullptr;
}

namespace {

VerbEntry verb_entry_for(const SkillManifest& m) {
  return {m.required_capabilities, find_handler(m.entry)->effect_template};
}

}  // namespace

VerbTable SkillRegistry::verb_table() const {
  VerbTable table;
  table.emplace(std::string(kNoopVerb), VerbEntry{{}, {EffectKind::noop, ""}});
  for (const auto& s : skills_) table.emplace(s.verb, verb_entry_for(s));
  return table;
}

std::string resolve_skill_node(const SkillManifest& m, const DeviceGraph& g) {
  for (const auto& id : g.node_ids()) {
    const auto& node = g.node(id);
    if (env_matches(m.required_env, node.profile.environment_class) &&
        capability_satisfies(node.profile, m.required_capabilities)) {
      return id;
    }
  }
  throw Error(ErrorKind::unmet_constraint,
              "no node satisfies skill " + m.name + " (required_env " +
                  std::string(to_string(m.required_env)) + ", capabilities {" +
                  join(m.required_capabilities) + "})");
}

json template_to_json(const AssistantTemplate& t) {
  return {{"template_id", t.template_id},
          {"system_prompt", t.system_prompt},
          {"skill_names", t.skill_names},
          {"behavioral_defaults", t.behavioral_defaults},
          {"platform_constraints", to_string(t.platform_constraints)},
          {"author", {{"user_id", t.author.user_id}, {"display_name", t.author.display_name}}},
          {"use_case", t.use_case}};
}

AssistantTemplate template_from_json(const json& j) {
  detail::ObjectReader r(j, "assistant template");
  AssistantTemplate t;
  t.template_id = r.string("template_id");
  t.system_prompt = r.string("system_prompt");
  t.skill_names = r.string_list("skill_names");
  t.behavioral_defaults = r.string_map_or_empty("behavioral_defaults");
  t.platform_constraints = required_env_from_string(r.string("platform_constraints"));
  {
    detail::ObjectReader a(r.required("author"), "template author");
    t.author.user_id = a.string("user_id");
    t.author.display_name = a.string("display_name");
    a.finish();
  }
  t.use_case = r.string("use_case");
  r.finish();
  if (t.author.user_id.empty()) {
    throw Error(ErrorKind::missing_field, "assistant template: author.user_id is empty");
  }
  return t;
}

std::string serialize_template(const AssistantTemplate& t) { return template_to_json(t).dump(); }

AssistantTemplate parse_template_record(std::string_view record) {
  return template_from_json(detail::parse_json_text(std::string(record), "template record"));
}

BoundAssistant instantiate_template(std::string_view record, const DeviceGraph& g,
                                    const SkillRegistry& registry) {
  BoundAssistant b;
  b.source = parse_template_record(record);
  for (const auto& id : g.node_ids()) {
    if (env_matches(b.source.platform_constraints, g.node(id).profile.environment_class)) {
      b.home_node = id;
      break;
    }
  }
  if (b.home_node.empty()) {
    throw Error(ErrorKind::unmet_constraint,
                "template " + b.source.template_id + " needs a " +
                    std::string(to_string(b.source.platform_constraints)) +
                    " node and the graph has none");
  }
  b.verbs.emplace(std::string(kNoopVerb), VerbEntry{{}, {EffectKind::noop, ""}});
  for (const auto& name : b.source.skill_names) {
    const auto* m = registry.find(name);
    if (!m) {
      throw Error(ErrorKind::unknown_id,
                  "template " + b.source.template_id + " uses unknown skill " + name);
    }
    b.skill_nodes[name] = resolve_skill_node(*m, g);
    b.verbs.emplace(m->verb, verb_entry_for(*m));
  }
  return b;
}

json bound_assistant_to_json(const BoundAssistant& b) {
  return {{"template", template_to_json(b.source)},
          {"home_node", b.home_node},
          {"skill_nodes", b.skill_nodes},
          {"verbs", verb_table_to_json(b.verbs)}};
}

}  // namespace topoclaw
