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

#include "topoclaw/scenario.hpp"

#include <limits>
#include <set>

#include "json_reader.hpp"
#include "topoclaw/error.hpp"
#include "topoclaw/io.hpp"
#include "topoclaw/path.hpp"

namespace topoclaw {

using nlohmann::json;

std::string_view to_string(DeploymentMode mode) {
  switch (mode) {
    case DeploymentMode::single_node: return "single_node";
    case DeploymentMode::social_only: return "social_only";
    case DeploymentMode::full_dual: return "full_dual";
  }
  return "full_dual";
}

DeploymentMode deployment_mode_from_string(std::string_view text) {
  if (text == "single_node") return DeploymentMode::single_node;
  if (text == "social_only") return DeploymentMode::social_only;
  if (text == "full_dual") return DeploymentMode::full_dual;
  throw Error(ErrorKind::bad_enum, "unknown deployment mode \"" + std::string(text) + "\"");
}

std::string_view to_string(StimulusKind kind) {
  switch (kind) {
    case StimulusKind::intent: return "intent";
    case StimulusKind::message: return "message";
    case StimulusKind::clock_advance: return "clock_advance";
  }
  return "intent";
}

SimTime time_from_json(const json& j) {
  if (j.is_number_integer()) return j.get<SimTime>();
  if (j.is_string()) return parse_iso_time(j.get<std::string>());
  throw Error(ErrorKind::schema, "time must be integer milliseconds or an ISO-8601 string");
}

DeviceGraph Scenario::combined_graph() const {
  DeviceGraph g;
  for (const auto& [user, graph] : devices) {
    g.nodes.insert(g.nodes.end(), graph.nodes.begin(), graph.nodes.end());
    g.edges.insert(g.edges.end(), graph.edges.begin(), graph.edges.end());
  }
  return g;
}

const std::string* Scenario::owner_of(std::string_view node_id) const {
  for (const auto& [user, graph] : devices) {
    if (graph.find_node(node_id)) return &user;
  }
  return nullptr;
}

namespace {

Stimulus stimulus_from_json(const json& j, std::size_t index) {
  std::string where = "script[" + std::to_string(index) + "]";
  detail::ObjectReader r(j, where);
  Stimulus s;
  s.at = time_from_json(r.required("at"));
  s.actor = r.string("actor");
  std::string kind = r.string("kind");
  const auto& body = r.required("body");
  r.finish();
  detail::ObjectReader b(body, where + ".body");
  if (kind == "intent") {
    s.kind = StimulusKind::intent;
    s.intent = intent_from_json(b.required("intent"));
    if (const auto* t = b.optional("target_user")) s.target_user = t->get<std::string>();
    if (const auto* c = b.optional("channel")) s.channel = c->get<std::string>();
    if (const auto* v = b.optional("solver")) s.solver = solver_from_string(v->get<std::string>());
    if (s.target_user.has_value() != s.channel.has_value()) {
      throw Error(ErrorKind::schema, where + ": target_user and channel go together");
    }
  } else if (kind == "message") {
    s.kind = StimulusKind::message;
    s.space = b.string("space");
    s.text = b.string("text");
  } else if (kind == "clock_advance") {
    s.kind = StimulusKind::clock_advance;
    s.to = time_from_json(b.required("to"));
  } else {
    throw Error(ErrorKind::bad_enum, where + ": unknown stimulus kind \"" + kind + "\"");
  }
  b.finish();
  return s;
}

json stimulus_to_json(const Stimulus& s) {
  json body;
  switch (s.kind) {
    case StimulusKind::intent:
      body["intent"] = intent_to_json(s.intent);
      if (s.target_user) body["target_user"] = *s.target_user;
      if (s.channel) body["channel"] = *s.channel;
      if (s.solver) body["solver"] = to_string(*s.solver);
      break;
    case StimulusKind::message:
      body = {{"space", s.space}, {"text", s.text}};
      break;
    case StimulusKind::clock_advance:
      body = {{"to", s.to}};
      break;
  }
  return {{"at", s.at}, {"actor", s.actor}, {"kind", to_string(s.kind)}, {"body", body}};
}

void fail(const std::string& what) { throw Error(ErrorKind::scenario, what); }

void validate(const Scenario& s) {
  auto social = validate_social_graph(s.social);
  if (!social.ok()) fail("social graph: " + social.violations.front());
  std::set<std::string> node_ids;
  for (const auto& [user, graph] : s.devices) {
    if (!s.social.find_user(user)) fail("devices listed for unknown user " + user);
    if (graph.nodes.empty()) fail("user " + user + " has no devices");
    auto report = validate_graph(graph);
    if (!report.ok()) fail("devices of " + user + ": " + report.violations.front());
    for (const auto& n : graph.nodes) {
      if (!node_ids.insert(n.node_id).second) fail("node id " + n.node_id + " is used twice");
    }
  }
  for (const auto& u : s.social.users) {
    if (!s.keys.contains(u.key_ref)) fail("no key material for key_ref " + u.key_ref);
  }
  for (const auto& [node, files] : s.workspaces) {
    if (!node_ids.contains(node)) fail("workspace for unknown node " + node);
    for (const auto& [rel, content] : files) {
      auto full = rel.empty() || rel.front() == '/' ? std::nullopt : normalize_path("/w/" + rel);
      if (!full || !is_within(*full, "/w") || *full == "/w") {
        fail("workspace path \"" + rel + "\" on " + node + " is not relative to the root");
      }
      if (relative_to(*full, "/w").starts_with("memory/")) {
        fail("initial workspaces may not seed memory/ (" + node + ")");
      }
    }
  }
  SimTime last = std::numeric_limits<SimTime>::min();
  for (std::size_t i = 0; i < s.script.size(); ++i) {
    const auto& st = s.script[i];
    std::string where = "script[" + std::to_string(i) + "]";
    if (st.at < last) fail(where + " is earlier than the stimulus before it");
    last = st.at;
    if (!s.social.find_user(st.actor)) fail(where + ": unknown actor " + st.actor);
    if (st.kind == StimulusKind::clock_advance && st.to < st.at) {
      fail(where + ": clock_advance target precedes its own time");
    }
    if (st.kind == StimulusKind::clock_advance) last = st.to;
    if (st.kind != StimulusKind::clock_advance && !s.devices.contains(st.actor)) {
      fail(where + ": actor " + st.actor + " has no devices");
    }
    if (st.target_user && !s.devices.contains(*st.target_user)) {
      fail(where + ": target user " + *st.target_user + " has no devices");
    }
    if (st.kind == StimulusKind::message && !s.social.find_space(st.space)) {
      fail(where + ": unknown space " + st.space);
    }
  }
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  detail::ObjectReader r(j, "scenario");
  Scenario s;
  s.scenario_id = r.string("scenario_id");
  s.description = r.string_or("description", "");
  if (const auto* m = r.optional("mode")) s.mode = deployment_mode_from_string(m->get<std::string>());
  const auto& devices = r.required("devices");
  if (!devices.is_object()) throw Error(ErrorKind::schema, "\"devices\" must be an object");
  for (auto it = devices.begin(); it != devices.end(); ++it) {
    s.devices[it.key()] = device_graph_from_json(it.value());
  }
  s.social = social_graph_from_json(r.required("social"));
  const auto& keys = r.required("keys");
  if (!keys.is_object()) throw Error(ErrorKind::schema, "\"keys\" must be an object");
  for (auto it = keys.begin(); it != keys.end(); ++it) {
    if (!it.value().is_string()) throw Error(ErrorKind::schema, "key material must be a string");
    s.keys[it.key()] = it.value().get<std::string>();
  }
  if (const auto* p = r.optional("policy")) {
    s.policy = policy_config_from_json(*p);
  } else {
    s.policy = default_policy_config();
  }
  if (const auto* k = r.optional("memory_capacity")) {
    if (!k->is_number_unsigned()) throw Error(ErrorKind::schema, "memory_capacity must be >= 0");
    s.memory_capacity = k->get<std::size_t>();
  }
  if (const auto* w = r.optional("workspaces")) {
    if (!w->is_object()) throw Error(ErrorKind::schema, "\"workspaces\" must be an object");
    for (auto it = w->begin(); it != w->end(); ++it) {
      if (!it.value().is_object()) throw Error(ErrorKind::schema, "workspace must be an object");
      for (auto f = it.value().begin(); f != it.value().end(); ++f) {
        if (!f.value().is_string()) throw Error(ErrorKind::schema, "file content must be a string");
        s.workspaces[it.key()][f.key()] = f.value().get<std::string>();
      }
    }
  }
  const auto& script = r.required("script");
  if (!script.is_array()) throw Error(ErrorKind::schema, "\"script\" must be an array");
  for (std::size_t i = 0; i < script.size(); ++i) s.script.push_back(stimulus_from_json(script[i], i));
  r.finish();
  validate(s);
  return s;
}

json scenario_to_json(const Scenario& s) {
  json devices = json::object();
  for (const auto& [user, g] : s.devices) devices[user] = device_graph_to_json(g);
  json script = json::array();
  for (const auto& st : s.script) script.push_back(stimulus_to_json(st));
  json j = {{"scenario_id", s.scenario_id},
            {"description", s.description},
            {"devices", devices},
            {"social", social_graph_to_json(s.social)},
            {"keys", s.keys},
            {"policy", policy_config_to_json(s.policy)},
            {"memory_capacity", s.memory_capacity},
            {"workspaces", s.workspaces},
            {"script", script}};
  if (s.mode) j["mode"] = to_string(*s.mode);
  return j;
}

Scenario load_scenario(const std::filesystem::path& file) {
  return scenario_from_json(read_json_file(file));
}

void check_mode(const Scenario& s, DeploymentMode mode) {
  auto mismatch = [&](const std::string& why) {
    throw Error(ErrorKind::mode_mismatch, "scenario " + s.scenario_id + " cannot run in " +
                                              std::string(to_string(mode)) + ": " + why);
  };
  switch (mode) {
    case DeploymentMode::single_node: {
      std::size_t nodes = 0;
      for (const auto& [user, g] : s.devices) nodes += g.nodes.size();
      if (nodes != 1) mismatch("needs exactly one node, found " + std::to_string(nodes));
      if (!s.social.spaces.empty()) mismatch("shared spaces are disabled");
      break;
    }
    case DeploymentMode::social_only:
      for (const auto& [user, g] : s.devices) {
        if (g.nodes.size() != 1) mismatch("user " + user + " has more than one node");
      }
      break;
    case DeploymentMode::full_dual:
      break;
  }
}

}  // namespace topoclaw
