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

#include "topoclaw/taskgraph.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "json_reader.hpp"
#include "topoclaw/error.hpp"

namespace topoclaw {

using nlohmann::json;

std::string_view to_string(EffectKind kind) {
  switch (kind) {
    case EffectKind::read: return "read";
    case EffectKind::write: return "write";
    case EffectKind::exec: return "exec";
    case EffectKind::send: return "send";
    case EffectKind::noop: return "noop";
  }
  return "noop";
}

EffectKind effect_kind_from_string(std::string_view text) {
  if (text == "read") return EffectKind::read;
  if (text == "write") return EffectKind::write;
  if (text == "exec") return EffectKind::exec;
  if (text == "send") return EffectKind::send;
  if (text == "noop") return EffectKind::noop;
  throw Error(ErrorKind::bad_enum, "unknown effect kind \"" + std::string(text) + "\"");
}

const ActionSpec* TaskDag::find_action(std::string_view action_id) const {
  auto it = std::find_if(actions.begin(), actions.end(),
                         [&](const ActionSpec& a) { return a.action_id == action_id; });
  return it == actions.end() ? nullptr : &*it;
}

const ActionSpec& TaskDag::action(std::string_view action_id) const {
  if (const auto* a = find_action(action_id)) return *a;
  throw Error(ErrorKind::unknown_id, "unknown action id " + std::string(action_id));
}

void validate_dag(const TaskDag& dag) {
  std::set<std::string> ids;
  for (const auto& a : dag.actions) {
    if (a.action_id.empty()) throw Error(ErrorKind::schema, "empty action id");
    if (!ids.insert(a.action_id).second) {
      throw Error(ErrorKind::duplicate, "duplicate action id " + a.action_id);
    }
    check_capability_ids(a.required_capabilities, "action " + a.action_id);
    if (a.required_capabilities.empty() && a.effect.kind != EffectKind::noop) {
      throw Error(ErrorKind::schema,
                  "action " + a.action_id + " has no required capabilities");
    }
    if (a.effect.kind == EffectKind::exec && a.effect.target.empty()) {
      throw Error(ErrorKind::schema, "exec action " + a.action_id + " has no command");
    }
  }
  for (const auto& d : dag.deps) {
    for (const auto* end : {&d.from_action, &d.to_action}) {
      if (!ids.count(*end)) {
        throw Error(ErrorKind::unknown_id, "dependency endpoint " + *end + " is not an action");
      }
    }
    if (d.from_action == d.to_action) {
      throw Error(ErrorKind::schema, "self-loop on action " + d.from_action);
    }
    if (is_negative(d.payload_units)) {
      throw Error(ErrorKind::schema, "negative payload on " + d.from_action + "->" + d.to_action);
    }
  }
  topo_order(dag);
}

namespace {

std::string fill_template(const std::string& pattern,
                          const std::map<std::string, std::string>& args,
                          const std::string& step_id) {
  std::string out;
  std::size_t pos = 0;
  while (pos < pattern.size()) {
    auto open = pattern.find('{', pos);
    if (open == std::string::npos) {
      out.append(pattern, pos, std::string::npos);
      break;
    }
    auto close = pattern.find('}', open);
    if (close == std::string::npos) {
      out.append(pattern, pos, std::string::npos);
      break;
    }
    out.append(pattern, pos, open - pos);
    std::string key = pattern.substr(open + 1, close - open - 1);
    auto it = args.find(key);
    if (it == args.end()) {
      throw Error(ErrorKind::missing_field,
                  "step " + step_id + " is missing argument \"" + key + "\"");
    }
    out += it->second;
    pos = close + 1;
  }
  return out;
}

}  // namespace

TaskDag compile_intent(const IntentScript& script, const VerbTable& verbs) {
  TaskDag dag;
  std::set<std::string> earlier;
  for (const auto& step : script.steps) {
    auto verb = verbs.find(step.verb);
    if (verb == verbs.end()) {
      throw Error(ErrorKind::unknown_verb, "unknown verb \"" + step.verb + "\"");
    }
    if (earlier.count(step.id)) {
      throw Error(ErrorKind::duplicate, "duplicate step id " + step.id);
    }
    for (const auto& need : step.needs) {
      if (!earlier.count(need)) {
        throw Error(ErrorKind::forward_reference,
                    "step " + step.id + " needs " + need + ", which is not an earlier step");
      }
    }
    ActionSpec action;
    action.action_id = step.id;
    action.verb = step.verb;
    action.required_capabilities = verb->second.required_capabilities;
    action.effect.kind = verb->second.effect_template.kind;
    action.effect.target = fill_template(verb->second.effect_template.target, step.args, step.id);
    action.params = step.args;
    dag.actions.push_back(std::move(action));
    std::set<std::string> seen_needs;
    for (const auto& need : step.needs) {
      if (seen_needs.insert(need).second) {
        dag.deps.push_back({need, step.id, step.payload_units});
      }
    }
    earlier.insert(step.id);
  }
  validate_dag(dag);
  return dag;
}

std::vector<std::string> topo_order(const TaskDag& dag) {
  std::map<std::string, std::size_t> indegree;
  std::map<std::string, std::vector<std::string>> out_edges;
  for (const auto& a : dag.actions) indegree[a.action_id];
  for (const auto& d : dag.deps) {
    ++indegree[d.to_action];
    indegree[d.from_action];
    out_edges[d.from_action].push_back(d.to_action);
  }

  std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
  for (const auto& [id, deg] : indegree) {
    if (deg == 0) ready.push(id);
  }
  std::vector<std::string> order;
  while (!ready.empty()) {
    auto id = ready.top();
    ready.pop();
    order.push_back(id);
    for (const auto& next : out_edges[id]) {
      if (--indegree[next] == 0) ready.push(next);
    }
  }
  if (order.size() == indegree.size()) return order;

  // Walk predecessors among the leftover vertices until one repeats.
  std::map<std::string, std::string> pred;
  for (const auto& d : dag.deps) {
    if (indegree[d.to_action] > 0 && indegree[d.from_action] > 0 &&
        !pred.count(d.to_action)) {
      pred[d.to_action] = d.from_action;
    }
  }
  std::string start;
  for (const auto& [id, deg] : indegree) {
    if (deg > 0) {
      start = id;
      break;
    }
  }
  std::vector<std::string> walk;
  std::map<std::string, std::size_t> position;
  std::string cur = start;
  while (!position.count(cur)) {
    position[cur] = walk.size();
    walk.push_back(cur);
    cur = pred[cur];
  }
  std::vector<std::string> cycle(walk.begin() + static_cast<std::ptrdiff_t>(position[cur]),
                                 walk.end());
  std::reverse(cycle.begin(), cycle.end());
  // Start at the smallest id so the listing does not depend on edge order.
  std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
  std::string listing;
  for (const auto& id : cycle) {
    if (!listing.empty()) listing += ", ";
    listing += id;
  }
  throw Error(ErrorKind::cycle, "cycle detected: {" + listing + "}");
}

json action_to_json(const ActionSpec& a) {
  return {{"action_id", a.action_id},
          {"verb", a.verb},
          {"required_capabilities", a.required_capabilities},
          {"effect", {{"kind", to_string(a.effect.kind)}, {"target", a.effect.target}}},
          {"params", a.params}};
}

std::string canonical_action_bytes(const ActionSpec& action) {
  return action_to_json(action).dump();
}

ActionSpec action_from_json(const json& j) {
  detail::ObjectReader r(j, "action");
  ActionSpec a;
  a.action_id = r.string("action_id");
  a.verb = r.string_or("verb", "");
  a.required_capabilities = r.string_set("required_capabilities");
  detail::ObjectReader e(r.required("effect"), "action " + a.action_id + " effect");
  a.effect.kind = effect_kind_from_string(e.string("kind"));
  a.effect.target = e.string_or("target", "");
  e.finish();
  a.params = r.string_map_or_empty("params");
  r.finish();
  return a;
}

json dag_to_json(const TaskDag& dag) {
  json actions = json::array();
  for (const auto& a : dag.actions) actions.push_back(action_to_json(a));
  json deps = json::array();
  for (const auto& d : dag.deps) {
    deps.push_back({{"from_action", d.from_action},
                    {"to_action", d.to_action},
                    {"payload_units", rational_to_json(d.payload_units)}});
  }
  return {{"actions", actions}, {"deps", deps}};
}

TaskDag dag_from_json(const json& j) {
  detail::ObjectReader r(j, "task dag");
  TaskDag dag;
  const auto& actions = r.required("actions");
  if (!actions.is_array()) throw Error(ErrorKind::schema, "\"actions\" must be an array");
  for (const auto& a : actions) dag.actions.push_back(action_from_json(a));
  if (const auto* deps = r.optional("deps")) {
    if (!deps->is_array()) throw Error(ErrorKind::schema, "\"deps\" must be an array");
    for (const auto& d : *deps) {
      detail::ObjectReader dr(d, "dependency");
      DependencyEdge edge;
      edge.from_action = dr.string("from_action");
      edge.to_action = dr.string("to_action");
      edge.payload_units = rational_from_json(dr.required("payload_units"));
      dr.finish();
      dag.deps.push_back(std::move(edge));
    }
  }
  r.finish();
  validate_dag(dag);
  return dag;
}

json intent_to_json(const IntentScript& script) {
  json steps = json::array();
  for (const auto& s : script.steps) {
    steps.push_back({{"id", s.id},
                     {"verb", s.verb},
                     {"args", s.args},
                     {"needs", s.needs},
                     {"payload_units", rational_to_json(s.payload_units)}});
  }
  return {{"intent_id", script.intent_id}, {"steps", steps}};
}

IntentScript intent_from_json(const json& j) {
  detail::ObjectReader r(j, "intent");
  IntentScript script;
  script.intent_id = r.string("intent_id");
  const auto& steps = r.required("steps");
  if (!steps.is_array()) throw Error(ErrorKind::schema, "\"steps\" must be an array");
  std::size_t index = 0;
  for (const auto& s : steps) {
    ++index;
    detail::ObjectReader sr(s, "intent step " + std::to_string(index));
    IntentStep step;
    step.id = sr.string_or("id", "step" + std::to_string(index));
    step.verb = sr.string("verb");
    step.args = sr.string_map_or_empty("args");
    step.needs = sr.string_list_or_empty("needs");
    if (const auto* p = sr.optional("payload_units")) step.payload_units = rational_from_json(*p);
    if (is_negative(step.payload_units)) {
      throw Error(ErrorKind::schema, "step " + step.id + " has a negative payload");
    }
    sr.finish();
    script.steps.push_back(std::move(step));
  }
  r.finish();
  return script;
}

json verb_table_to_json(const VerbTable& verbs) {
  json table = json::object();
  for (const auto& [verb, entry] : verbs) {
    table[verb] = {{"required_capabilities", entry.required_capabilities},
                   {"effect",
                    {{"kind", to_string(entry.effect_template.kind)},
                     {"target", entry.effect_template.target}}}};
  }
  return {{"version", 1}, {"verbs", table}};
}

VerbTable verb_table_from_json(const json& j) {
  detail::ObjectReader r(j, "verb table");
  r.integer("version");
  VerbTable verbs;
  const auto& table = r.required("verbs");
  if (!table.is_object()) throw Error(ErrorKind::schema, "\"verbs\" must be an object");
  for (auto it = table.begin(); it != table.end(); ++it) {
    detail::ObjectReader vr(it.value(), "verb " + it.key());
    VerbEntry entry;
    entry.required_capabilities = vr.string_set("required_capabilities");
    check_capability_ids(entry.required_capabilities, "verb " + it.key());
    detail::ObjectReader er(vr.required("effect"), "verb " + it.key() + " effect");
    entry.effect_template.kind = effect_kind_from_string(er.string("kind"));
    entry.effect_template.target = er.string_or("target", "");
    er.finish();
    vr.finish();
    verbs.emplace(it.key(), std::move(entry));
  }
  r.finish();
  return verbs;
}

}  // namespace topoclaw
