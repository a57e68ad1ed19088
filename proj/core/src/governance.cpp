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

#include "topoclaw/governance.hpp"

#include <algorithm>

#include "json_reader.hpp"
#include "topoclaw/error.hpp"
#include "topoclaw/path.hpp"

namespace topoclaw {

using nlohmann::json;

json verdict_to_json(const Verdict& v) {
  json details = json::array();
  for (const auto& [k, val] : v.details) details.push_back({k, val});
  json j = {{"allow", v.allow}};
  if (!v.reason.empty()) j["reason"] = v.reason;
  if (!v.details.empty()) j["details"] = details;
  return j;
}

Verdict verdict_from_json(const json& j) {
  detail::ObjectReader r(j, "verdict");
  Verdict v;
  const auto& allow = r.required("allow");
  if (!allow.is_boolean()) throw Error(ErrorKind::schema, "\"allow\" must be boolean");
  v.allow = allow.get<bool>();
  v.reason = r.string_or("reason", "");
  if (const auto* details = r.optional("details")) {
    for (const auto& pair : *details) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
        throw Error(ErrorKind::schema, "verdict details must be [key, value] pairs");
      }
      v.details.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
    }
  }
  r.finish();
  return v;
}

std::string_view to_string(Origin origin) {
  switch (origin) {
    case Origin::user: return "user";
    case Origin::scheduler: return "scheduler";
    case Origin::external: return "external";
  }
  return "user";
}

Origin origin_from_string(std::string_view text) {
  if (text == "user") return Origin::user;
  if (text == "scheduler") return Origin::scheduler;
  if (text == "external") return Origin::external;
  throw Error(ErrorKind::bad_enum, "unknown origin \"" + std::string(text) + "\"");
}

const std::pair<std::string, Verdict>* PolicyDecision::first_denial() const {
  for (const auto& v : verdicts) {
    if (!v.second.allow) return &v;
  }
  return nullptr;
}

PolicyDecision evaluate_safe(const ActionSpec& a, const ActionContext& c,
                             const LayerStack& layers) {
  PolicyDecision decision;
  if (layers.empty()) {
    decision.verdicts.emplace_back("configuration",
                                   Verdict::denied("no policy layers configured"));
    decision.overall = false;
    return decision;
  }
  bool overall = true;
  for (const auto& layer : layers) {
    Verdict v;
    try {
      v = layer.evaluate ? layer.evaluate(a, c) : Verdict::denied("layer has no evaluator");
    } catch (const std::exception& e) {
      v = Verdict::denied(std::string("layer error: ") + e.what());
    }
    overall = overall && v.allow;
    decision.verdicts.emplace_back(layer.layer_id, std::move(v));
  }
  decision.overall = overall;
  return decision;
}

PrivilegeSet effective_privileges(const PrivilegeSet& baseline,
                                  const PrivilegeSet& requester_privs) {
  return {intersect(baseline.privileges, requester_privs.privileges)};
}

Verdict sandbox_check(const EffectDescriptor& effect, std::string_view workspace_root) {
  if (effect.kind != EffectKind::write) return Verdict::allowed();
  if (!is_normalized_absolute(workspace_root)) {
    return Verdict::denied("malformed workspace root").with("workspace_root",
                                                            std::string(workspace_root));
  }
  auto target = normalize_path(effect.target);
  if (!target) return Verdict::denied("malformed path").with("target", effect.target);
  if (!is_within(*target, workspace_root)) {
    return Verdict::denied("outside workspace")
        .with("target", *target)
        .with("workspace_root", std::string(workspace_root));
  }
  return Verdict::allowed();
}

PolicyDecision edge_verify(const DeviceNode& node, const ActionSpec& a,
                           const ActionContext& c, const LayerStack& local_layers,
                           const Envelope& envelope, const KeyStore& keys) {
  auto check = verify_attribution(envelope.event, keys);
  bool carries_action = envelope.event.payload_m == canonical_action_bytes(a);
  if (!check || !carries_action || envelope.dst_node != node.node_id) {
    PolicyDecision d;
    Verdict v = Verdict::denied("unattributed action");
    if (!check) v.with("verification", std::string(to_string(check.reason)));
    if (!carries_action) v.with("payload", "does not carry this action");
    if (envelope.dst_node != node.node_id) v.with("dst_node", envelope.dst_node);
    d.verdicts.emplace_back("edge_attribution", std::move(v));
    d.overall = false;
    return d;
  }
  ActionContext local = c;
  local.node_id = node.node_id;
  local.workspace_root = node.workspace_root;
  local.event = envelope.event;
  return evaluate_safe(a, local, local_layers);
}

// ---------------------------------------------------------------------------
// Layers

PolicyLayer make_constant_layer(std::string layer_id, Verdict verdict) {
  return {std::move(layer_id),
          [verdict](const ActionSpec&, const ActionContext&) { return verdict; }};
}

PolicyLayer make_attribution_layer(std::shared_ptr<const KeyStore> keys) {
  return {"attribution", [keys](const ActionSpec& a, const ActionContext& c) {
            if (!c.event) return Verdict::denied("unattributed action").with("event", "missing");
            auto check = verify_attribution(*c.event, *keys);
            if (!check) {
              return Verdict::denied("unattributed action")
                  .with("verification", std::string(to_string(check.reason)));
            }
            if (c.event->human_id != c.owner) {
              return Verdict::denied("unattributed action")
                  .with("human_id", c.event->human_id)
                  .with("owner", c.owner);
            }
            if (c.event->payload_m != canonical_action_bytes(a)) {
              return Verdict::denied("unattributed action")
                  .with("payload", "does not carry this action");
            }
            return Verdict::allowed().with("human_id", c.event->human_id);
          }};
}

namespace {

bool touches_private_path(const ActionSpec& a, const ActionContext& c,
                          const PrivilegeConfig& config) {
  if (a.effect.kind != EffectKind::read && a.effect.kind != EffectKind::write) return false;
  auto target = resolve_against(c.workspace_root, a.effect.target);
  if (!target || !is_normalized_absolute(c.workspace_root)) return false;
  for (const auto& prefix : config.private_paths) {
    auto root = resolve_against(c.workspace_root, prefix);
    if (root && is_within(*target, *root)) return true;
  }
  return false;
}

}  // namespace

PolicyLayer make_privilege_layer(std::shared_ptr<const PrivilegeConfig> config,
                                 std::shared_ptr<const SocialGraph> social) {
  return {"privilege", [config, social](const ActionSpec& a, const ActionContext& c) {
            CapabilitySet needed = a.required_capabilities;
            if (touches_private_path(a, c, *config)) needed.insert(config->private_privilege);

            PrivilegeSet baseline;
            if (auto it = config->baseline_privileges.find(c.owner);
                it != config->baseline_privileges.end()) {
              baseline = it->second;
            }
            PrivilegeSet effective = baseline;
            Verdict evidence;
            evidence.with("baseline", join(baseline.privileges));
            if (c.origin == Origin::external) {
              if (!c.requester) {
                return Verdict::denied("external request without requester identity");
              }
              PrivilegeSet requested;
              const TrustEdge* edge =
                  c.channel_id ? social->find_trust_edge(c.owner, c.requester->user_id,
                                                         *c.channel_id)
                               : nullptr;
              if (edge) requested = edge->privileges_granted;
              effective = effective_privileges(baseline, requested);
              evidence.with("requester", c.requester->user_id)
                  .with("requester_privileges", join(requested.privileges));
            }
            evidence.with("effective", join(effective.privileges))
                .with("needed", join(needed));
            auto missing = difference(needed, effective.privileges);
            if (missing.empty()) {
              evidence.allow = true;
              return evidence;
            }
            evidence.allow = false;
            evidence.reason = "missing privileges: " + join(missing);
            return evidence;
          }};
}

PolicyLayer make_sandbox_layer() {
  return {"sandbox", [](const ActionSpec& a, const ActionContext& c) {
            return sandbox_check(a.effect, c.workspace_root);
          }};
}

PolicyLayer make_command_audit_layer(std::shared_ptr<const AuditRuleset> rules) {
  return {"command_audit", [rules](const ActionSpec& a, const ActionContext&) {
            if (a.effect.kind != EffectKind::exec) return Verdict::allowed();
            return audit_command(a.effect.target, *rules);
          }};
}

PolicyLayer make_local_rules_layer(std::string layer_id, LocalRules rules) {
  return {std::move(layer_id), [rules](const ActionSpec& a, const ActionContext& c) {
            if (rules.deny_effect_kinds.count(a.effect.kind)) {
              return Verdict::denied("effect kind disabled on node")
                  .with("kind", std::string(to_string(a.effect.kind)))
                  .with("node", c.node_id);
            }
            if (a.effect.kind == EffectKind::write) {
              auto target = resolve_against(c.workspace_root, a.effect.target);
              for (const auto& prefix : rules.read_only_paths) {
                auto root = resolve_against(c.workspace_root, prefix);
                if (!target || (root && is_within(*target, *root))) {
                  return Verdict::denied("read-only path on node")
                      .with("target", target ? *target : a.effect.target)
                      .with("node", c.node_id);
                }
              }
            }
            return Verdict::allowed();
          }};
}

// ---------------------------------------------------------------------------
// Configuration

std::vector<LayerConfig> default_layer_configs() {
  return {{"attribution", "attribution", {}, {}},
          {"privilege", "privilege", {"private"}, {}},
          {"sandbox", "sandbox", {}, {}},
          {"command_audit", "command_audit", {}, {}}};
}

PolicyConfig default_policy_config() {
  PolicyConfig config;
  config.layers = default_layer_configs();
  config.deny_rules = default_audit_rules();
  return config;
}

namespace {

LayerConfig layer_config_from_json(const json& j) {
  detail::ObjectReader r(j, "policy layer");
  LayerConfig lc;
  lc.type = r.string("type");
  lc.layer_id = r.string_or("layer_id", lc.type);
  if (lc.type == "privilege") {
    lc.private_paths = r.string_list_or_empty("private_paths");
  } else if (lc.type == "local_rules") {
    for (const auto& k : r.string_list_or_empty("deny_effect_kinds")) {
      lc.local.deny_effect_kinds.insert(effect_kind_from_string(k));
    }
    lc.local.read_only_paths = r.string_list_or_empty("read_only_paths");
  } else if (lc.type != "attribution" && lc.type != "sandbox" && lc.type != "command_audit") {
    throw Error(ErrorKind::bad_enum, "unknown policy layer type \"" + lc.type + "\"");
  }
  r.finish();
  return lc;
}

json layer_config_to_json(const LayerConfig& lc) {
  json j = {{"layer_id", lc.layer_id}, {"type", lc.type}};
  if (lc.type == "privilege") j["private_paths"] = lc.private_paths;
  if (lc.type == "local_rules") {
    json kinds = json::array();
    for (auto k : lc.local.deny_effect_kinds) kinds.push_back(to_string(k));
    j["deny_effect_kinds"] = kinds;
    j["read_only_paths"] = lc.local.read_only_paths;
  }
  return j;
}

std::vector<LayerConfig> layer_list_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw Error(ErrorKind::schema, "\"" + what + "\" must be an array");
  std::vector<LayerConfig> out;
  for (const auto& item : j) out.push_back(layer_config_from_json(item));
  return out;
}

}  // namespace

PolicyConfig policy_config_from_json(const json& j) {
  detail::ObjectReader r(j, "policy");
  PolicyConfig config;
  if (const auto* layers = r.optional("layers")) {
    config.layers = layer_list_from_json(*layers, "layers");
  } else {
    config.layers = default_layer_configs();
  }
  if (const auto* rules = r.optional("deny_rules")) {
    config.deny_rules = audit_rules_from_json(*rules);
  } else {
    config.deny_rules = default_audit_rules();
  }
  if (const auto* base = r.optional("baseline_privileges")) {
    if (!base->is_object()) {
      throw Error(ErrorKind::schema, "\"baseline_privileges\" must be an object");
    }
    for (auto it = base->begin(); it != base->end(); ++it) {
      PrivilegeSet p;
      for (const auto& s : it.value()) {
        if (!s.is_string()) throw Error(ErrorKind::schema, "privileges must be strings");
        p.privileges.insert(s.get<std::string>());
      }
      check_capability_ids(p.privileges, "baseline of " + it.key());
      config.baseline_privileges[it.key()] = std::move(p);
    }
  }
  if (const auto* nodes = r.optional("node_layers")) {
    if (!nodes->is_object()) throw Error(ErrorKind::schema, "\"node_layers\" must be an object");
    for (auto it = nodes->begin(); it != nodes->end(); ++it) {
      config.node_layers[it.key()] = layer_list_from_json(it.value(), "node_layers." + it.key());
    }
  }
  r.finish();
  return config;
}

json policy_config_to_json(const PolicyConfig& config) {
  json layers = json::array();
  for (const auto& lc : config.layers) layers.push_back(layer_config_to_json(lc));
  json base = json::object();
  for (const auto& [user, p] : config.baseline_privileges) base[user] = p.privileges;
  json nodes = json::object();
  for (const auto& [node, list] : config.node_layers) {
    json l = json::array();
    for (const auto& lc : list) l.push_back(layer_config_to_json(lc));
    nodes[node] = l;
  }
  return {{"layers", layers},
          {"deny_rules", audit_rules_to_json(config.deny_rules)},
          {"baseline_privileges", base},
          {"node_layers", nodes}};
}

PolicyEngine::PolicyEngine(PolicyConfig config, std::shared_ptr<const KeyStore> keys,
                           std::shared_ptr<const SocialGraph> social)
    : config_(std::move(config)), keys_(std::move(keys)), social_(std::move(social)) {
  rules_ = std::make_shared<const AuditRuleset>(config_.deny_rules);
  hub_ = build(config_.layers);
}

LayerStack PolicyEngine::build(const std::vector<LayerConfig>& configs) const {
  LayerStack stack;
  for (const auto& lc : configs) {
    PolicyLayer layer;
    if (lc.type == "attribution") {
      layer = make_attribution_layer(keys_);
    } else if (lc.type == "privilege") {
      auto pc = std::make_shared<PrivilegeConfig>();
      pc->baseline_privileges = config_.baseline_privileges;
      pc->private_paths = lc.private_paths;
      layer = make_privilege_layer(pc, social_);
    } else if (lc.type == "sandbox") {
      layer = make_sandbox_layer();
    } else if (lc.type == "command_audit") {
      layer = make_command_audit_layer(rules_);
    } else if (lc.type == "local_rules") {
      layer = make_local_rules_layer(lc.layer_id, lc.local);
    } else {
      throw Error(ErrorKind::configuration, "unknown layer type " + lc.type);
    }
    layer.layer_id = lc.layer_id;
    stack.push_back(std::move(layer));
  }
  return stack;
}

LayerStack PolicyEngine::edge_layers(std::string_view node_id) const {
  LayerStack stack = hub_;
  auto it = config_.node_layers.find(std::string(node_id));
  if (it != config_.node_layers.end()) {
    auto local = build(it->second);
    stack.insert(stack.end(), local.begin(), local.end());
  }
  return stack;
}

json decision_to_json(const PolicyDecision& d) {
  json verdicts = json::array();
  for (const auto& [layer, v] : d.verdicts) {
    json entry = verdict_to_json(v);
    entry["layer_id"] = layer;
    verdicts.push_back(entry);
  }
  return {{"overall", d.overall ? "allow" : "deny"}, {"verdicts", verdicts}};
}

PolicyDecision decision_from_json(const json& j) {
  detail::ObjectReader r(j, "decision");
  PolicyDecision d;
  auto overall = r.string("overall");
  if (overall != "allow" && overall != "deny") {
    throw Error(ErrorKind::bad_enum, "overall must be allow or deny");
  }
  d.overall = overall == "allow";
  for (const auto& v : r.required("verdicts")) {
    json copy = v;
    if (!copy.contains("layer_id")) throw Error(ErrorKind::missing_field, "verdict without layer_id");
    std::string layer = copy["layer_id"].get<std::string>();
    copy.erase("layer_id");
    d.verdicts.emplace_back(layer, verdict_from_json(copy));
  }
  r.finish();
  return d;
}

json context_to_json(const ActionContext& c) {
  json j = {{"origin", to_string(c.origin)},
            {"owner", c.owner},
            {"node_id", c.node_id},
            {"workspace_root", c.workspace_root}};
  if (c.requester) j["requester"] = identity_to_json(*c.requester);
  if (c.channel_id) j["channel_id"] = *c.channel_id;
  if (c.event) j["event"] = event_to_json(*c.event);
  return j;
}

ActionContext context_from_json(const json& j) {
  detail::ObjectReader r(j, "action context");
  ActionContext c;
  c.origin = origin_from_string(r.string("origin"));
  c.owner = r.string_or("owner", "");
  if (const auto* req = r.optional("requester")) {
    if (req->is_string()) {
      c.requester = Identity{req->get<std::string>(), req->get<std::string>(), ""};
    } else {
      c.requester = identity_from_json(*req);
    }
  }
  c.node_id = r.string("node_id");
  if (const auto* ch = r.optional("channel_id")) c.channel_id = ch->get<std::string>();
  c.workspace_root = r.string("workspace_root");
  if (const auto* ev = r.optional("event")) c.event = event_from_json(*ev);
  r.finish();
  if (c.origin == Origin::external && !c.requester) {
    throw Error(ErrorKind::schema, "external origin requires a requester");
  }
  return c;
}

}  // namespace topoclaw
