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

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "topoclaw/capability.hpp"
#include "topoclaw/command_audit.hpp"
#include "topoclaw/eventbus.hpp"
#include "topoclaw/taskgraph.hpp"
#include "topoclaw/topology.hpp"
#include "topoclaw/verdict.hpp"

namespace topoclaw {

enum class Origin { user, scheduler, external };

std::string_view to_string(Origin origin);
Origin origin_from_string(std::string_view text);

struct ActionContext {
  Origin origin = Origin::user;
  // User whose twin performs the action and whose baseline applies.
  std::string owner;
  // Required when origin is external.
  std::optional<Identity> requester;
  std::string node_id;
  std::optional<std::string> channel_id;
  std::string workspace_root;
  // The attributed event carrying the action, when one exists.
  std::optional<AttributedEvent> event;
};

// Layers must be pure: same inputs, same verdict, no side effects.
struct PolicyLayer {
  std::string layer_id;
  std::function<Verdict(const ActionSpec&, const ActionContext&)> evaluate;
};

using LayerStack = std::vector<PolicyLayer>;

struct PolicyDecision {
  std::vector<std::pair<std::string, Verdict>> verdicts;
  bool overall = false;

  // First denying verdict, if any.
  const std::pair<std::string, Verdict>* first_denial() const;

  bool operator==(const PolicyDecision&) const = default;
};

// Conjunction of every layer, evaluated in order without short-circuit.
// An empty stack yields a deny decision (layer "configuration"); a layer
// that throws is recorded as a denial.
PolicyDecision evaluate_safe(const ActionSpec& a, const ActionContext& c,
                             const LayerStack& layers);

// baseline ∩ requester
PrivilegeSet effective_privileges(const PrivilegeSet& baseline,
                                  const PrivilegeSet& requester_privs);

// Write targets must normalize to a path inside workspace_root. Other
// effect kinds pass.
Verdict sandbox_check(const EffectDescriptor& effect, std::string_view workspace_root);

// Re-runs evaluate_safe at the receiving node with its own layers and
// workspace root. An envelope that fails verification, or that does not
// carry this action, yields deny("unattributed action").
PolicyDecision edge_verify(const DeviceNode& node, const ActionSpec& a,
                           const ActionContext& c, const LayerStack& local_layers,
                           const Envelope& envelope, const KeyStore& keys);

// ---------------------------------------------------------------------------
// Layer construction

struct PrivilegeConfig {
  std::map<std::string, PrivilegeSet> baseline_privileges;
  // Workspace-relative prefixes whose reads and writes also need
  // `private_privilege`.
  std::vector<std::string> private_paths;
  std::string private_privilege = "fs.private";
};

struct LocalRules {
  std::set<EffectKind> deny_effect_kinds;
  // Workspace-relative prefixes that refuse writes.
  std::vector<std::string> read_only_paths;
};

PolicyLayer make_constant_layer(std::string layer_id, Verdict verdict);
PolicyLayer make_attribution_layer(std::shared_ptr<const KeyStore> keys);
PolicyLayer make_privilege_layer(std::shared_ptr<const PrivilegeConfig> config,
                                 std::shared_ptr<const SocialGraph> social);
PolicyLayer make_sandbox_layer();
PolicyLayer make_command_audit_layer(std::shared_ptr<const AuditRuleset> rules);
PolicyLayer make_local_rules_layer(std::string layer_id, LocalRules rules);

struct LayerConfig {
  std::string layer_id;
  // attribution | privilege | sandbox | command_audit | local_rules
  std::string type;
  std::vector<std::string> private_paths;
  LocalRules local;
};

// Policy file: ordered "layers", optional "deny_rules" (defaults to the
// shipped ruleset), "baseline_privileges" per user, "node_layers" per node.
struct PolicyConfig {
  std::vector<LayerConfig> layers;
  AuditRuleset deny_rules;
  std::map<std::string, PrivilegeSet> baseline_privileges;
  std::map<std::string, std::vector<LayerConfig>> node_layers;
};

// attribution -> privilege -> sandbox -> command_audit.
std::vector<LayerConfig> default_layer_configs();
PolicyConfig default_policy_config();
PolicyConfig policy_config_from_json(const nlohmann::json& j);
nlohmann::json policy_config_to_json(const PolicyConfig& config);

// Materializes configured layers against the runtime's key store and
// social graph.
class PolicyEngine {
 public:
  PolicyEngine(PolicyConfig config, std::shared_ptr<const KeyStore> keys,
               std::shared_ptr<const SocialGraph> social);

  // Global pipeline evaluated at the hub.
  const LayerStack& hub_layers() const { return hub_; }
  // Global pipeline plus the node's local layers.
  LayerStack edge_layers(std::string_view node_id) const;

  const PolicyConfig& config() const { return config_; }

 private:
  LayerStack build(const std::vector<LayerConfig>& configs) const;

  PolicyConfig config_;
  std::shared_ptr<const KeyStore> keys_;
  std::shared_ptr<const SocialGraph> social_;
  std::shared_ptr<const PrivilegeConfig> privileges_;
  std::shared_ptr<const AuditRuleset> rules_;
  LayerStack hub_;
};

nlohmann::json decision_to_json(const PolicyDecision& d);
PolicyDecision decision_from_json(const nlohmann::json& j);
nlohmann::json context_to_json(const ActionContext& c);
ActionContext context_from_json(const nlohmann::json& j);

}  // namespace topoclaw
