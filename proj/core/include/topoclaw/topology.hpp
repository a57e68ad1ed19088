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
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "topoclaw/capability.hpp"
#include "topoclaw/rational.hpp"

namespace topoclaw {

enum class EnvironmentClass { pc, mobile, edge };

std::string_view to_string(EnvironmentClass env);
EnvironmentClass environment_class_from_string(std::string_view text);

struct CapabilityProfile {
  CapabilitySet capabilities;
  EnvironmentClass environment_class = EnvironmentClass::pc;

  bool operator==(const CapabilityProfile&) const = default;
};

struct DeviceNode {
  std::string node_id;
  CapabilityProfile profile;
  std::string workspace_root;
  // Additive per-action placement penalty; 0 means no preference.
  Rational preference_weight{0};

  bool operator==(const DeviceNode&) const = default;
};

struct SyncEdge {
  std::string from_node;
  std::string to_node;
  Rational transfer_cost_per_unit{0};

  bool operator==(const SyncEdge&) const = default;
};

// Physical topology. Edges connect both ways for reachability; an explicit
// reverse edge overrides the traversal cost in that direction.
struct DeviceGraph {
  std::vector<DeviceNode> nodes;
  std::vector<SyncEdge> edges;

  const DeviceNode* find_node(std::string_view node_id) const;
  // Throws Error(unknown_id).
  const DeviceNode& node(std::string_view node_id) const;
  // Node ids in ascending order.
  std::vector<std::string> node_ids() const;

  bool operator==(const DeviceGraph&) const = default;
};

struct Identity {
  std::string user_id;
  std::string display_name;
  std::string key_ref;

  bool operator==(const Identity&) const = default;
};

// `from_user` grants `privileges_granted` to requests arriving from
// `to_user` over `channel_id`.
struct TrustEdge {
  std::string from_user;
  std::string to_user;
  std::string channel_id;
  PrivilegeSet privileges_granted;

  bool operator==(const TrustEdge&) const = default;
};

struct SharedSpace {
  std::string space_id;
  std::vector<std::string> members;

  bool operator==(const SharedSpace&) const = default;
};

struct SocialGraph {
  std::vector<Identity> users;
  std::vector<TrustEdge> edges;
  std::vector<SharedSpace> spaces;

  const Identity* find_user(std::string_view user_id) const;
  const Identity& user(std::string_view user_id) const;
  const SharedSpace* find_space(std::string_view space_id) const;
  const TrustEdge* find_trust_edge(std::string_view from_user,
                                   std::string_view to_user,
                                   std::string_view channel_id) const;
  bool has_channel(std::string_view channel_id) const;

  bool operator==(const SocialGraph&) const = default;
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

ValidationReport validate_graph(const DeviceGraph& g);
ValidationReport validate_social_graph(const SocialGraph& g);

// required ⊆ profile.capabilities
bool capability_satisfies(const CapabilityProfile& profile,
                          const CapabilitySet& required);

// Undirected connectivity over sync edges. Throws Error(unknown_id).
bool reachable(const DeviceGraph& g, std::string_view a, std::string_view b);

// All-pairs minimum transfer cost per payload unit over sync edges.
class DistanceTable {
 public:
  explicit DistanceTable(const DeviceGraph& g);

  // nullopt when no path exists. Throws Error(unknown_id).
  std::optional<Rational> cost(std::string_view from, std::string_view to) const;

 private:
  std::size_t index(std::string_view node_id) const;

  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<std::vector<std::optional<Rational>>> dist_;
};

std::optional<Rational> shortest_path_cost(const DeviceGraph& g,
                                           std::string_view from,
                                           std::string_view to);

// Combined document with keys "nodes", "sync_edges", "users",
// "trust_edges", "spaces". Missing sections are empty; unknown keys are
// rejected.
struct TopologyDocument {
  DeviceGraph devices;
  SocialGraph social;
};

TopologyDocument topology_from_json(const nlohmann::json& j);
nlohmann::json topology_to_json(const TopologyDocument& doc);

DeviceGraph device_graph_from_json(const nlohmann::json& j);
nlohmann::json device_graph_to_json(const DeviceGraph& g);
SocialGraph social_graph_from_json(const nlohmann::json& j);
nlohmann::json social_graph_to_json(const SocialGraph& g);

Identity identity_from_json(const nlohmann::json& j);
nlohmann::json identity_to_json(const Identity& id);

}  // namespace topoclaw
