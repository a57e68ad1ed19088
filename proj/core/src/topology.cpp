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

#include "topoclaw/topology.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "json_reader.hpp"
#include "topoclaw/error.hpp"
#include "topoclaw/path.hpp"

namespace topoclaw {

using nlohmann::json;

std::string_view to_string(EnvironmentClass env) {
  switch (env) {
    case EnvironmentClass::pc: return "pc";
    case EnvironmentClass::mobile: return "mobile";
    case EnvironmentClass::edge: return "edge";
  }
  return "pc";
}

EnvironmentClass environment_class_from_string(std::string_view text) {
  if (text == "pc") return EnvironmentClass::pc;
  if (text == "mobile") return EnvironmentClass::mobile;
  if (text == "edge") return EnvironmentClass::edge;
  throw Error(ErrorKind::bad_enum,
              "unknown environment_class \"" + std::string(text) + "\"");
}

const DeviceNode* DeviceGraph::find_node(std::string_view node_id) const {
  auto it = std::find_if(nodes.begin(), nodes.end(),
                         [&](const DeviceNode& n) { return n.node_id == node_id; });
  return it == nodes.end() ? nullptr : &*it;
}

const DeviceNode& DeviceGraph::node(std::string_view node_id) const {
  if (const auto* n = find_node(node_id)) return *n;
  throw Error(ErrorKind::unknown_id, "unknown node id " + std::string(node_id));
}

std::vector<std::string> DeviceGraph::node_ids() const {
  std::vector<std::string> ids;
  for (const auto& n : nodes) ids.push_back(n.node_id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

const Identity* SocialGraph::find_user(std::string_view user_id) const {
  auto it = std::find_if(users.begin(), users.end(),
                         [&](const Identity& u) { return u.user_id == user_id; });
  return it == users.end() ? nullptr : &*it;
}

const Identity& SocialGraph::user(std::string_view user_id) const {
  if (const auto* u = find_user(user_id)) return *u;
  throw Error(ErrorKind::unknown_id, "unknown user id " + std::string(user_id));
}

const SharedSpace* SocialGraph::find_space(std::string_view space_id) const {
  auto it = std::find_if(spaces.begin(), spaces.end(),
                         [&](const SharedSpace& s) { return s.space_id == space_id; });
  return it == spaces.end() ? nullptr : &*it;
}

const TrustEdge* SocialGraph::find_trust_edge(std::string_view from_user,
                                              std::string_view to_user,
                                              std::string_view channel_id) const {
  for (const auto& e : edges) {
    if (e.from_user == from_user && e.to_user == to_user &&
        e.channel_id == channel_id) {
      return &e;
    }
  }
  return nullptr;
}

bool SocialGraph::has_channel(std::string_view channel_id) const {
  if (find_space(channel_id)) return true;
  return std::any_of(edges.begin(), edges.end(),
                     [&](const TrustEdge& e) { return e.channel_id == channel_id; });
}

ValidationReport validate_graph(const DeviceGraph& g) {
  ValidationReport report;
  std::set<std::string> ids;
  for (const auto& n : g.nodes) {
    if (n.node_id.empty()) report.violations.push_back("empty node id");
    if (!ids.insert(n.node_id).second) {
      report.violations.push_back("duplicate node id " + n.node_id);
    }
    for (const auto& cap : n.profile.capabilities) {
      if (!is_valid_capability_id(cap)) {
        report.violations.push_back("malformed capability id \"" + cap +
                                    "\" on node " + n.node_id);
      }
    }
    if (!is_normalized_absolute(n.workspace_root)) {
      report.violations.push_back("workspace_root of node " + n.node_id +
                                  " is not absolute and normalized");
    }
    if (is_negative(n.preference_weight)) {
      report.violations.push_back("negative preference weight on node " + n.node_id);
    }
  }
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& e : g.edges) {
    for (const auto* end : {&e.from_node, &e.to_node}) {
      if (!ids.count(*end)) {
        report.violations.push_back("dangling edge endpoint " + *end);
      }
    }
    if (e.from_node == e.to_node) {
      report.violations.push_back("self-loop edge on " + e.from_node);
    }
    if (is_negative(e.transfer_cost_per_unit)) {
      report.violations.push_back("negative cost on edge " + e.from_node + "->" +
                                  e.to_node);
    }
    if (!pairs.emplace(e.from_node, e.to_node).second) {
      report.violations.push_back("duplicate edge " + e.from_node + "->" + e.to_node);
    }
  }
  return report;
}

ValidationReport validate_social_graph(const SocialGraph& g) {
  ValidationReport report;
  std::set<std::string> ids;
  for (const auto& u : g.users) {
    if (u.user_id.empty()) report.violations.push_back("empty user id");
    if (!ids.insert(u.user_id).second) {
      report.violations.push_back("duplicate user id " + u.user_id);
    }
  }
  for (const auto& e : g.edges) {
    for (const auto* end : {&e.from_user, &e.to_user}) {
      if (!ids.count(*end)) {
        report.violations.push_back("dangling trust edge endpoint " + *end);
      }
    }
    if (e.channel_id.empty()) {
      report.violations.push_back("trust edge " + e.from_user + "->" + e.to_user +
                                  " has an empty channel id");
    }
    for (const auto& p : e.privileges_granted.privileges) {
      if (!is_valid_capability_id(p)) {
        report.violations.push_back("malformed privilege \"" + p + "\"");
      }
    }
  }
  std::set<std::string> space_ids;
  for (const auto& s : g.spaces) {
    if (!space_ids.insert(s.space_id).second) {
      report.violations.push_back("duplicate space id " + s.space_id);
    }
    for (const auto& m : s.members) {
      if (!ids.count(m)) {
        report.violations.push_back("space " + s.space_id + " member " + m +
                                    " is not a known user");
      }
    }
  }
  return report;
}

bool capability_satisfies(const CapabilityProfile& profile,
                          const CapabilitySet& required) {
  return is_subset(required, profile.capabilities);
}

bool reachable(const DeviceGraph& g, std::string_view a, std::string_view b) {
  g.node(a);
  g.node(b);
  if (a == b) return true;
  std::set<std::string, std::less<>> visited{std::string(a)};
  std::vector<std::string> frontier{std::string(a)};
  while (!frontier.empty()) {
    std::string current = frontier.back();
    frontier.pop_back();
    for (const auto& e : g.edges) {
      const std::string* other = nullptr;
      if (e.from_node == current) other = &e.to_node;
      if (e.to_node == current) other = &e.from_node;
      if (other && visited.insert(*other).second) {
        if (*other == b) return true;
        frontier.push_back(*other);
      }
    }
  }
  return false;
}

DistanceTable::DistanceTable(const DeviceGraph& g) {
  auto ids = g.node_ids();
  for (std::size_t i = 0; i < ids.size(); ++i) index_.emplace(ids[i], i);
  const std::size_t n = ids.size();
  dist_.assign(n, std::vector<std::optional<Rational>>(n));
  for (std::size_t i = 0; i < n; ++i) dist_[i][i] = Rational(0);

  auto relax = [&](std::size_t i, std::size_t j, const Rational& c) {
    if (!dist_[i][j] || c < *dist_[i][j]) dist_[i][j] = c;
  };
  // Explicit edges first so that a reverse edge can override the mirror.
  std::set<std::pair<std::size_t, std::size_t>> explicit_arcs;
  for (const auto& e : g.edges) {
    auto i = index(e.from_node);
    auto j = index(e.to_node);
    if (i == j) continue;
    explicit_arcs.emplace(i, j);
    relax(i, j, e.transfer_cost_per_unit);
  }
  for (const auto& e : g.edges) {
    auto i = index(e.from_node);
    auto j = index(e.to_node);
    if (i == j || explicit_arcs.count({j, i})) continue;
    relax(j, i, e.transfer_cost_per_unit);
  }

  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!dist_[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (!dist_[k][j]) continue;
        relax(i, j, *dist_[i][k] + *dist_[k][j]);
      }
    }
  }
}

std::size_t DistanceTable::index(std::string_view node_id) const {
  auto it = index_.find(node_id);
  if (it == index_.end()) {
    throw Error(ErrorKind::unknown_id, "unknown node id " + std::string(node_id));
  }
  return it->second;
}

std::optional<Rational> DistanceTable::cost(std::string_view from,
                                            std::string_view to) const {
  return dist_[index(from)][index(to)];
}

std::optional<Rational> shortest_path_cost(const DeviceGraph& g,
                                           std::string_view from,
                                           std::string_view to) {
  return DistanceTable(g).cost(from, to);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

DeviceNode node_from_json(const json& j) {
  detail::ObjectReader r(j, "node");
  DeviceNode n;
  n.node_id = r.string("node_id");
  detail::ObjectReader profile(r.required("profile"), "node " + n.node_id + " profile");
  n.profile.capabilities = profile.string_set("capabilities");
  n.profile.environment_class =
      environment_class_from_string(profile.string("environment_class"));
  profile.finish();
  n.workspace_root = r.string("workspace_root");
  if (const auto* w = r.optional("preference_weight")) {
    n.preference_weight = rational_from_json(*w);
  }
  r.finish();
  return n;
}

json node_to_json(const DeviceNode& n) {
  json j = {{"node_id", n.node_id},
            {"profile",
             {{"capabilities", n.profile.capabilities},
              {"environment_class", to_string(n.profile.environment_class)}}},
            {"workspace_root", n.workspace_root}};
  if (!is_zero(n.preference_weight)) {
    j["preference_weight"] = rational_to_json(n.preference_weight);
  }
  return j;
}

SyncEdge edge_from_json(const json& j) {
  detail::ObjectReader r(j, "sync edge");
  SyncEdge e;
  e.from_node = r.string("from_node");
  e.to_node = r.string("to_node");
  e.transfer_cost_per_unit = rational_from_json(r.required("transfer_cost_per_unit"));
  r.finish();
  return e;
}

TrustEdge trust_from_json(const json& j) {
  detail::ObjectReader r(j, "trust edge");
  TrustEdge e;
  e.from_user = r.string("from_user");
  e.to_user = r.string("to_user");
  e.channel_id = r.string("channel_id");
  detail::ObjectReader p(r.required("privileges_granted"), "privileges_granted");
  e.privileges_granted.privileges = p.string_set("privileges");
  p.finish();
  r.finish();
  return e;
}

SharedSpace space_from_json(const json& j) {
  detail::ObjectReader r(j, "space");
  SharedSpace s;
  s.space_id = r.string("space_id");
  s.members = r.string_list("members");
  r.finish();
  return s;
}

template <typename T, typename F>
std::vector<T> list_from(const json* j, const char* what, F&& f) {
  std::vector<T> out;
  if (!j) return out;
  if (!j->is_array()) {
    throw Error(ErrorKind::schema, std::string("\"") + what + "\" must be an array");
  }
  for (const auto& item : *j) out.push_back(f(item));
  return out;
}

}  // namespace

Identity identity_from_json(const json& j) {
  detail::ObjectReader r(j, "user");
  Identity id;
  id.user_id = r.string("user_id");
  id.display_name = r.string_or("display_name", id.user_id);
  id.key_ref = r.string("key_ref");
  r.finish();
  return id;
}

json identity_to_json(const Identity& id) {
  return {{"user_id", id.user_id},
          {"display_name", id.display_name},
          {"key_ref", id.key_ref}};
}

TopologyDocument topology_from_json(const json& j) {
  detail::ObjectReader r(j, "topology");
  TopologyDocument doc;
  doc.devices.nodes = list_from<DeviceNode>(r.optional("nodes"), "nodes", node_from_json);
  doc.devices.edges =
      list_from<SyncEdge>(r.optional("sync_edges"), "sync_edges", edge_from_json);
  doc.social.users = list_from<Identity>(r.optional("users"), "users", identity_from_json);
  doc.social.edges =
      list_from<TrustEdge>(r.optional("trust_edges"), "trust_edges", trust_from_json);
  doc.social.spaces =
      list_from<SharedSpace>(r.optional("spaces"), "spaces", space_from_json);
  r.finish();
  return doc;
}

json device_graph_to_json(const DeviceGraph& g) {
  json nodes = json::array();
  for (const auto& n : g.nodes) nodes.push_back(node_to_json(n));
  json edges = json::array();
  for (const auto& e : g.edges) {
    edges.push_back({{"from_node", e.from_node},
                     {"to_node", e.to_node},
                     {"transfer_cost_per_unit", rational_to_json(e.transfer_cost_per_unit)}});
  }
  return {{"nodes", nodes}, {"sync_edges", edges}};
}

json social_graph_to_json(const SocialGraph& g) {
  json users = json::array();
  for (const auto& u : g.users) users.push_back(identity_to_json(u));
  json edges = json::array();
  for (const auto& e : g.edges) {
    edges.push_back({{"from_user", e.from_user},
                     {"to_user", e.to_user},
                     {"channel_id", e.channel_id},
                     {"privileges_granted",
                      {{"privileges", e.privileges_granted.privileges}}}});
  }
  json spaces = json::array();
  for (const auto& s : g.spaces) {
    spaces.push_back({{"space_id", s.space_id}, {"members", s.members}});
  }
  return {{"users", users}, {"trust_edges", edges}, {"spaces", spaces}};
}

json topology_to_json(const TopologyDocument& doc) {
  json j = device_graph_to_json(doc.devices);
  j.update(social_graph_to_json(doc.social));
  return j;
}

DeviceGraph device_graph_from_json(const json& j) {
  detail::ObjectReader r(j, "device graph");
  DeviceGraph g;
  g.nodes = list_from<DeviceNode>(r.optional("nodes"), "nodes", node_from_json);
  g.edges = list_from<SyncEdge>(r.optional("sync_edges"), "sync_edges", edge_from_json);
  r.finish();
  return g;
}

SocialGraph social_graph_from_json(const json& j) {
  detail::ObjectReader r(j, "social graph");
  SocialGraph g;
  g.users = list_from<Identity>(r.optional("users"), "users", identity_from_json);
  g.edges = list_from<TrustEdge>(r.optional("trust_edges"), "trust_edges", trust_from_json);
  g.spaces = list_from<SharedSpace>(r.optional("spaces"), "spaces", space_from_json);
  r.finish();
  return g;
}

}  // namespace topoclaw
