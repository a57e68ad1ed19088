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

#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>
#include <vector>

namespace topoclaw::testing {
namespace {

std::int64_t integral(const Rational& r) {
  if (r.denominator() != 1) throw std::logic_error("oracle needs integral values");
  return r.numerator();
}

struct Arc {
  std::string to;
  std::int64_t cost;
};

std::map<std::string, std::vector<Arc>> arcs_of(const DeviceGraph& g) {
  std::set<std::pair<std::string, std::string>> listed;
  for (const auto& e : g.edges) listed.emplace(e.from_node, e.to_node);
  std::map<std::string, std::vector<Arc>> out;
  for (const auto& e : g.edges) {
    out[e.from_node].push_back({e.to_node, integral(e.transfer_cost_per_unit)});
    if (!listed.count({e.to_node, e.from_node})) {
      out[e.to_node].push_back({e.from_node, integral(e.transfer_cost_per_unit)});
    }
  }
  return out;
}

bool has_all(const CapabilitySet& offered, const CapabilitySet& wanted) {
  for (const auto& w : wanted) {
    if (std::find(offered.begin(), offered.end(), w) == offered.end()) return false;
  }
  return true;
}

}  // namespace

std::optional<std::int64_t> oracle_path_cost(const DeviceGraph& g, const std::string& from,
                                             const std::string& to) {
  if (from == to) return 0;
  auto arcs = arcs_of(g);
  std::optional<std::int64_t> best;
  std::set<std::string> on_path{from};
  std::function<void(const std::string&, std::int64_t)> walk = [&](const std::string& at,
                                                                   std::int64_t so_far) {
    if (at == to) {
      if (!best || so_far < *best) best = so_far;
      return;
    }
    for (const auto& arc : arcs[at]) {
      if (on_path.count(arc.to)) continue;
      on_path.insert(arc.to);
      walk(arc.to, so_far + arc.cost);
      on_path.erase(arc.to);
    }
  };
  walk(from, 0);
  return best;
}

std::optional<OraclePlacement> oracle_place(const TaskDag& dag, const DeviceGraph& g) {
  std::vector<std::string> actions;
  for (const auto& a : dag.actions) actions.push_back(a.action_id);
  std::sort(actions.begin(), actions.end());
  std::vector<std::string> nodes;
  for (const auto& n : g.nodes) nodes.push_back(n.node_id);
  std::sort(nodes.begin(), nodes.end());
  if (nodes.empty()) return actions.empty() ? std::optional<OraclePlacement>(OraclePlacement{})
                                            : std::nullopt;

  // Memoised pair costs; the simple-path walk is slow but tiny here.
  std::map<std::pair<std::string, std::string>, std::optional<std::int64_t>> hop;
  for (const auto& a : nodes) {
    for (const auto& b : nodes) hop[{a, b}] = oracle_path_cost(g, a, b);
  }

  std::optional<OraclePlacement> best;
  std::vector<std::size_t> digits(actions.size(), 0);
  while (true) {
    std::map<std::string, std::string> f;
    for (std::size_t i = 0; i < actions.size(); ++i) f[actions[i]] = nodes[digits[i]];

    bool ok = true;
    std::int64_t cost = 0;
    for (const auto& a : dag.actions) {
      const auto* node = g.find_node(f[a.action_id]);
      if (!has_all(node->profile.capabilities, a.required_capabilities)) {
        ok = false;
        break;
      }
      cost += integral(node->preference_weight);
    }
    for (const auto& d : dag.deps) {
      if (!ok) break;
      auto payload = integral(d.payload_units);
      if (payload == 0) continue;
      auto h = hop[{f[d.from_action], f[d.to_action]}];
      if (!h) {
        ok = false;
        break;
      }
      cost += payload * *h;
    }
    if (ok && (!best || cost < best->cost)) best = OraclePlacement{cost, f};

    // Odometer with the last action as the fastest digit, matching
    // lexicographic order over (action_id, node_id).
    std::size_t i = actions.size();
    while (i > 0) {
      --i;
      if (++digits[i] < nodes.size()) break;
      digits[i] = 0;
      if (i == 0) return best;
    }
    if (actions.empty()) return best;
  }
}

std::optional<std::string> oracle_normalize(std::string_view path) {
  if (path.empty() || path.front() != '/') return std::nullopt;
  std::vector<std::string> parts;
  std::string cur;
  auto flush = [&] {
    if (cur == "..") {
      if (!parts.empty()) parts.pop_back();
    } else if (!cur.empty() && cur != ".") {
      parts.push_back(cur);
    }
    cur.clear();
  };
  for (char ch : path) {
    if (ch == '/') {
      flush();
    } else {
      cur += ch;
    }
  }
  flush();
  std::string out;
  for (const auto& p : parts) out += "/" + p;
  return out.empty() ? "/" : out;
}

bool oracle_inside(std::string_view path, std::string_view root) {
  auto r = oracle_normalize(root);
  if (!r || *r != root) return false;
  auto p = oracle_normalize(path);
  if (!p) return false;
  if (*r == "/") return true;
  return *p == *r || (p->size() > r->size() && p->compare(0, r->size(), *r) == 0 &&
                      (*p)[r->size()] == '/');
}

}  // namespace topoclaw::testing
