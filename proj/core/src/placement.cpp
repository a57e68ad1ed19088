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

#include "topoclaw/placement.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <vector>

#include "topoclaw/error.hpp"

namespace topoclaw {

std::string_view to_string(Solver solver) {
  return solver == Solver::exhaustive ? "exhaustive" : "greedy";
}

Solver solver_from_string(std::string_view text) {
  if (text == "exhaustive") return Solver::exhaustive;
  if (text == "greedy") return Solver::greedy;
  throw Error(ErrorKind::bad_enum, "unknown solver \"" + std::string(text) + "\"");
}

namespace {

// Capable nodes per action in ascending node id order.
std::vector<std::string> feasible_nodes(const ActionSpec& action,
                                        const DeviceGraph& g) {
  std::vector<std::string> out;
  for (const auto& id : g.node_ids()) {
    if (capability_satisfies(g.node(id).profile, action.required_capabilities)) {
      out.push_back(id);
    }
  }
  return out;
}

[[noreturn]] void no_capable_node(const ActionSpec& action) {
  throw Error(ErrorKind::infeasible,
              "action " + action.action_id + " has no node offering {" +
                  join(action.required_capabilities) + "}");
}

std::vector<const ActionSpec*> sorted_actions(const TaskDag& dag) {
  std::vector<const ActionSpec*> out;
  for (const auto& a : dag.actions) out.push_back(&a);
  std::sort(out.begin(), out.end(), [](const ActionSpec* l, const ActionSpec* r) {
    return l->action_id < r->action_id;
  });
  return out;
}

}  // namespace

Rational placement_cost(const TaskDag& dag, const DeviceGraph& g,
                        const Assignment& assignment) {
  if (assignment.size() != dag.actions.size()) {
    throw Error(ErrorKind::infeasible, "assignment does not cover every action exactly once");
  }
  Rational cost{0};
  for (const auto& action : dag.actions) {
    auto it = assignment.find(action.action_id);
    if (it == assignment.end()) {
      throw Error(ErrorKind::infeasible, "action " + action.action_id + " is unassigned");
    }
    const auto* node = g.find_node(it->second);
    if (!node) {
      throw Error(ErrorKind::infeasible, "action " + action.action_id +
                                             " assigned to unknown node " + it->second);
    }
    if (!capability_satisfies(node->profile, action.required_capabilities)) {
      throw Error(ErrorKind::infeasible, "node " + node->node_id +
                                             " cannot satisfy action " + action.action_id);
    }
    cost += node->preference_weight;
  }
  DistanceTable dist(g);
  for (const auto& dep : dag.deps) {
    if (is_zero(dep.payload_units)) continue;
    const auto& from = assignment.at(dep.from_action);
    const auto& to = assignment.at(dep.to_action);
    auto hop = dist.cost(from, to);
    if (!hop) {
      throw Error(ErrorKind::unreachable, "no sync path from " + from + " to " + to +
                                              " for dependency " + dep.from_action +
                                              "->" + dep.to_action);
    }
    cost += dep.payload_units * *hop;
  }
  return cost;
}

Placement place_exhaustive(const TaskDag& dag, const DeviceGraph& g,
                           std::uint64_t search_limit) {
  auto actions = sorted_actions(dag);
  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < actions.size(); ++i) position[actions[i]->action_id] = i;

  std::vector<std::vector<std::string>> options;
  std::uint64_t space = 1;
  for (const auto* a : actions) {
    options.push_back(feasible_nodes(*a, g));
    if (options.back().empty()) no_capable_node(*a);
    const std::uint64_t n = options.back().size();
    if (space > search_limit / n) {
      throw Error(ErrorKind::search_guard, "exhaustive search space exceeds " +
                                               std::to_string(search_limit) + " assignments");
    }
    space *= n;
  }

  // Dependencies are charged when the later (by sorted position) endpoint
  // is assigned.
  struct Charge {
    std::size_t other;
    bool other_is_source;
    Rational payload;
  };
  std::vector<std::vector<Charge>> charges(actions.size());
  for (const auto& d : dag.deps) {
    if (is_zero(d.payload_units)) continue;
    auto u = position.at(d.from_action);
    auto v = position.at(d.to_action);
    if (u < v) {
      charges[v].push_back({u, true, d.payload_units});
    } else {
      charges[u].push_back({v, false, d.payload_units});
    }
  }

  DistanceTable dist(g);
  std::vector<std::size_t> choice(actions.size(), 0);
  std::vector<std::size_t> best_choice;
  std::optional<Rational> best;

  auto step_cost = [&](std::size_t depth, const std::string& node) -> std::optional<Rational> {
    Rational c = g.node(node).preference_weight;
    for (const auto& ch : charges[depth]) {
      const auto& other = options[ch.other][choice[ch.other]];
      auto hop = ch.other_is_source ? dist.cost(other, node) : dist.cost(node, other);
      if (!hop) return std::nullopt;
      c += ch.payload * *hop;
    }
    return c;
  };

  auto search = [&](auto&& self, std::size_t depth, const Rational& partial) -> void {
    if (depth == actions.size()) {
      if (!best || partial < *best) {
        best = partial;
        best_choice = choice;
      }
      return;
    }
    for (std::size_t k = 0; k < options[depth].size(); ++k) {
      choice[depth] = k;
      auto c = step_cost(depth, options[depth][k]);
      if (!c) continue;
      Rational next = partial + *c;
      if (best && next > *best) continue;
      self(self, depth + 1, next);
    }
  };
  search(search, 0, Rational(0));

  if (!best) {
    throw Error(ErrorKind::infeasible,
                "no capable assignment connects every dependency with a sync path");
  }
  Placement p;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    p.assignment[actions[i]->action_id] = options[i][best_choice[i]];
  }
  p.total_cost = placement_cost(dag, g, p.assignment);
  return p;
}

Placement place_greedy(const TaskDag& dag, const DeviceGraph& g) {
  for (const auto* a : sorted_actions(dag)) {
    if (feasible_nodes(*a, g).empty()) no_capable_node(*a);
  }
  DistanceTable dist(g);
  Placement p;
  for (const auto& id : topo_order(dag)) {
    const auto& action = dag.action(id);
    std::optional<Rational> best;
    std::string best_node;
    for (const auto& node : feasible_nodes(action, g)) {
      std::optional<Rational> c = g.node(node).preference_weight;
      for (const auto& d : dag.deps) {
        if (d.to_action != id || is_zero(d.payload_units)) continue;
        auto hop = dist.cost(p.assignment.at(d.from_action), node);
        if (!hop) {
          c.reset();
          break;
        }
        *c += d.payload_units * *hop;
      }
      if (c && (!best || *c < *best)) {
        best = c;
        best_node = node;
      }
    }
    if (!best) {
      throw Error(ErrorKind::unreachable, "no capable node for action " + id +
                                              " is reachable from its predecessors");
    }
    p.assignment[id] = best_node;
  }
  p.total_cost = placement_cost(dag, g, p.assignment);
  return p;
}

Placement place(const TaskDag& dag, const DeviceGraph& g, Solver solver) {
  return solver == Solver::exhaustive ? place_exhaustive(dag, g) : place_greedy(dag, g);
}

nlohmann::json placement_to_json(const Placement& p) {
  return {{"assignment", p.assignment}, {"total_cost", rational_to_json(p.total_cost)}};
}

}  // namespace topoclaw
