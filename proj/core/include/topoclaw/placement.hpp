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

#include <cstdint>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "topoclaw/rational.hpp"
#include "topoclaw/taskgraph.hpp"
#include "topoclaw/topology.hpp"

namespace topoclaw {

using Assignment = std::map<std::string, std::string>;

// Routing of every DAG action onto a device node.
struct Placement {
  Assignment assignment;
  Rational total_cost{0};

  bool operator==(const Placement&) const = default;
};

enum class Solver { exhaustive, greedy };

std::string_view to_string(Solver solver);
Solver solver_from_string(std::string_view text);

inline constexpr std::uint64_t kExhaustiveSearchLimit = 10'000'000;

// Sum over dependencies of payload x shortest-path transfer cost between
// the assigned nodes, plus each assigned node's preference weight.
// Errors: infeasible (missing/extra/unknown/capability-violating entries),
// unreachable (nonzero payload between disconnected nodes).
Rational placement_cost(const TaskDag& dag, const DeviceGraph& g,
                        const Assignment& assignment);

// Global minimum of placement_cost. Among equal-cost assignments the one
// that is lexicographically smallest by (action_id, node_id) wins.
// Errors: infeasible (names the first action without a capable node or
// when every assignment is disconnected), search_guard.
Placement place_exhaustive(const TaskDag& dag, const DeviceGraph& g,
                           std::uint64_t search_limit = kExhaustiveSearchLimit);

// Topological sweep, each action on the capable node with the smallest
// incremental cost against already-placed predecessors; ties by node id.
Placement place_greedy(const TaskDag& dag, const DeviceGraph& g);

Placement place(const TaskDag& dag, const DeviceGraph& g, Solver solver);

nlohmann::json placement_to_json(const Placement& p);

}  // namespace topoclaw
