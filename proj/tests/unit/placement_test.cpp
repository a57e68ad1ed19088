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

#include <gtest/gtest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "topoclaw/error.hpp"
#include "topoclaw/placement.hpp"

namespace topoclaw {
namespace {

DeviceNode make_node(std::string id, CapabilitySet caps) {
  DeviceNode n;
  n.node_id = id;
  n.profile.capabilities = std::move(caps);
  n.workspace_root = "/ws/" + id;
  return n;
}

ActionSpec make_action(std::string id, CapabilitySet caps) {
  return {id, "step", std::move(caps), {EffectKind::read, "x"}, {}};
}

// Desktop search then phone SMS over one sync edge.
struct CrossDevice {
  DeviceGraph g{{make_node("n1", {"fs.search"}), make_node("n2", {"sms.send"})},
                {{"n1", "n2", Rational(1)}}};
  TaskDag dag{{make_action("v_read", {"fs.search"}), make_action("v_sms", {"sms.send"})},
              {{"v_read", "v_sms", Rational(1)}}};
};

TEST(PlacementCost, Examples) {
  DeviceGraph two{{make_node("a", {"x"}), make_node("b", {"x"})}, {{"a", "b", Rational(3)}}};
  TaskDag dag{{make_action("u", {"x"}), make_action("v", {"x"})}, {{"u", "v", Rational(2)}}};
  EXPECT_EQ(placement_cost(dag, two, {{"u", "a"}, {"v", "a"}}), Rational(0));
  EXPECT_EQ(placement_cost(dag, two, {{"u", "a"}, {"v", "b"}}), Rational(6));

  DeviceGraph line{{make_node("n1", {"x"}), make_node("n2", {"x"}), make_node("n3", {"x"})},
                   {{"n1", "n2", Rational(1)}, {"n2", "n3", Rational(1)}}};
  TaskDag one{{make_action("u", {"x"}), make_action("v", {"x"})}, {{"u", "v", Rational(1)}}};
  EXPECT_EQ(placement_cost(one, line, {{"u", "n1"}, {"v", "n3"}}), Rational(2));
}

TEST(PlacementCost, RejectsBadAssignments) {
  CrossDevice c;
  EXPECT_THROW(placement_cost(c.dag, c.g, {{"v_read", "n1"}}), Error);
  EXPECT_THROW(placement_cost(c.dag, c.g, {{"v_read", "n2"}, {"v_sms", "n2"}}), Error);
  EXPECT_THROW(placement_cost(c.dag, c.g, {{"v_read", "n1"}, {"v_sms", "n7"}}), Error);
}

TEST(PlacementCost, UnreachablePairWithPayload) {
  DeviceGraph split{{make_node("a", {"x"}), make_node("b", {"y"})}, {}};
  TaskDag dag{{make_action("u", {"x"}), make_action("v", {"y"})}, {{"u", "v", Rational(1)}}};
  try {
    placement_cost(dag, split, {{"u", "a"}, {"v", "b"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unreachable);
  }
}

TEST(PlaceExhaustive, CrossDeviceRouting) {
  CrossDevice c;
  auto p = place_exhaustive(c.dag, c.g);
  EXPECT_EQ(p.assignment, (Assignment{{"v_read", "n1"}, {"v_sms", "n2"}}));
  EXPECT_EQ(p.total_cost, Rational(1));
  EXPECT_EQ(place_greedy(c.dag, c.g), p);
}

TEST(PlaceExhaustive, SingleCapableNode) {
  DeviceGraph g{{make_node("solo", {"a", "b"})}, {}};
  TaskDag dag{{make_action("x", {"a"}), make_action("y", {"b"})}, {{"x", "y", Rational(5)}}};
  auto p = place_exhaustive(dag, g);
  EXPECT_EQ(p.assignment, (Assignment{{"x", "solo"}, {"y", "solo"}}));
  EXPECT_EQ(p.total_cost, Rational(0));
}

TEST(PlaceExhaustive, InfeasibleNamesAction) {
  CrossDevice c;
  c.dag.actions.push_back(make_action("v_gps", {"gps.read"}));
  for (auto solver : {Solver::exhaustive, Solver::greedy}) {
    try {
      place(c.dag, c.g, solver);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::infeasible);
      EXPECT_NE(std::string(e.what()).find("v_gps"), std::string::npos);
    }
  }
}

TEST(PlaceExhaustive, SearchGuard) {
  DeviceGraph g;
  for (int i = 0; i < 10; ++i) g.nodes.push_back(make_node("n" + std::to_string(i), {"x"}));
  TaskDag dag;
  for (int i = 0; i < 8; ++i) dag.actions.push_back(make_action("a" + std::to_string(i), {"x"}));
  try {
    place_exhaustive(dag, g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::search_guard);
  }

  // 4 actions over 4 nodes is 256 assignments: the guard is inclusive.
  dag.actions.resize(4);
  g.nodes.resize(4);
  EXPECT_THROW(place_exhaustive(dag, g, 255), Error);
  EXPECT_NO_THROW(place_exhaustive(dag, g, 256));
}

TEST(PlaceGreedy, ZeroPayloadUsesSmallestFeasibleNode) {
  DeviceGraph g{{make_node("zeta", {"x", "y"}), make_node("alpha", {"x"}), make_node("mid", {"y"})},
                {{"zeta", "alpha", Rational(4)}}};
  TaskDag dag{{make_action("p", {"x"}), make_action("q", {"y"})}, {{"p", "q", Rational(0)}}};
  auto p = place_greedy(dag, g);
  EXPECT_EQ(p.assignment, (Assignment{{"p", "alpha"}, {"q", "mid"}}));
  EXPECT_EQ(p.total_cost, Rational(0));
}

TEST(PlaceGreedy, CanBeWorseThanOptimum) {
  // Greedy puts `a` on the cheap node and then pays for both successors.
  DeviceGraph g{{make_node("n1", {"x"}), make_node("n2", {"x", "y"})},
                {{"n1", "n2", Rational(1)}}};
  TaskDag dag{{make_action("a", {"x"}), make_action("b", {"y"}), make_action("c", {"y"})},
              {{"a", "b", Rational(1)}, {"a", "c", Rational(1)}}};
  auto best = place_exhaustive(dag, g);
  auto quick = place_greedy(dag, g);
  EXPECT_EQ(best.total_cost, Rational(0));
  EXPECT_EQ(quick.total_cost, Rational(2));
}

TEST(PlaceGreedy, PreferenceWeightIsPaidPerAction) {
  DeviceGraph g{{make_node("a", {"x"}), make_node("b", {"x"})}, {{"a", "b", Rational(1)}}};
  g.nodes[0].preference_weight = Rational(2);
  TaskDag dag{{make_action("u", {"x"})}, {}};
  EXPECT_EQ(place_greedy(dag, g).assignment.at("u"), "b");
  EXPECT_EQ(place_exhaustive(dag, g).assignment.at("u"), "b");
}

// Oracle agreement, feasibility soundness, cost consistency, determinism.
TEST(PlacementProperties, RandomInstancesAgainstOracle) {
  testing::Rng rng(2026);
  for (int i = 0; i < 400; ++i) {
    testing::PlacementShape shape;
    shape.connected = testing::coin(rng, 0.8);
    auto inst = testing::random_placement_instance(rng, shape);
    auto want = testing::oracle_place(inst.dag, inst.graph);
    if (!want) {
      EXPECT_THROW(place_exhaustive(inst.dag, inst.graph), Error);
      continue;
    }
    auto got = place_exhaustive(inst.dag, inst.graph);
    ASSERT_EQ(got.total_cost, Rational(want->cost)) << "instance " << i;
    ASSERT_EQ(got.assignment, want->assignment) << "instance " << i;
    ASSERT_EQ(got, place_exhaustive(inst.dag, inst.graph));
    EXPECT_EQ(got.total_cost, placement_cost(inst.dag, inst.graph, got.assignment));
    for (const auto& [action, node] : got.assignment) {
      EXPECT_TRUE(capability_satisfies(inst.graph.node(node).profile,
                                       inst.dag.action(action).required_capabilities));
    }
    if (shape.connected) {
      auto quick = place_greedy(inst.dag, inst.graph);
      EXPECT_GE(quick.total_cost, got.total_cost);
      EXPECT_EQ(quick.total_cost, placement_cost(inst.dag, inst.graph, quick.assignment));
      EXPECT_EQ(quick, place_greedy(inst.dag, inst.graph));
    }
  }
}

}  // namespace
}  // namespace topoclaw
