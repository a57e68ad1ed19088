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

#include <algorithm>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "topoclaw/error.hpp"
#include "topoclaw/topology.hpp"

namespace topoclaw {
namespace {

DeviceNode make_node(std::string id, CapabilitySet caps = {},
                     EnvironmentClass env = EnvironmentClass::pc) {
  DeviceNode n;
  n.node_id = id;
  n.profile.capabilities = std::move(caps);
  n.profile.environment_class = env;
  n.workspace_root = "/ws/" + id;
  return n;
}

bool mentions(const ValidationReport& r, const std::string& text) {
  return std::any_of(r.violations.begin(), r.violations.end(),
                     [&](const std::string& v) { return v.find(text) != std::string::npos; });
}

TEST(ValidateGraph, TwoNodesOneEdgeIsOk) {
  DeviceGraph g{{make_node("n1"), make_node("n2")}, {{"n1", "n2", Rational(1)}}};
  EXPECT_TRUE(validate_graph(g).ok());
}

TEST(ValidateGraph, DanglingEndpoint) {
  DeviceGraph g{{make_node("n1")}, {{"n1", "n9", Rational(1)}}};
  auto r = validate_graph(g);
  EXPECT_TRUE(mentions(r, "dangling edge endpoint n9"));
}

TEST(ValidateGraph, DuplicateNodeId) {
  DeviceGraph g{{make_node("n1"), make_node("n1")}, {}};
  EXPECT_TRUE(mentions(validate_graph(g), "duplicate node id"));
}

TEST(ValidateGraph, ReportsEveryViolation) {
  auto bad_root = make_node("n2");
  bad_root.workspace_root = "/ws/../n2/";
  DeviceGraph g{{make_node("n1"), bad_root},
                {{"n1", "n1", Rational(1)}, {"n1", "n2", Rational(-1)},
                 {"n1", "n2", Rational(2)}}};
  auto r = validate_graph(g);
  EXPECT_TRUE(mentions(r, "workspace_root"));
  EXPECT_TRUE(mentions(r, "self-loop"));
  EXPECT_TRUE(mentions(r, "negative cost"));
  EXPECT_TRUE(mentions(r, "duplicate edge"));
}

TEST(ValidateSocial, DanglingMembersAndEmptyChannels) {
  SocialGraph s;
  s.users = {{"alice", "Alice", "k"}, {"alice", "Again", "k"}};
  s.edges = {{"alice", "zed", "dm", {}}, {"alice", "alice", "", {}}};
  s.spaces = {{"team", {"alice", "ghost"}}};
  auto r = validate_social_graph(s);
  EXPECT_TRUE(mentions(r, "duplicate user id"));
  EXPECT_TRUE(mentions(r, "zed"));
  EXPECT_TRUE(mentions(r, "ghost"));
}

TEST(CapabilitySatisfies, Examples) {
  CapabilityProfile p{{"fs.search", "fs.read"}, EnvironmentClass::pc};
  EXPECT_TRUE(capability_satisfies(p, {"fs.search"}));
  EXPECT_FALSE(capability_satisfies({{"sms.send"}, EnvironmentClass::mobile}, {"fs.search"}));
  EXPECT_TRUE(capability_satisfies(p, {}));
  EXPECT_TRUE(capability_satisfies({}, {}));
}

TEST(CapabilitySatisfies, Monotone) {
  testing::Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    auto prof = testing::random_privileges(rng).privileges;
    auto req = testing::random_privileges(rng).privileges;
    auto more = prof;
    more.merge(testing::random_privileges(rng).privileges);
    auto stricter = req;
    stricter.merge(testing::random_privileges(rng).privileges);
    CapabilityProfile p{prof, EnvironmentClass::pc};
    CapabilityProfile bigger{more, EnvironmentClass::pc};
    if (capability_satisfies(p, req)) EXPECT_TRUE(capability_satisfies(bigger, req));
    if (!capability_satisfies(p, req)) EXPECT_FALSE(capability_satisfies(p, stricter));
  }
}

TEST(Reachable, Examples) {
  DeviceGraph two{{make_node("n1"), make_node("n2")}, {{"n1", "n2", Rational(1)}}};
  EXPECT_TRUE(reachable(two, "n1", "n1"));
  EXPECT_TRUE(reachable(two, "n1", "n2"));
  EXPECT_TRUE(reachable(two, "n2", "n1"));
  DeviceGraph three{{make_node("n1"), make_node("n2"), make_node("n3")},
                    {{"n1", "n2", Rational(1)}}};
  EXPECT_FALSE(reachable(three, "n1", "n3"));
  EXPECT_THROW(reachable(three, "n1", "n7"), Error);
}

TEST(ShortestPath, LineOfThree) {
  DeviceGraph g{{make_node("n1"), make_node("n2"), make_node("n3")},
                {{"n1", "n2", Rational(1)}, {"n2", "n3", Rational(1)}}};
  EXPECT_EQ(shortest_path_cost(g, "n1", "n3"), Rational(2));
  EXPECT_EQ(testing::oracle_path_cost(g, "n1", "n3"), 2);
}

TEST(ShortestPath, ReverseEdgeOverridesMirror) {
  DeviceGraph g{{make_node("a"), make_node("b")},
                {{"a", "b", Rational(1)}, {"b", "a", Rational(5)}}};
  EXPECT_EQ(shortest_path_cost(g, "a", "b"), Rational(1));
  EXPECT_EQ(shortest_path_cost(g, "b", "a"), Rational(5));
}

TEST(ShortestPath, FractionalCostsStayExact) {
  DeviceGraph g{{make_node("a"), make_node("b"), make_node("c")},
                {{"a", "b", Rational(1, 3)}, {"b", "c", Rational(1, 3)}, {"a", "c", Rational(2, 3)}}};
  EXPECT_EQ(shortest_path_cost(g, "a", "c"), Rational(2, 3));
}

// All-pairs costs against the simple-path enumerator on random graphs.
TEST(ShortestPath, MatchesPathEnumerationOracle) {
  testing::Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    testing::PlacementShape shape;
    shape.max_nodes = 5;
    shape.connected = testing::coin(rng, 0.7);
    auto g = testing::random_placement_instance(rng, shape).graph;
    DistanceTable table(g);
    for (const auto& a : g.node_ids()) {
      for (const auto& b : g.node_ids()) {
        auto got = table.cost(a, b);
        auto want = testing::oracle_path_cost(g, a, b);
        ASSERT_EQ(got.has_value(), want.has_value()) << a << "->" << b;
        if (got) ASSERT_EQ(*got, Rational(*want)) << a << "->" << b;
      }
    }
  }
}

TEST(TopologyJson, ReferenceGraphRoundTrips) {
  auto doc = testing::reference_topology();
  EXPECT_TRUE(validate_graph(doc.devices).ok());
  EXPECT_TRUE(validate_social_graph(doc.social).ok());
  auto again = topology_from_json(topology_to_json(doc));
  EXPECT_EQ(again.devices, doc.devices);
  EXPECT_EQ(again.social, doc.social);
}

TEST(TopologyJson, RejectsUnknownFieldsAndBadEnums) {
  nlohmann::json j = device_graph_to_json(testing::single_pc_graph());
  j["nodes"][0]["colour"] = "red";
  EXPECT_THROW(device_graph_from_json(j), Error);
  j = device_graph_to_json(testing::single_pc_graph());
  j["nodes"][0]["profile"]["environment_class"] = "mainframe";
  EXPECT_THROW(device_graph_from_json(j), Error);
}

}  // namespace
}  // namespace topoclaw
