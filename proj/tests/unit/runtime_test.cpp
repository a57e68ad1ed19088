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

#include "fixtures.hpp"
#include "topoclaw/error.hpp"
#include "topoclaw/runtime.hpp"

namespace topoclaw {
namespace {

using nlohmann::json;

std::vector<json> records_of(const Transcript& t, const std::string& kind,
                             const std::string& ref = {}) {
  std::vector<json> out;
  for (const auto& r : t.records()) {
    if (r.at("kind") != kind) continue;
    if (!ref.empty() && r.value("ref", "") != ref) continue;
    out.push_back(r);
  }
  return out;
}

TEST(Runtime, CrossDeviceFlow) {
  auto t = testing::run_bundled("crossdev_sms");
  auto placements = records_of(t, "placement");
  ASSERT_EQ(placements.size(), 1u);
  EXPECT_EQ(placements[0]["assignment"]["v_read"], "desktop");
  EXPECT_EQ(placements[0]["assignment"]["v_sms"], "mobile");
  EXPECT_EQ(placements[0]["total_cost"], 6);

  auto transfers = records_of(t, "transfer");
  ASSERT_EQ(transfers.size(), 1u);
  EXPECT_EQ(transfers[0]["node"], "desktop");

  auto effects = records_of(t, "effect");
  ASSERT_EQ(effects.size(), 2u);
  EXPECT_EQ(effects[0]["node"], "desktop");
  EXPECT_EQ(effects[1]["node"], "mobile");

  auto j = t.to_json();
  EXPECT_EQ(j["workspaces"]["mobile"]["outbox/sms.log"], "+15550100\tRunning ten minutes late\n");
}

TEST(Runtime, EveryExecutedActionWasAllowedAtBothPoints) {
  for (const auto& name : testing::bundled_scenarios()) {
    auto t = testing::run_bundled(name);
    for (const auto& e : records_of(t, "effect")) {
      auto decisions = records_of(t, "decision", e["ref"]);
      ASSERT_EQ(decisions.size(), 2u) << name << " " << e["ref"];
      EXPECT_EQ(decisions[0]["pep"], "hub");
      EXPECT_EQ(decisions[1]["pep"], "edge");
      for (const auto& d : decisions) EXPECT_EQ(d["decision"]["overall"], "allow");
    }
  }
}

TEST(Runtime, NoopIntentAllowsWithoutEffects) {
  auto s = testing::bundled_scenario("crossdev_sms");
  Cluster c(s, DeploymentMode::full_dual, testing::builtin_registry());
  auto out = c.submit_intent("alice", {"idle", {{"rest", "noop", {}, {}, Rational(0)}}});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].status, OutcomeStatus::executed);
  ASSERT_TRUE(out[0].hub && out[0].edge);
  EXPECT_TRUE(out[0].hub->overall);
  EXPECT_TRUE(records_of(c.transcript(), "effect").empty());
}

TEST(Runtime, InfeasibleIntentReportsPlacementError) {
  auto s = testing::bundled_scenario("proactive_report");
  Cluster c(s, DeploymentMode::single_node, testing::builtin_registry());
  auto out = c.submit_intent(
      "alice", {"sms", {{"text", "send_sms", {{"to", "+1"}, {"text", "hi"}}, {}, Rational(0)}}});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].status, OutcomeStatus::error);
  auto errors = records_of(c.transcript(), "error");
  ASSERT_EQ(errors.size(), 1u);
  EXPECT_EQ(errors[0]["stage"], "placement");
}

TEST(Runtime, AllowedWriteLandsInWorkspaceAndMemory) {
  auto s = testing::bundled_scenario("crossdev_sms");
  Cluster c(s, DeploymentMode::full_dual, testing::builtin_registry());
  auto out = c.submit_intent(
      "alice", {"note", {{"w", "manage_files", {{"path", "notes/a.txt"}, {"content", "hi"}}, {},
                          Rational(0)}}});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].status, OutcomeStatus::executed);
  const auto& rt = c.node(out[0].node_id);
  EXPECT_EQ(rt.workspace.read_relative("notes/a.txt"), "hi");
  ASSERT_FALSE(rt.memory.m_log.empty());
  EXPECT_EQ(rt.memory.m_log.back().kind, ObservationKind::action_result);
  EXPECT_EQ(replay(rt.memory.m_log, rt.memory.capacity), rt.memory);
}

TEST(Runtime, EdgeRuleBlocksWhatTheHubAllowed) {
  auto s = testing::bundled_scenario("crossdev_sms");
  s.policy.node_layers["mobile"] = {
      {"mobile_rules", "local_rules", {}, {{EffectKind::send}, {}}}};
  Cluster c(s, DeploymentMode::full_dual, testing::builtin_registry());
  for (const auto& st : s.script) c.run_stimulus(st);
  auto t = c.transcript();
  auto decisions = records_of(t, "decision", "sub-1/v_sms");
  ASSERT_EQ(decisions.size(), 2u);
  EXPECT_EQ(decisions[0]["pep"], "hub");
  EXPECT_EQ(decisions[0]["decision"]["overall"], "allow");
  EXPECT_EQ(decisions[1]["pep"], "edge");
  EXPECT_EQ(decisions[1]["decision"]["overall"], "deny");
  auto denials = records_of(t, "denial", "sub-1/v_sms");
  ASSERT_EQ(denials.size(), 1u);
  EXPECT_EQ(denials[0]["layer"], "mobile_rules");
  EXPECT_FALSE(c.node("mobile").workspace.read_relative("outbox/sms.log"));
}

TEST(Runtime, HubDenialSkipsDependents) {
  auto s = testing::bundled_scenario("crossdev_sms");
  s.policy.baseline_privileges["alice"].privileges.erase("fs.search");
  auto t = run_scenario(s, DeploymentMode::full_dual, testing::builtin_registry());
  EXPECT_EQ(records_of(t, "denial", "sub-1/v_read").size(), 1u);
  EXPECT_EQ(records_of(t, "skip", "sub-1/v_sms").size(), 1u);
  EXPECT_TRUE(records_of(t, "effect").empty());
}

TEST(Runtime, NegotiationAgreesOnEarliestCommonSlot) {
  auto t = testing::run_bundled("negotiate_meeting");
  auto agreements = records_of(t, "agreement");
  ASSERT_EQ(agreements.size(), 1u);
  EXPECT_EQ(agreements[0]["slot"], "2026-03-03T14:00:00Z");
  EXPECT_EQ(agreements[0]["parties"], json({"alice", "bob"}));
  std::set<std::string> humans;
  for (const auto& e : agreements[0]["events"]) humans.insert(e["human_id"].get<std::string>());
  EXPECT_EQ(humans, (std::set<std::string>{"alice", "bob"}));
  auto j = t.to_json();
  EXPECT_TRUE(j["workspaces"]["alice-pc"].contains("meetings/standup.txt"));
  EXPECT_TRUE(j["workspaces"]["bob-pc"].contains("meetings/standup.txt"));
}

TEST(Runtime, EscalationIsBoundedByTheTrustEdge) {
  auto t = testing::run_bundled("escalation_attempt");
  auto denials = records_of(t, "denial");
  ASSERT_EQ(denials.size(), 2u);
  for (const auto& d : denials) {
    EXPECT_EQ(d["layer"], "privilege");
    auto decisions = records_of(t, "decision", d["ref"]);
    ASSERT_EQ(decisions.size(), 1u);
    bool saw_inputs = false;
    for (const auto& v : decisions[0]["decision"]["verdicts"]) {
      if (v["layer_id"] != "privilege") continue;
      std::map<std::string, std::string> details;
      for (const auto& kv : v["details"]) details[kv[0]] = kv[1];
      EXPECT_EQ(details["requester"], "bob");
      EXPECT_EQ(details["effective"].find("fs.private"), std::string::npos);
      EXPECT_NE(details["baseline"].find("fs.private"), std::string::npos);
      EXPECT_NE(details["needed"].find("fs.private"), std::string::npos);
      saw_inputs = true;
    }
    EXPECT_TRUE(saw_inputs);
  }
  // The owner still reads her own diary.
  bool owner_read = false;
  for (const auto& e : records_of(t, "effect")) {
    if (e["effect"]["target"] == "/home/alice/private/diary.txt") owner_read = true;
  }
  EXPECT_TRUE(owner_read);
}

TEST(Runtime, ModesAgreeOnASingleNodeDeployment) {
  auto s = testing::bundled_scenario("crossdev_sms");
  auto& g = s.devices["alice"];
  g.nodes[0].profile.capabilities.insert("sms.send");
  g.nodes.pop_back();
  g.edges.clear();
  s.mode.reset();
  auto single = run_scenario(s, DeploymentMode::single_node, testing::builtin_registry()).to_json();
  auto dual = run_scenario(s, DeploymentMode::full_dual, testing::builtin_registry()).to_json();
  EXPECT_EQ(single["mode"], "single_node");
  single.erase("mode");
  dual.erase("mode");
  EXPECT_EQ(single, dual);
}

TEST(Runtime, ModeMismatchThrows) {
  auto s = testing::bundled_scenario("crossdev_sms");
  try {
    Cluster c(s, DeploymentMode::single_node, testing::builtin_registry());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::mode_mismatch);
  }
}

TEST(Runtime, SolversAgreeOnBundledScenarios) {
  for (const auto& name : testing::bundled_scenarios()) {
    auto s = testing::bundled_scenario(name);
    RunOptions greedy;
    RunOptions exhaustive;
    exhaustive.solver = Solver::exhaustive;
    auto a = run_scenario(s, testing::mode_of(s), testing::builtin_registry(), greedy).to_json();
    auto b = run_scenario(s, testing::mode_of(s), testing::builtin_registry(), exhaustive).to_json();
    EXPECT_EQ(a["workspaces"], b["workspaces"]) << name;
  }
}

}  // namespace
}  // namespace topoclaw
