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
#include "topoclaw/governance.hpp"

namespace topoclaw {
namespace {

ActionSpec write_action(std::string target) {
  return {"w", "manage_files", {"fs.write"}, {EffectKind::write, std::move(target)}, {}};
}

ActionContext user_context(std::string root = "/ws") {
  ActionContext c;
  c.owner = "alice";
  c.node_id = "n1";
  c.workspace_root = std::move(root);
  return c;
}

TEST(EvaluateSafe, AllAllow) {
  LayerStack layers = {make_constant_layer("a", Verdict::allowed()),
                       make_constant_layer("b", Verdict::allowed()),
                       make_constant_layer("c", Verdict::allowed())};
  auto d = evaluate_safe(write_action("/ws/x"), user_context(), layers);
  EXPECT_TRUE(d.overall);
  EXPECT_EQ(d.verdicts.size(), 3u);
  EXPECT_EQ(d.first_denial(), nullptr);
}

TEST(EvaluateSafe, OneDenyKillsConjunctionWithoutShortCircuit) {
  LayerStack layers = {make_constant_layer("a", Verdict::allowed()),
                       make_constant_layer("b", Verdict::denied("outside workspace")),
                       make_constant_layer("c", Verdict::allowed())};
  auto d = evaluate_safe(write_action("/ws/x"), user_context(), layers);
  EXPECT_FALSE(d.overall);
  ASSERT_EQ(d.verdicts.size(), 3u);
  EXPECT_EQ(d.verdicts[0].first, "a");
  EXPECT_EQ(d.verdicts[2].first, "c");
  ASSERT_NE(d.first_denial(), nullptr);
  EXPECT_EQ(d.first_denial()->first, "b");
}

TEST(EvaluateSafe, EmptyStackDenies) {
  auto d = evaluate_safe(write_action("/ws/x"), user_context(), {});
  EXPECT_FALSE(d.overall);
}

TEST(EvaluateSafe, ThrowingLayerDenies) {
  LayerStack layers = {{"boom", [](const ActionSpec&, const ActionContext&) -> Verdict {
                          throw std::runtime_error("bad");
                        }}};
  EXPECT_FALSE(evaluate_safe(write_action("/ws/x"), user_context(), layers).overall);
}

TEST(EvaluateSafe, TruthTablesUpToFourLayers) {
  for (int k = 1; k <= 4; ++k) {
    for (int mask = 0; mask < (1 << k); ++mask) {
      LayerStack layers;
      bool expected = true;
      for (int i = 0; i < k; ++i) {
        bool allow = mask & (1 << i);
        expected = expected && allow;
        layers.push_back(make_constant_layer(
            "l" + std::to_string(i), allow ? Verdict::allowed() : Verdict::denied("no")));
      }
      auto d = evaluate_safe(write_action("/ws/x"), user_context(), layers);
      ASSERT_EQ(d.overall, expected) << "k=" << k << " mask=" << mask;
      ASSERT_EQ(d.verdicts.size(), static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i) {
        ASSERT_EQ(d.verdicts[static_cast<std::size_t>(i)].second.allow, bool(mask & (1 << i)));
      }
    }
  }
}

TEST(EffectivePrivileges, Examples) {
  PrivilegeSet baseline{{"fs.read", "msg.send", "fs.private"}};
  EXPECT_EQ(effective_privileges(baseline, {{"msg.send", "fs.read"}}),
            (PrivilegeSet{{"fs.read", "msg.send"}}));
  EXPECT_EQ(effective_privileges(baseline, baseline), baseline);
  EXPECT_EQ(effective_privileges(baseline, {{"sms.send"}}), PrivilegeSet{});
}

TEST(EffectivePrivileges, BoundedByBothArguments) {
  testing::Rng rng(99);
  for (int i = 0; i < 10000; ++i) {
    auto b = testing::random_privileges(rng);
    auto r = testing::random_privileges(rng);
    auto e = effective_privileges(b, r);
    ASSERT_TRUE(is_subset(e.privileges, b.privileges));
    ASSERT_TRUE(is_subset(e.privileges, r.privileges));
    ASSERT_EQ(e, effective_privileges(r, b));
  }
}

TEST(Sandbox, Examples) {
  EXPECT_TRUE(sandbox_check({EffectKind::write, "/ws/out.txt"}, "/ws").allow);
  auto escape = sandbox_check({EffectKind::write, "/ws/../etc/passwd"}, "/ws");
  EXPECT_FALSE(escape.allow);
  EXPECT_EQ(escape.reason, "outside workspace");
  EXPECT_TRUE(sandbox_check({EffectKind::read, "/etc/hosts"}, "/ws").allow);
  EXPECT_FALSE(sandbox_check({EffectKind::write, "/wsx/file"}, "/ws").allow);
  EXPECT_FALSE(sandbox_check({EffectKind::write, "relative.txt"}, "/ws").allow);
  EXPECT_FALSE(sandbox_check({EffectKind::write, "/ws/x"}, "/ws/").allow);
}

TEST(Sandbox, NeverAllowsAWriteTheOracleCannotPlaceInside) {
  auto corpus = testing::governance_corpus(10000, 5);
  for (const auto& fc : corpus.cases) {
    if (fc.action.effect.kind != EffectKind::write) continue;
    auto v = sandbox_check(fc.action.effect, fc.context.workspace_root);
    if (!testing::oracle_inside(fc.action.effect.target, fc.context.workspace_root)) {
      ASSERT_FALSE(v.allow) << fc.action.effect.target << " under " << fc.context.workspace_root;
    } else {
      ASSERT_TRUE(v.allow) << fc.action.effect.target << " under " << fc.context.workspace_root;
    }
  }
}

struct Engine {
  testing::GovernanceWorld world = testing::make_governance_world();
  PolicyEngine engine{world.config, world.keys, world.social};
};

TEST(PrivilegeLayer, ExternalRequesterIsBoundedByTrustEdge) {
  Engine e;
  EventFactory f(*e.world.keys);
  ActionSpec read{"r", "search_files", {"fs.search"}, {EffectKind::read, "/home/alice/private/d.txt"}, {}};
  ActionContext c = user_context("/home/alice");
  c.event = f.attribute(canonical_action_bytes(read), e.world.social->user("alice"),
                        "alice.twin", Role::owner);
  EXPECT_TRUE(evaluate_safe(read, c, e.engine.hub_layers()).overall);

  c.origin = Origin::external;
  c.requester = e.world.social->user("bob");
  c.channel_id = "dm-ab";
  auto d = evaluate_safe(read, c, e.engine.hub_layers());
  EXPECT_FALSE(d.overall);
  ASSERT_NE(d.first_denial(), nullptr);
  EXPECT_EQ(d.first_denial()->first, "privilege");
  EXPECT_EQ(d.first_denial()->second.reason, "missing privileges: fs.private");

  c.requester.reset();
  EXPECT_FALSE(evaluate_safe(read, c, e.engine.hub_layers()).overall);
}

TEST(AttributionLayer, RequiresMatchingSignedEvent) {
  Engine e;
  EventFactory f(*e.world.keys);
  auto a = write_action("/home/alice/x");
  ActionContext c = user_context("/home/alice");
  auto layer = make_attribution_layer(e.world.keys);
  EXPECT_FALSE(layer.evaluate(a, c).allow);
  c.event = f.attribute(canonical_action_bytes(a), e.world.social->user("alice"), "alice.twin",
                        Role::owner);
  EXPECT_TRUE(layer.evaluate(a, c).allow);
  EXPECT_FALSE(layer.evaluate(write_action("/home/alice/y"), c).allow);
  c.owner = "bob";
  EXPECT_FALSE(layer.evaluate(a, c).allow);
}

TEST(LocalRules, DeniedKindsAndReadOnlyPaths) {
  LocalRules rules;
  rules.deny_effect_kinds = {EffectKind::exec};
  rules.read_only_paths = {"config"};
  auto layer = make_local_rules_layer("local", rules);
  auto c = user_context("/ws");
  EXPECT_FALSE(layer.evaluate({"x", "v", {}, {EffectKind::exec, "ls"}, {}}, c).allow);
  EXPECT_FALSE(layer.evaluate(write_action("/ws/config/a"), c).allow);
  EXPECT_TRUE(layer.evaluate(write_action("/ws/configs/a"), c).allow);
  EXPECT_TRUE(layer.evaluate({"x", "v", {}, {EffectKind::read, "/ws/config/a"}, {}}, c).allow);
}

TEST(EdgeVerify, Cases) {
  Engine e;
  EventFactory f(*e.world.keys);
  DeviceNode node;
  node.node_id = "alice-node";
  node.workspace_root = "/home/alice";
  auto a = write_action("/home/alice/out.txt");
  auto c = user_context("/home/alice");
  auto ev = f.attribute(canonical_action_bytes(a), e.world.social->user("alice"), "alice.twin",
                        Role::owner);
  Envelope env{ev, "hub", "alice-node", "system:alice-node", "d1"};
  auto layers = e.engine.edge_layers("alice-node");
  EXPECT_TRUE(edge_verify(node, a, c, layers, env, *e.world.keys).overall);

  auto bad = env;
  bad.event.auth_tag[0] ^= 1;
  auto d = edge_verify(node, a, c, layers, bad, *e.world.keys);
  EXPECT_FALSE(d.overall);
  EXPECT_EQ(d.verdicts.at(0).second.reason, "unattributed action");

  auto misrouted = env;
  misrouted.dst_node = "elsewhere";
  EXPECT_FALSE(edge_verify(node, a, c, layers, misrouted, *e.world.keys).overall);

  LayerStack stricter = layers;
  stricter.push_back(make_local_rules_layer("local", {{EffectKind::write}, {}}));
  auto blocked = edge_verify(node, a, c, stricter, env, *e.world.keys);
  EXPECT_FALSE(blocked.overall);
  EXPECT_EQ(blocked.first_denial()->first, "local");
}

TEST(GovernanceProperties, OriginParityPerLayer) {
  auto corpus = testing::governance_corpus(10000, 17);
  PolicyEngine engine(corpus.world.config, corpus.world.keys, corpus.world.social);
  auto layers = engine.hub_layers();
  layers.push_back(make_local_rules_layer("local", {{}, {"private"}}));
  for (const auto& fc : corpus.cases) {
    auto u = fc.context;
    u.origin = Origin::user;
    auto s = fc.context;
    s.origin = Origin::scheduler;
    ASSERT_EQ(evaluate_safe(fc.action, u, layers), evaluate_safe(fc.action, s, layers));
  }
}

TEST(GovernanceProperties, AddingLayersNeverTurnsDenyIntoAllow) {
  auto corpus = testing::governance_corpus(3000, 23);
  PolicyEngine engine(corpus.world.config, corpus.world.keys, corpus.world.social);
  LayerStack pool = engine.hub_layers();
  pool.push_back(make_local_rules_layer("local", {{EffectKind::exec}, {"reports"}}));
  pool.push_back(make_constant_layer("open", Verdict::allowed()));
  testing::Rng rng(1);
  for (const auto& fc : corpus.cases) {
    LayerStack base;
    LayerStack extended;
    for (const auto& layer : pool) {
      bool in_base = testing::coin(rng, 0.5);
      if (in_base) base.push_back(layer);
      if (in_base || testing::coin(rng, 0.5)) extended.push_back(layer);
    }
    if (base.empty()) continue;
    auto before = evaluate_safe(fc.action, fc.context, base);
    auto after = evaluate_safe(fc.action, fc.context, extended);
    if (!before.overall) ASSERT_FALSE(after.overall);
  }
}

TEST(PolicyConfigJson, RoundTripsAndRejectsUnknownLayer) {
  auto config = testing::make_governance_world().config;
  config.node_layers["phone"] = {{"phone_rules", "local_rules", {}, {{EffectKind::exec}, {"cfg"}}}};
  auto again = policy_config_from_json(policy_config_to_json(config));
  EXPECT_EQ(policy_config_to_json(again), policy_config_to_json(config));

  auto j = policy_config_to_json(config);
  j["layers"].push_back({{"type", "vibes"}});
  EXPECT_THROW(policy_config_from_json(j), Error);
}

TEST(ContextJson, RoundTrips) {
  auto corpus = testing::governance_corpus(200, 8);
  for (const auto& fc : corpus.cases) {
    if (fc.context.origin == Origin::external && !fc.context.requester) continue;
    auto back = context_from_json(context_to_json(fc.context));
    EXPECT_EQ(context_to_json(back), context_to_json(fc.context));
  }
}

}  // namespace
}  // namespace topoclaw
