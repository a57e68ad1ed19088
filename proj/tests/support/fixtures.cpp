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

#include "fixtures.hpp"

#include <cstdlib>

#include "topoclaw/io.hpp"

namespace topoclaw::testing {

std::filesystem::path asset_dir() {
  if (const char* env = std::getenv("TOPOCLAW_ASSETS"); env && *env) return env;
  return TOPOCLAW_TEST_ASSET_DIR;
}

const std::vector<std::string>& bundled_scenarios() {
  static const std::vector<std::string> names = {
      "crossdev_sms", "negotiate_meeting", "escalation_attempt", "proactive_report"};
  return names;
}

Scenario bundled_scenario(const std::string& name) {
  return load_scenario(asset_dir() / "scenarios" / (name + ".json"));
}

const SkillRegistry& builtin_registry() {
  static const SkillRegistry registry = SkillRegistry::load_directory(asset_dir() / "skills");
  return registry;
}

TopologyDocument reference_topology() {
  return topology_from_json(read_json_file(asset_dir() / "graphs" / "reference_dual.json"));
}

DeviceGraph single_pc_graph() {
  return topology_from_json(read_json_file(asset_dir() / "graphs" / "single_pc.json")).devices;
}

KeyStore keystore_for(const Scenario& s) {
  KeyStore keys;
  for (const auto& [ref, secret] : s.keys) keys.add_key(ref, secret);
  for (const auto& user : s.social.users) keys.bind(user);
  return keys;
}

DeploymentMode mode_of(const Scenario& s) {
  return s.mode.value_or(DeploymentMode::full_dual);
}

Transcript run_bundled(const std::string& name, RunOptions options) {
  auto s = bundled_scenario(name);
  return run_scenario(s, mode_of(s), builtin_registry(), std::move(options));
}

Scenario reference_cluster_scenario() {
  auto doc = reference_topology();
  Scenario s;
  s.scenario_id = "reference_cluster";
  s.mode = DeploymentMode::full_dual;
  s.devices["alice"] = doc.devices;

  DeviceNode bob_pc;
  bob_pc.node_id = "bob-pc";
  bob_pc.profile.environment_class = EnvironmentClass::pc;
  bob_pc.profile.capabilities = {"fs.search", "fs.write", "msg.send", "identity.assert",
                                 "memory.write"};
  bob_pc.workspace_root = "/home/bob";
  s.devices["bob"].nodes.push_back(bob_pc);

  s.social = doc.social;
  s.keys = {{"k-alice", "alice-reference-secret"}, {"k-bob", "bob-reference-secret"}};
  s.policy = default_policy_config();
  for (const auto& [user, g] : s.devices) {
    auto& baseline = s.policy.baseline_privileges[user].privileges;
    for (const auto& n : g.nodes) {
      baseline.insert(n.profile.capabilities.begin(), n.profile.capabilities.end());
    }
  }
  s.memory_capacity = 16;
  s.workspaces["desktop"] = {{"docs/contacts.csv", "name,phone\nbob,+15550100\n"}};
  return s;
}

}  // namespace topoclaw::testing
