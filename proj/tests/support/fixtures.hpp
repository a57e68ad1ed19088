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

#include <filesystem>
#include <string>
#include <vector>

#include "topoclaw/eventbus.hpp"
#include "topoclaw/runtime.hpp"
#include "topoclaw/scenario.hpp"
#include "topoclaw/skills.hpp"
#include "topoclaw/topology.hpp"

namespace topoclaw::testing {

// Source tree asset directory baked in at configure time.
std::filesystem::path asset_dir();

// The four scenarios shipped under assets/scenarios, in a fixed order.
const std::vector<std::string>& bundled_scenarios();

Scenario bundled_scenario(const std::string& name);

// Registry over assets/skills; loaded once.
const SkillRegistry& builtin_registry();

TopologyDocument reference_topology();
DeviceGraph single_pc_graph();

// Keys and bindings exactly as a Cluster would set them up.
KeyStore keystore_for(const Scenario& s);

DeploymentMode mode_of(const Scenario& s);

// Runs a scenario through a fresh Cluster in its own mode.
Transcript run_bundled(const std::string& name, RunOptions options = {});

// Alice's reference devices plus a single "bob-pc" node for bob, with
// baselines granting each user every capability their devices offer.
Scenario reference_cluster_scenario();

}  // namespace topoclaw::testing
