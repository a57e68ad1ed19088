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

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "topoclaw/eventbus.hpp"
#include "topoclaw/governance.hpp"
#include "topoclaw/memory.hpp"
#include "topoclaw/outcome.hpp"
#include "topoclaw/placement.hpp"
#include "topoclaw/scenario.hpp"
#include "topoclaw/scheduler.hpp"
#include "topoclaw/skills.hpp"
#include "topoclaw/transcript.hpp"
#include "topoclaw/workspace.hpp"

namespace topoclaw {

// Messages a single stimulus may trigger before the cluster gives up.
inline constexpr std::size_t kMaxMessageRounds = 32;

struct RunOptions {
  Solver solver = Solver::greedy;
  // Called after every consolidation with the node's new state.
  std::function<void(const std::string& node_id, const MemoryState&)> on_consolidate;
};

struct SubmitOptions {
  Origin origin = Origin::user;
  std::optional<Identity> requester;
  std::optional<std::string> channel;
  std::optional<Solver> solver;
};

std::string twin_of(std::string_view user_id);

struct NodeRuntime {
  DeviceNode node;
  std::string owner;
  Workspace workspace;
  MemoryState memory;
  struct Inbound {
    Envelope envelope;
    bool is_request = false;
  };
  std::deque<Inbound> inbox;
};

// Every node of a scenario on one logical clock. Nodes take turns in
// node id order; each drains its inbox in delivery order.
class Cluster {
 public:
  // Throws Error(mode_mismatch) when the scenario does not fit `mode`.
  Cluster(const Scenario& scenario, DeploymentMode mode, const SkillRegistry& registry,
          RunOptions options = {});
  ~Cluster();
  Cluster(const Cluster&) = delete;
  Cluster& operator=(const Cluster&) = delete;

  void run_stimulus(const Stimulus& s);

  // Compile, place, attribute, govern and execute. Errors are reported in
  // the outcomes rather than thrown.
  std::vector<ActionOutcome> submit_intent(const std::string& user, const IntentScript& script,
                                           const SubmitOptions& options = {});
  // `requester` asks `target_user`'s twin over `channel` to run `script`.
  void request_intent(const std::string& requester, const std::string& target_user,
                      const std::string& channel, const IntentScript& script);
  // Posts `text` to `space` through the sender's send_group_msg skill.
  std::vector<ActionOutcome> post_message(const std::string& user, const std::string& space,
                                          const std::string& text);
  // Fires every scheduled task due in (clock, to] and leaves the clock at `to`.
  std::vector<TickOutcome> advance_clock(SimTime to);

  SimTime clock() const { return clock_; }
  const std::string& hub_of(const std::string& user) const;
  const NodeRuntime& node(const std::string& node_id) const;
  std::vector<std::string> node_ids() const;
  const KeyStore& keys() const { return *keys_; }

  // Snapshot including final workspaces and memory.
  Transcript transcript() const;

 private:
  class Context;
  class Sink;

  void consolidate(const std::string& node_id, Observation o);
  void drain();
  void deliver(const Envelope& env, bool is_request);
  void handle_message(NodeRuntime& rt, const Envelope& env);
  void handle_request(NodeRuntime& rt, const Envelope& env);
  void broadcast_text(const std::string& user, const std::string& space, const std::string& text);
  std::vector<ScheduledTask> load_schedules();
  std::string availability_line(const std::string& user) const;

  Scenario scenario_;
  DeploymentMode mode_;
  const SkillRegistry& registry_;
  RunOptions options_;
  VerbTable verbs_;
  std::shared_ptr<KeyStore> keys_;
  std::shared_ptr<SocialGraph> social_;
  std::unique_ptr<PolicyEngine> engine_;
  std::unique_ptr<EventFactory> factory_;
  std::map<std::string, NodeRuntime> nodes_;
  std::map<std::string, std::string> hubs_;
  TwinDirectory twins_;
  DeliveryIds delivery_ids_;
  Transcript transcript_;
  SimTime clock_ = 0;
  std::size_t submissions_ = 0;
  std::size_t rounds_ = 0;
  // (space, topic) -> event of the latest ACCEPT seen.
  std::map<std::pair<std::string, std::string>, AttributedEvent> accepts_;
  std::set<std::pair<std::string, std::string>> agreed_;
};

Transcript run_scenario(const Scenario& s, DeploymentMode mode, const SkillRegistry& registry,
                        RunOptions options = {});

}  // namespace topoclaw
