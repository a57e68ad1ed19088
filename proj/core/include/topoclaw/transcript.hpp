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

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "topoclaw/cron.hpp"
#include "topoclaw/eventbus.hpp"
#include "topoclaw/topology.hpp"

namespace topoclaw {

inline constexpr const char* kTranscriptFormat = "topoclaw-transcript/1";

// Append-only record list plus the final state of every node.
//
// Record kinds: stimulus, compile, placement, transfer, event, delivery,
// decision, effect, denial, skip, error, wakeup, agreement.
class Transcript {
 public:
  Transcript() = default;
  Transcript(std::string scenario_id, std::string mode, std::string solver);

  nlohmann::json& append(SimTime time, const std::string& node, const std::string& kind,
                         const std::string& ref = {});

  const std::vector<nlohmann::json>& records() const { return records_; }
  void set_workspaces(nlohmann::json w) { workspaces_ = std::move(w); }
  void set_memory(nlohmann::json m) { memory_ = std::move(m); }

  nlohmann::json to_json() const;
  // Pretty-printed with a trailing newline; byte-stable for equal input.
  std::string serialize() const;

 private:
  std::string scenario_id_;
  std::string mode_;
  std::string solver_;
  std::vector<nlohmann::json> records_;
  nlohmann::json workspaces_ = nlohmann::json::object();
  nlohmann::json memory_ = nlohmann::json::object();
};

struct TranscriptReport {
  std::vector<std::string> violations;
  std::size_t events_checked = 0;
  bool tags_checked = false;
  bool ok() const { return violations.empty(); }
};

// Re-checks a transcript offline:
//  - every effect follows exactly one allowing hub decision and one
//    allowing edge decision for the same ref;
//  - every event chains to its human's twin, and verifies when `keys` is
//    given;
//  - sequence numbers run 1, 2, ... per (acting twin, channel), and each
//    delivery carries a recorded event in order per destination;
//  - each node's memory equals the replay of its log.
TranscriptReport verify_transcript(const nlohmann::json& transcript, const KeyStore* keys,
                                   const SocialGraph* social = nullptr);

}  // namespace topoclaw
