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

#include "topoclaw/transcript.hpp"

#include <limits>
#include <map>
#include <optional>
#include <set>
#include <tuple>

#include "topoclaw/memory.hpp"

namespace topoclaw {

using nlohmann::json;

Transcript::Transcript(std::string scenario_id, std::string mode, std::string solver)
    : scenario_id_(std::move(scenario_id)), mode_(std::move(mode)), solver_(std::move(solver)) {}

json& Transcript::append(SimTime time, const std::string& node, const std::string& kind,
                         const std::string& ref) {
  json r = {{"index", records_.size()}, {"time", time}, {"node", node}, {"kind", kind}};
  if (!ref.empty()) r["ref"] = ref;
  records_.push_back(std::move(r));
  return records_.back();
}

json Transcript::to_json() const {
  return {{"format", kTranscriptFormat},
          {"scenario_id", scenario_id_},
          {"mode", mode_},
          {"solver", solver_},
          {"records", records_},
          {"workspaces", workspaces_},
          {"memory", memory_}};
}

std::string Transcript::serialize() const { return to_json().dump(2) + "\n"; }

namespace {

class Checker {
 public:
  Checker(const KeyStore* keys, const SocialGraph* social, TranscriptReport& report)
      : keys_(keys), social_(social), report_(report) {}

  void violation(const std::string& what) { report_.violations.push_back(what); }

  // Checks one event's integrity; returns the parsed event when readable.
  std::optional<AttributedEvent> check_event(const json& j, const std::string& where) {
    AttributedEvent e;
    try {
      e = event_from_json(j);
    } catch (const std::exception& ex) {
      violation(where + ": unreadable event (" + ex.what() + ")");
      return std::nullopt;
    }
    ++report_.events_checked;
    if (e.delegation_chain.empty()) {
      violation(where + ": empty delegation chain");
      return std::nullopt;
    }
    const std::string origin = e.human_id + ".twin";
    if (e.delegation_chain.front() != origin) {
      violation(where + ": chain starts at " + e.delegation_chain.front() + ", not " + origin);
    }
    for (std::size_t i = 1; i < e.delegation_chain.size(); ++i) {
      if (!e.delegation_chain[i].starts_with(origin + "@")) {
        violation(where + ": chain entry " + e.delegation_chain[i] + " is not a sub-twin of " +
                  origin);
      }
    }
    if (social_ && !social_->find_user(e.human_id)) {
      violation(where + ": unknown human " + e.human_id);
    }
    if (keys_) {
      if (auto v = verify_attribution(e, *keys_); !v) {
        violation(where + ": attribution fails (" + std::string(to_string(v.reason)) + ")");
      }
    }
    return e;
  }

 private:
  const KeyStore* keys_;
  const SocialGraph* social_;
  TranscriptReport& report_;
};

}  // namespace

TranscriptReport verify_transcript(const json& transcript, const KeyStore* keys,
                                   const SocialGraph* social) {
  TranscriptReport report;
  report.tags_checked = keys != nullptr;
  Checker check(keys, social, report);
  if (!transcript.is_object() || transcript.value("format", "") != kTranscriptFormat ||
      !transcript.contains("records") || !transcript["records"].is_array()) {
    check.violation("not a transcript document");
    return report;
  }

  struct Decisions {
    int hub_allow = 0;
    int edge_allow = 0;
    int total = 0;
  };
  std::map<std::string, Decisions> decisions;
  std::map<std::pair<std::string, std::string>, std::uint64_t> last_seq;
  std::set<std::string> recorded_events;
  std::map<std::tuple<std::string, std::string, std::string>, std::uint64_t> last_delivered;
  std::int64_t last_time = std::numeric_limits<std::int64_t>::min();

  const auto& records = transcript["records"];
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    std::string where = "record " + std::to_string(i);
    try {
      if (r.at("index").get<std::size_t>() != i) check.violation(where + ": index out of order");
      auto time = r.at("time").get<std::int64_t>();
      if (time < last_time) check.violation(where + ": time goes backwards");
      last_time = time;
      const std::string kind = r.at("kind").get<std::string>();
      const std::string ref = r.value("ref", "");
      if (kind == "decision") {
        auto& d = decisions[ref];
        ++d.total;
        bool allow = r.at("decision").at("overall").get<std::string>() == "allow";
        std::string pep = r.at("pep").get<std::string>();
        if (allow && pep == "hub") ++d.hub_allow;
        if (allow && pep == "edge") ++d.edge_allow;
      } else if (kind == "effect") {
        auto it = decisions.find(ref);
        if (it == decisions.end() || it->second.total != 2 || it->second.hub_allow != 1 ||
            it->second.edge_allow != 1) {
          check.violation(where + ": effect " + ref +
                          " lacks exactly one allowing hub and edge decision");
        }
      } else if (kind == "event") {
        if (auto e = check.check_event(r.at("event"), where)) {
          auto key = std::make_pair(e->acting_twin(), e->channel_id);
          auto& last = last_seq[key];
          if (e->seq != last + 1) {
            check.violation(where + ": seq " + std::to_string(e->seq) + " for " + key.first +
                            " on " + key.second + " follows " + std::to_string(last));
          }
          last = e->seq;
          recorded_events.insert(r.at("event").dump());
        }
      } else if (kind == "delivery") {
        const auto& env = r.at("envelope");
        if (!recorded_events.contains(env.at("event").dump())) {
          check.violation(where + ": delivered event was never recorded");
        }
        if (auto e = check.check_event(env.at("event"), where)) {
          auto key = std::make_tuple(e->acting_twin(), e->channel_id,
                                     env.at("dst_node").get<std::string>());
          auto& last = last_delivered[key];
          if (e->seq <= last) check.violation(where + ": delivery out of order");
          last = e->seq;
        }
      } else if (kind == "agreement") {
        for (const auto& e : r.at("events")) check.check_event(e, where);
      }
    } catch (const json::exception& e) {
      check.violation(where + ": malformed record (" + e.what() + ")");
    }
  }

  if (transcript.contains("memory")) {
    for (const auto& [node, m] : transcript["memory"].items()) {
      try {
        std::vector<Observation> log;
        for (const auto& o : m.at("m_log")) log.push_back(observation_from_json(o));
        auto replayed = replay(log, m.at("capacity").get<std::size_t>());
        if (memory_to_json(replayed) != m) {
          check.violation("memory of " + node + " differs from the replay of its log");
        }
      } catch (const std::exception& e) {
        check.violation("memory of " + node + ": " + e.what());
      }
    }
  }
  return report;
}

}  // namespace topoclaw
