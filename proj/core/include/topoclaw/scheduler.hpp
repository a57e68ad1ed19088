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

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "topoclaw/cron.hpp"
#include "topoclaw/outcome.hpp"
#include "topoclaw/taskgraph.hpp"

namespace topoclaw {

// Placeholder event monitor: the task only fires while a workspace file
// exists.
struct FileExistsMonitor {
  std::string path;
  bool operator==(const FileExistsMonitor&) const = default;
};

struct ScheduledTask {
  std::string task_id;
  std::string cron;
  CronSpec spec;
  IntentScript intent;
  std::string owner;
  bool enabled = true;
  std::optional<FileExistsMonitor> monitor;

  bool operator==(const ScheduledTask&) const = default;
};

// Contents of a workspace `schedule.json`:
//   {"tasks": [{"task_id", "cron", "intent", "owner", "enabled"?, "monitor"?}]}
std::vector<ScheduledTask> schedule_from_json(const nlohmann::json& j);
nlohmann::json schedule_to_json(const std::vector<ScheduledTask>& tasks);
ScheduledTask scheduled_task_from_json(const nlohmann::json& j);
nlohmann::json scheduled_task_to_json(const ScheduledTask& t);

// Receives the intents of due tasks.
class IntentSink {
 public:
  virtual ~IntentSink() = default;
  // Submits with origin scheduler; returns one outcome per action.
  virtual std::vector<ActionOutcome> submit_scheduled(const ScheduledTask& task,
                                                      SimTime now) = 0;
  virtual bool monitor_satisfied(const ScheduledTask& task, const FileExistsMonitor& m) = 0;
};

struct TickOutcome {
  std::string task_id;
  ActionOutcome outcome;
};

// Enabled tasks whose spec matches `now`, in ascending task_id order.
std::vector<const ScheduledTask*> due_tasks(SimTime now, const std::vector<ScheduledTask>& tasks);

// Runs every due task through `sink`. Failures land in the returned
// outcomes; nothing is thrown for an individual task.
std::vector<TickOutcome> tick(SimTime now, const std::vector<ScheduledTask>& tasks,
                              IntentSink& sink);

// Earliest fire time of any enabled task strictly after `after`.
std::optional<SimTime> next_wakeup(const std::vector<ScheduledTask>& tasks, SimTime after);

}  // namespace topoclaw
