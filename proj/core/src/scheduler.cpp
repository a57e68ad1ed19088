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

#include "topoclaw/scheduler.hpp"

#include <algorithm>
#include <set>

#include "json_reader.hpp"
#include "topoclaw/error.hpp"

namespace topoclaw {

using nlohmann::json;

std::string_view to_string(OutcomeStatus status) {
  switch (status) {
    case OutcomeStatus::executed: return "executed";
    case OutcomeStatus::denied: return "denied";
    case OutcomeStatus::skipped: return "skipped";
    case OutcomeStatus::error: return "error";
  }
  return "error";
}

json outcome_to_json(const ActionOutcome& o) {
  json j = {{"ref", o.ref},
            {"action_id", o.action_id},
            {"node", o.node_id},
            {"status", to_string(o.status)}};
  if (o.hub) j["hub"] = decision_to_json(*o.hub);
  if (o.edge) j["edge"] = decision_to_json(*o.edge);
  if (!o.detail.empty()) j["detail"] = o.detail;
  return j;
}

ScheduledTask scheduled_task_from_json(const json& j) {
  detail::ObjectReader r(j, "scheduled task");
  ScheduledTask t;
  t.task_id = r.string("task_id");
  t.cron = r.string("cron");
  t.spec = parse_cron(t.cron);
  t.intent = intent_from_json(r.required("intent"));
  t.owner = r.string("owner");
  t.enabled = r.boolean_or("enabled", true);
  if (const auto* m = r.optional("monitor")) {
    detail::ObjectReader mr(*m, "monitor");
    t.monitor = FileExistsMonitor{mr.string("file_exists")};
    mr.finish();
  }
  r.finish();
  if (t.task_id.empty()) throw Error(ErrorKind::schema, "scheduled task: empty task_id");
  return t;
}

json scheduled_task_to_json(const ScheduledTask& t) {
  json j = {{"task_id", t.task_id},
            {"cron", t.cron},
            {"intent", intent_to_json(t.intent)},
            {"owner", t.owner},
            {"enabled", t.enabled}};
  if (t.monitor) j["monitor"] = {{"file_exists", t.monitor->path}};
  return j;
}

std::vector<ScheduledTask> schedule_from_json(const json& j) {
  detail::ObjectReader r(j, "schedule");
  const auto& list = r.required("tasks");
  r.finish();
  if (!list.is_array()) throw Error(ErrorKind::schema, "schedule: \"tasks\" must be an array");
  std::vector<ScheduledTask> tasks;
  std::set<std::string> seen;
  for (const auto& item : list) {
    auto t = scheduled_task_from_json(item);
    if (!seen.insert(t.task_id).second) {
      throw Error(ErrorKind::duplicate, "schedule: duplicate task_id \"" + t.task_id + "\"");
    }
    tasks.push_back(std::move(t));
  }
  return tasks;
}

json schedule_to_json(const std::vector<ScheduledTask>& tasks) {
  json list = json::array();
  for (const auto& t : tasks) list.push_back(scheduled_task_to_json(t));
  return {{"tasks", list}};
}

std::vector<const ScheduledTask*> due_tasks(SimTime now, const std::vector<ScheduledTask>& tasks) {
  std::vector<const ScheduledTask*> due;
  if (now % kMinuteMs != 0) return due;
  for (const auto& t : tasks) {
    if (t.enabled && cron_matches(t.spec, now)) due.push_back(&t);
  }
  std::sort(due.begin(), due.end(),
            [](const ScheduledTask* a, const ScheduledTask* b) { return a->task_id < b->task_id; });
  return due;
}

std::vector<TickOutcome> tick(SimTime now, const std::vector<ScheduledTask>& tasks,
                              IntentSink& sink) {
  std::vector<TickOutcome> out;
  for (const auto* task : due_tasks(now, tasks)) {
    if (task->monitor && !sink.monitor_satisfied(*task, *task->monitor)) {
      ActionOutcome o;
      o.status = OutcomeStatus::skipped;
      o.detail = "monitor not satisfied: " + task->monitor->path;
      out.push_back({task->task_id, std::move(o)});
      continue;
    }
    try {
      for (auto& o : sink.submit_scheduled(*task, now)) out.push_back({task->task_id, std::move(o)});
    } catch (const std::exception& e) {
      ActionOutcome o;
      o.status = OutcomeStatus::error;
      o.detail = e.what();
      out.push_back({task->task_id, std::move(o)});
    }
  }
  return out;
}

std::optional<SimTime> next_wakeup(const std::vector<ScheduledTask>& tasks, SimTime after) {
  std::optional<SimTime> best;
  for (const auto& t : tasks) {
    if (!t.enabled) continue;
    try {
      SimTime next = next_fire(t.spec, after);
      if (!best || next < *best) best = next;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::no_next_fire) throw;
    }
  }
  return best;
}

}  // namespace topoclaw
