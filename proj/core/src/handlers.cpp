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

// Deterministic stand-ins for the built-in skills. Each one touches only
// the node's workspace or the message bus.

#include <string>

#include <nlohmann/json.hpp>

#include "topoclaw/error.hpp"
#include "topoclaw/path.hpp"
#include "topoclaw/scheduler.hpp"
#include "topoclaw/skills.hpp"

namespace topoclaw {

namespace {

using nlohmann::json;

std::string arg(const ActionSpec& a, const std::string& key, std::string fallback = {}) {
  auto it = a.params.find(key);
  return it == a.params.end() ? fallback : it->second;
}

std::string required_arg(const ActionSpec& a, const std::string& key) {
  auto it = a.params.find(key);
  if (it == a.params.end()) {
    throw Error(ErrorKind::missing_field, a.verb + ": missing argument \"" + key + "\"");
  }
  return it->second;
}

std::string display(const HandlerContext& ctx, const std::string& path) {
  const auto& root = ctx.node().workspace_root;
  return is_within(path, root) ? relative_to(path, root) : path;
}

std::string in_workspace(const HandlerContext& ctx, std::string_view rel) {
  return *resolve_against(ctx.node().workspace_root, rel);
}

void append_file(HandlerContext& ctx, const std::string& path, const std::string& line) {
  ctx.write_file(path, ctx.read_file(path).value_or("") + line + "\n");
}

std::size_t count_lines_with(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    if (std::string_view(text).substr(start, end - start).find(needle) != std::string_view::npos) {
      ++n;
    }
    start = end + 1;
  }
  return n;
}

HandlerResult search_files(const ActionSpec& a, HandlerContext& ctx) {
  const auto& target = a.effect.target;
  std::string query = arg(a, "query");
  if (auto text = ctx.read_file(target)) {
    if (query.empty()) {
      return {"read " + display(ctx, target) + " (" + std::to_string(text->size()) + " bytes)"};
    }
    return {std::to_string(count_lines_with(*text, query)) + " matching lines in " +
            display(ctx, target)};
  }
  std::vector<std::string> hits;
  for (const auto& f : ctx.list_files(target)) {
    if (query.empty() || ctx.read_file(f)->find(query) != std::string::npos) {
      hits.push_back(display(ctx, f));
    }
  }
  if (hits.empty()) return {"no files found under " + display(ctx, target)};
  std::string out = std::to_string(hits.size()) + " files:";
  for (const auto& h : hits) out += " " + h;
  return {out};
}

HandlerResult manage_files(const ActionSpec& a, HandlerContext& ctx) {
  const auto& target = a.effect.target;
  std::string op = arg(a, "op", "write");
  std::string content = arg(a, "content");
  if (op == "write") {
    ctx.write_file(target, content);
  } else if (op == "append") {
    ctx.write_file(target, ctx.read_file(target).value_or("") + content);
  } else if (op == "delete") {
    ctx.remove_file(target);
    return {"deleted " + display(ctx, target)};
  } else {
    throw Error(ErrorKind::bad_enum, "manage_files: unknown op \"" + op + "\"");
  }
  return {op + " " + display(ctx, target) + " (" + std::to_string(content.size()) + " bytes)"};
}

HandlerResult schedule_cron(const ActionSpec& a, HandlerContext& ctx) {
  const auto& target = a.effect.target;
  json task = {{"task_id", required_arg(a, "task_id")},
               {"cron", required_arg(a, "cron")},
               {"intent", json::parse(required_arg(a, "intent"))},
               {"owner", ctx.owner().user_id},
               {"enabled", arg(a, "enabled", "true") != "false"}};
  auto parsed = scheduled_task_from_json(task);
  std::vector<ScheduledTask> tasks;
  if (auto existing = ctx.read_file(target)) tasks = schedule_from_json(json::parse(*existing));
  std::erase_if(tasks, [&](const ScheduledTask& t) { return t.task_id == parsed.task_id; });
  tasks.push_back(parsed);
  ctx.write_file(target, schedule_to_json(tasks).dump(2) + "\n");
  return {"scheduled " + parsed.task_id + " at \"" + parsed.cron + "\""};
}

HandlerResult send_sms(const ActionSpec& a, HandlerContext& ctx) {
  std::string to = required_arg(a, "to");
  append_file(ctx, in_workspace(ctx, "outbox/sms.log"), to + "\t" + arg(a, "text"));
  return {"sms to " + to + " queued on " + ctx.node().node_id};
}

HandlerResult sync_clipboard(const ActionSpec& a, HandlerContext& ctx) {
  std::string text = arg(a, "text");
  ctx.write_file(a.effect.target, text);
  return {"clipboard holds " + std::to_string(text.size()) + " bytes"};
}

HandlerResult open_deeplink(const ActionSpec& a, HandlerContext& ctx) {
  std::string uri = required_arg(a, "uri");
  append_file(ctx, in_workspace(ctx, "outbox/deeplinks.log"), uri);
  return {"opened " + uri};
}

HandlerResult send_group_msg(const ActionSpec& a, HandlerContext& ctx) {
  ctx.emit_message(a.effect.target, arg(a, "text"));
  return {"posted to " + a.effect.target};
}

HandlerResult assert_twin_identity(const ActionSpec& a, HandlerContext& ctx) {
  const auto& owner = ctx.owner();
  ctx.emit_message(a.effect.target, "IDENTITY " + owner.user_id + ".twin acts for " +
                                        owner.user_id + " (" + owner.display_name + ")");
  return {"identity asserted in " + a.effect.target};
}

HandlerResult manage_contacts(const ActionSpec& a, HandlerContext& ctx) {
  std::string handle = required_arg(a, "handle");
  ctx.write_file(a.effect.target, handle + "\n");
  return {"contact " + display(ctx, a.effect.target) + " saved"};
}

HandlerResult edit_memory(const ActionSpec& a, HandlerContext& ctx) {
  std::string key = required_arg(a, "key");
  std::string value = required_arg(a, "value");
  ctx.remember(key + ": " + value, value);
  return {"remembered " + key};
}

HandlerResult author_skill(const ActionSpec& a, HandlerContext& ctx) {
  std::string name = required_arg(a, "name");
  SkillManifest m;
  m.name = name;
  m.version = arg(a, "version", "0.1.0");
  m.description = arg(a, "description");
  m.category = skill_category_from_string(arg(a, "category", "utility"));
  m.required_env = RequiredEnv::any;
  m.verb = arg(a, "verb", name);
  m.entry = "builtin.noop";
  ctx.write_file(a.effect.target, manifest_to_json(m).dump(2) + "\n");
  return {"authored skill " + name};
}

HandlerResult list_skills(const ActionSpec& a, HandlerContext& ctx) {
  auto names = ctx.skill_names();
  const std::string suffix = "/manifest.json";
  for (const auto& f : ctx.list_files(a.effect.target)) {
    if (f.size() > suffix.size() && f.ends_with(suffix)) {
      auto dir = f.substr(0, f.size() - suffix.size());
      names.push_back(dir.substr(dir.rfind('/') + 1) + " (workspace)");
    }
  }
  std::string out = std::to_string(names.size()) + " skills:";
  for (const auto& n : names) out += " " + n;
  return {out};
}

HandlerResult noop(const ActionSpec&, HandlerContext&) { return {"noop"}; }

}  // namespace

const std::vector<BuiltinHandler>& builtin_handlers() {
  static const std::vector<BuiltinHandler> handlers = {
      {"builtin.search_files", {EffectKind::read, "{path}"}, search_files},
      {"builtin.manage_files", {EffectKind::write, "{path}"}, manage_files},
      {"builtin.schedule_cron", {EffectKind::write, "schedule.json"}, schedule_cron},
      {"builtin.send_sms", {EffectKind::send, "sms:{to}"}, send_sms},
      {"builtin.sync_clipboard", {EffectKind::write, "clipboard/current.txt"}, sync_clipboard},
      {"builtin.open_deeplink", {EffectKind::exec, "open {uri}"}, open_deeplink},
      {"builtin.send_group_msg", {EffectKind::send, "{space}"}, send_group_msg},
      {"builtin.assert_twin_identity", {EffectKind::send, "{space}"}, assert_twin_identity},
      {"builtin.manage_contacts", {EffectKind::write, "contacts/{name}.txt"}, manage_contacts},
      {"builtin.edit_memory", {EffectKind::write, "memory/long.md"}, edit_memory},
      {"builtin.author_skill", {EffectKind::write, "skills/{name}/manifest.json"}, author_skill},
      {"builtin.list_skills", {EffectKind::read, "skills"}, list_skills},
      {"builtin.noop", {EffectKind::noop, ""}, noop},
  };
  return handlers;
}

const BuiltinHandler* find_handler(std::string_view entry) {
  for (const auto& h : builtin_handlers()) {
    if (h.entry == entry) return &h;
  }
  return nullptr;
}

}  // namespace topoclaw
