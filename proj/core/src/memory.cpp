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

#include "topoclaw/memory.hpp"

#include <algorithm>
#include <sstream>

#include "json_reader.hpp"
#include "topoclaw/error.hpp"
#include "topoclaw/governance.hpp"
#include "topoclaw/io.hpp"

namespace topoclaw {

using nlohmann::json;

std::string_view to_string(ObservationKind kind) {
  switch (kind) {
    case ObservationKind::user_msg: return "user_msg";
    case ObservationKind::twin_msg: return "twin_msg";
    case ObservationKind::action_result: return "action_result";
    case ObservationKind::system: return "system";
  }
  return "system";
}

ObservationKind observation_kind_from_string(std::string_view text) {
  if (text == "user_msg") return ObservationKind::user_msg;
  if (text == "twin_msg") return ObservationKind::twin_msg;
  if (text == "action_result") return ObservationKind::action_result;
  if (text == "system") return ObservationKind::system;
  throw Error(ErrorKind::bad_enum, "unknown observation kind \"" + std::string(text) + "\"");
}

namespace {

std::string trim(std::string_view s) {
  auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

std::string single_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return trim(s);
}

}  // namespace

std::optional<LongEntry> parse_directive(const Observation& o) {
  if (!o.remember_directive) return std::nullopt;
  const std::string& d = *o.remember_directive;
  std::string full_key;
  std::string value;
  if (auto colon = d.find(':'); colon != std::string::npos) {
    full_key = single_line(d.substr(0, colon));
    value = single_line(d.substr(colon + 1));
  } else {
    full_key = single_line(d);
    value = single_line(o.content);
  }
  // A leading '#' would read back as a heading in long.md.
  if (full_key.empty() || full_key.starts_with('#')) return std::nullopt;
  LongEntry entry;
  if (auto dot = full_key.find('.'); dot != std::string::npos && dot > 0 &&
                                     dot + 1 < full_key.size()) {
    entry.section = trim(full_key.substr(0, dot));
    entry.key = trim(full_key.substr(dot + 1));
  } else {
    entry.section = "general";
    entry.key = full_key;
  }
  // Both halves have to survive a trip through long.md unchanged.
  if (entry.section.empty() || entry.key.empty() || entry.key.starts_with('#')) {
    return std::nullopt;
  }
  entry.value = std::move(value);
  return entry;
}

MemoryState consolidate(MemoryState s, const Observation& o) {
  if (!s.m_log.empty() && o.timestamp < s.m_log.back().timestamp) {
    throw Error(ErrorKind::timestamp_regression,
                "observation at " + std::to_string(o.timestamp) + " precedes log tail at " +
                    std::to_string(s.m_log.back().timestamp));
  }
  s.m_log.push_back(o);
  if (s.capacity > 0) {
    s.m_short.push_back(o);
    while (s.m_short.size() > s.capacity) s.m_short.pop_front();
  }
  if (auto entry = parse_directive(o)) {
    s.m_long[entry->section][entry->key] = entry->value;
  }
  return s;
}

MemoryState replay(const std::vector<Observation>& log, std::size_t k) {
  MemoryState s(k);
  for (std::size_t i = 0; i < log.size(); ++i) {
    if (i > 0 && log[i].timestamp < log[i - 1].timestamp) {
      throw Error(ErrorKind::timestamp_regression,
                  "log entry " + std::to_string(i + 1) + " goes back in time");
    }
    s = consolidate(std::move(s), log[i]);
  }
  return s;
}

json observation_to_json(const Observation& o) {
  json j = {{"timestamp", o.timestamp}, {"kind", to_string(o.kind)}, {"content", o.content}};
  if (o.remember_directive) j["remember_directive"] = *o.remember_directive;
  return j;
}

Observation observation_from_json(const json& j) {
  detail::ObjectReader r(j, "observation");
  Observation o;
  o.timestamp = r.integer("timestamp");
  o.kind = observation_kind_from_string(r.string("kind"));
  o.content = r.string("content");
  if (const auto* d = r.optional("remember_directive")) {
    if (!d->is_string()) throw Error(ErrorKind::schema, "remember_directive must be a string");
    o.remember_directive = d->get<std::string>();
  }
  r.finish();
  return o;
}

std::string serialize_log(const std::vector<Observation>& log) {
  std::string out;
  for (const auto& o : log) {
    out += observation_to_json(o).dump();
    out += '\n';
  }
  return out;
}

std::string serialize_short(const MemoryState& s) {
  json list = json::array();
  for (const auto& o : s.m_short) list.push_back(observation_to_json(o));
  return json{{"capacity", s.capacity}, {"observations", list}}.dump(2) + "\n";
}

std::string serialize_long(const LongTermMemory& m) {
  std::string out = "# Long-term memory\n";
  for (const auto& [section, entries] : m) {
    out += "\n## " + section + "\n";
    for (const auto& [key, value] : entries) out += key + ": " + value + "\n";
  }
  return out;
}

std::vector<Observation> parse_log(const std::string& text) {
  std::vector<Observation> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    ++line_no;
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos) {
      throw Error(ErrorKind::parse, "log.jsonl line " + std::to_string(line_no) +
                                        ": truncated record (no line terminator)");
    }
    std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    try {
      out.push_back(observation_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::parse, "log.jsonl line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorKind::parse, "log.jsonl line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

LongTermMemory parse_long(const std::string& text) {
  LongTermMemory m;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::string section = "general";
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t.starts_with("## ")) {
      section = trim(t.substr(3));
      if (section.empty()) {
        throw Error(ErrorKind::parse, "long.md line " + std::to_string(line_no) +
                                          ": empty section heading");
      }
      continue;
    }
    if (t.starts_with("# ")) continue;
    auto colon = t.find(':');
    if (colon == std::string::npos || colon == 0) {
      throw Error(ErrorKind::parse, "long.md line " + std::to_string(line_no) +
                                        ": expected \"key: value\"");
    }
    m[section][trim(t.substr(0, colon))] = trim(t.substr(colon + 1));
  }
  return m;
}

std::deque<Observation> parse_short(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string("short.json: ") + e.what());
  }
  detail::ObjectReader r(j, "short.json");
  r.integer("capacity");
  std::deque<Observation> out;
  for (const auto& o : r.required("observations")) out.push_back(observation_from_json(o));
  r.finish();
  return out;
}

MemoryState memory_from_files(const std::string& log_text, const std::string& short_text,
                              const std::string& long_text, std::size_t k) {
  auto log = parse_log(log_text);
  MemoryState s = replay(log, k);
  auto stored_short = parse_short(short_text);
  if (stored_short.size() > log.size() ||
      !std::equal(stored_short.begin(), stored_short.end(),
                  log.end() - static_cast<std::ptrdiff_t>(stored_short.size()))) {
    throw Error(ErrorKind::parse, "short.json is not a suffix of log.jsonl");
  }
  // long.md is the editable source of truth for long-term memory.
  s.m_long = parse_long(long_text);
  return s;
}

void save_workspace(const MemoryState& s, const std::filesystem::path& root,
                    const std::optional<std::string>& workspace_scope) {
  auto abs_root = std::filesystem::absolute(root).lexically_normal();
  std::string scope = workspace_scope.value_or(abs_root.string());
  const std::pair<const char*, std::string> files[] = {
      {kLogFile, serialize_log(s.m_log)},
      {kShortFile, serialize_short(s)},
      {kLongFile, serialize_long(s.m_long)},
  };
  for (const auto& [name, body] : files) {
    auto target = (abs_root / name).string();
    auto verdict = sandbox_check({EffectKind::write, target}, scope);
    if (!verdict.allow) {
      throw Error(ErrorKind::sandbox_denied, "memory write to " + target + " denied: " +
                                                 verdict.reason);
    }
  }
  for (const auto& [name, body] : files) write_text_file(abs_root / name, body);
}

MemoryState load_workspace(const std::filesystem::path& root, std::size_t k) {
  return memory_from_files(read_text_file(root / kLogFile), read_text_file(root / kShortFile),
                           read_text_file(root / kLongFile), k);
}

json memory_to_json(const MemoryState& s) {
  json log = json::array();
  for (const auto& o : s.m_log) log.push_back(observation_to_json(o));
  json shortbuf = json::array();
  for (const auto& o : s.m_short) shortbuf.push_back(observation_to_json(o));
  return {{"capacity", s.capacity}, {"m_log", log}, {"m_short", shortbuf}, {"m_long", s.m_long}};
}

}  // namespace topoclaw
