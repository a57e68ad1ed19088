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

#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace topoclaw {

enum class ObservationKind { user_msg, twin_msg, action_result, system };

std::string_view to_string(ObservationKind kind);
ObservationKind observation_kind_from_string(std::string_view text);

struct Observation {
  // Simulated milliseconds.
  std::int64_t timestamp = 0;
  ObservationKind kind = ObservationKind::system;
  std::string content;
  // "key: value" promotes value under key; a bare key promotes `content`.
  std::optional<std::string> remember_directive;

  bool operator==(const Observation&) const = default;
};

inline constexpr std::size_t kDefaultShortCapacity = 32;

// section -> key -> value. Full keys "owner.timezone" split at the first
// dot; keys without a dot live in section "general".
using LongTermMemory = std::map<std::string, std::map<std::string, std::string>>;

struct MemoryState {
  std::size_t capacity = kDefaultShortCapacity;
  std::deque<Observation> m_short;
  LongTermMemory m_long;
  std::vector<Observation> m_log;

  explicit MemoryState(std::size_t k = kDefaultShortCapacity) : capacity(k) {}

  bool operator==(const MemoryState&) const = default;
};

// Splits a directive into (section, key, value) following the rules on
// Observation::remember_directive. Returns nullopt for an empty key or one
// starting with '#', which long.md could not hold.
struct LongEntry {
  std::string section;
  std::string key;
  std::string value;
};
std::optional<LongEntry> parse_directive(const Observation& o);

// Appends to the log, slides the short window, upserts any directive.
// Throws Error(timestamp_regression).
MemoryState consolidate(MemoryState s, const Observation& o);

// Folds consolidate over an empty state. Throws Error(timestamp_regression)
// naming the first out-of-order entry (1-based).
MemoryState replay(const std::vector<Observation>& log, std::size_t k);

// Plain-text formats:
//   memory/log.jsonl   one JSON observation per line, '\n'-terminated
//   memory/short.json  {"capacity": K, "observations": [...]}
//   memory/long.md     "## <section>" headings with "key: value" lines
std::string serialize_log(const std::vector<Observation>& log);
std::string serialize_short(const MemoryState& s);
std::string serialize_long(const LongTermMemory& m);

// Parse errors carry the 1-based line number.
std::vector<Observation> parse_log(const std::string& text);
LongTermMemory parse_long(const std::string& text);
std::deque<Observation> parse_short(const std::string& text);

// Rebuilds state from the three file bodies. The short buffer is
// recomputed from the log with capacity `k`; a short.json that is not a
// suffix of the log is rejected.
MemoryState memory_from_files(const std::string& log_text, const std::string& short_text,
                              const std::string& long_text, std::size_t k);

inline constexpr const char* kLogFile = "memory/log.jsonl";
inline constexpr const char* kShortFile = "memory/short.json";
inline constexpr const char* kLongFile = "memory/long.md";

// Every target must pass sandbox_check against `workspace_scope`
// (defaults to `root`); otherwise Error(sandbox_denied) and nothing is
// written.
void save_workspace(const MemoryState& s, const std::filesystem::path& root,
                    const std::optional<std::string>& workspace_scope = std::nullopt);
MemoryState load_workspace(const std::filesystem::path& root, std::size_t k);

nlohmann::json observation_to_json(const Observation& o);
Observation observation_from_json(const nlohmann::json& j);
nlohmann::json memory_to_json(const MemoryState& s);

}  // namespace topoclaw
