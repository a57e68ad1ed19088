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

#include <array>
#include <bitset>
#include <cstdint>
#include <string>
#include <string_view>

namespace topoclaw {

// Simulated milliseconds since 1970-01-01T00:00Z. The clock has no zone.
using SimTime = std::int64_t;

inline constexpr SimTime kMinuteMs = 60'000;
inline constexpr SimTime kDayMs = 24 * 60 * kMinuteMs;

enum class CronField { minute = 0, hour = 1, day_of_month = 2, month = 3, day_of_week = 4 };

struct CronSpec {
  // Bit i is set when value i matches. Unused low bits stay clear.
  std::array<std::bitset<60>, 5> fields;
  // A field counts as restricted unless it was written as a bare "*".
  std::array<bool, 5> restricted{};

  bool matches(CronField f, int value) const {
    return fields[static_cast<int>(f)].test(static_cast<std::size_t>(value));
  }
  bool operator==(const CronSpec&) const = default;
};

// Five whitespace-separated fields; each a comma list of "*", "n", "a-b",
// optionally followed by "/step". Throws Error(cron_syntax) or
// Error(cron_range).
CronSpec parse_cron(std::string_view text);

// True when the minute containing `t` matches every field of `spec`.
bool cron_matches(const CronSpec& spec, SimTime t);

// Smallest minute-aligned time strictly after `after` that `spec` matches.
// Throws Error(no_next_fire) when nothing matches within four years.
SimTime next_fire(const CronSpec& spec, SimTime after);

// "YYYY-MM-DDTHH:MM[:SS[.mmm]][Z]". Throws Error(parse).
SimTime parse_iso_time(std::string_view text);
// "YYYY-MM-DDTHH:MM:SSZ", with ".mmm" only when milliseconds are nonzero.
std::string format_iso_time(SimTime t);

}  // namespace topoclaw
