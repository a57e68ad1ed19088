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

#include "topoclaw/cron.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <vector>

#include "topoclaw/error.hpp"

namespace topoclaw {

namespace {

namespace chr = std::chrono;

struct FieldRange {
  const char* name;
  int lo;
  int hi;
};

constexpr FieldRange kRanges[5] = {
    {"minute", 0, 59}, {"hour", 0, 23}, {"day-of-month", 1, 31}, {"month", 1, 12},
    {"day-of-week", 0, 6},
};

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

int parse_number(std::string_view s, const FieldRange& r, std::string_view item) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::cron_syntax, std::string(r.name) + ": malformed value \"" +
                                            std::string(item) + "\"");
  }
  if (value < r.lo || value > r.hi) {
    throw Error(ErrorKind::cron_range, std::string(r.name) + ": " + std::to_string(value) +
                                           " outside " + std::to_string(r.lo) + "-" +
                                           std::to_string(r.hi));
  }
  return value;
}

std::bitset<60> parse_field(std::string_view text, const FieldRange& r) {
  std::bitset<60> bits;
  for (auto item : split(text, ',')) {
    std::string_view base = item;
    int step = 1;
    if (auto slash = item.find('/'); slash != std::string_view::npos) {
      base = item.substr(0, slash);
      auto step_text = item.substr(slash + 1);
      auto [ptr, ec] = std::from_chars(step_text.data(), step_text.data() + step_text.size(), step);
      if (step_text.empty() || ec != std::errc() || ptr != step_text.data() + step_text.size() ||
          step < 1) {
        throw Error(ErrorKind::cron_syntax, std::string(r.name) + ": malformed step in \"" +
                                                std::string(item) + "\"");
      }
    }
    int lo = r.lo;
    int hi = r.hi;
    if (base != "*") {
      if (auto dash = base.find('-'); dash != std::string_view::npos) {
        lo = parse_number(base.substr(0, dash), r, item);
        hi = parse_number(base.substr(dash + 1), r, item);
        if (lo > hi) {
          throw Error(ErrorKind::cron_range, std::string(r.name) + ": empty range \"" +
                                                 std::string(item) + "\"");
        }
      } else {
        lo = parse_number(base, r, item);
        // "a/n" runs from a to the end of the field.
        hi = item.find('/') == std::string_view::npos ? lo : r.hi;
      }
    }
    for (int v = lo; v <= hi; v += step) bits.set(static_cast<std::size_t>(v));
  }
  return bits;
}

chr::sys_days day_of(SimTime t) {
  return chr::floor<chr::days>(chr::sys_time<chr::milliseconds>(chr::milliseconds(t)));
}

bool day_matches(const CronSpec& spec, chr::sys_days day) {
  chr::year_month_day ymd(day);
  if (!spec.matches(CronField::month, static_cast<int>(static_cast<unsigned>(ymd.month())))) {
    return false;
  }
  bool dom = spec.matches(CronField::day_of_month,
                          static_cast<int>(static_cast<unsigned>(ymd.day())));
  bool dow = spec.matches(CronField::day_of_week,
                          static_cast<int>(chr::weekday(day).c_encoding()));
  bool dom_r = spec.restricted[static_cast<int>(CronField::day_of_month)];
  bool dow_r = spec.restricted[static_cast<int>(CronField::day_of_week)];
  if (dom_r && dow_r) return dom || dow;
  return dom && dow;
}

SimTime floor_div(SimTime a, SimTime b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0))); }

}  // namespace

CronSpec parse_cron(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < text.size() && text[i] != ' ' && text[i] != '\t') ++i;
    if (i > start) parts.push_back(text.substr(start, i - start));
  }
  if (parts.size() != 5) {
    throw Error(ErrorKind::cron_syntax,
                "expected 5 fields, got " + std::to_string(parts.size()));
  }
  CronSpec spec;
  for (int f = 0; f < 5; ++f) {
    spec.fields[f] = parse_field(parts[f], kRanges[f]);
    spec.restricted[f] = parts[f] != "*";
  }
  return spec;
}

bool cron_matches(const CronSpec& spec, SimTime t) {
  auto day = day_of(t);
  SimTime into_day = t - chr::duration_cast<chr::milliseconds>(day.time_since_epoch()).count();
  int minute_of_day = static_cast<int>(into_day / kMinuteMs);
  return day_matches(spec, day) && spec.matches(CronField::hour, minute_of_day / 60) &&
         spec.matches(CronField::minute, minute_of_day % 60);
}

SimTime next_fire(const CronSpec& spec, SimTime after) {
  SimTime start = (floor_div(after, kMinuteMs) + 1) * kMinuteMs;
  auto first_day = day_of(start);
  SimTime first_day_ms =
      chr::duration_cast<chr::milliseconds>(first_day.time_since_epoch()).count();
  int first_minute = static_cast<int>((start - first_day_ms) / kMinuteMs);
  constexpr int kHorizonDays = 4 * 366;
  for (int d = 0; d <= kHorizonDays; ++d) {
    auto day = first_day + chr::days(d);
    if (!day_matches(spec, day)) continue;
    int from = d == 0 ? first_minute : 0;
    for (int m = from; m < 24 * 60; ++m) {
      if (spec.matches(CronField::hour, m / 60) && spec.matches(CronField::minute, m % 60)) {
        return first_day_ms + d * kDayMs + m * kMinuteMs;
      }
    }
  }
  throw Error(ErrorKind::no_next_fire,
              "no matching time within four years after " + format_iso_time(after));
}

SimTime parse_iso_time(std::string_view text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0, ms = 0;
  auto fail = [&]() -> Error {
    return Error(ErrorKind::parse, "malformed time \"" + std::string(text) + "\"");
  };
  std::string_view rest = text;
  if (!rest.empty() && rest.back() == 'Z') rest.remove_suffix(1);
  auto take = [&](std::size_t width, int& out, char sep) {
    if (rest.size() < width) throw fail();
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + width, out);
    if (ec != std::errc() || ptr != rest.data() + width) throw fail();
    rest.remove_prefix(width);
    if (sep != '\0') {
      if (rest.empty() || rest.front() != sep) throw fail();
      rest.remove_prefix(1);
    }
  };
  take(4, y, '-');
  take(2, mo, '-');
  take(2, d, 'T');
  take(2, h, ':');
  take(2, mi, '\0');
  if (!rest.empty()) {
    if (rest.front() != ':') throw fail();
    rest.remove_prefix(1);
    take(2, s, '\0');
    if (!rest.empty()) {
      if (rest.front() != '.') throw fail();
      rest.remove_prefix(1);
      take(3, ms, '\0');
    }
  }
  if (!rest.empty()) throw fail();
  chr::year_month_day ymd{chr::year(y), chr::month(static_cast<unsigned>(mo)),
                          chr::day(static_cast<unsigned>(d))};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 59) throw fail();
  SimTime day_ms =
      chr::duration_cast<chr::milliseconds>(chr::sys_days(ymd).time_since_epoch()).count();
  return day_ms + ((h * 60 + mi) * 60 + s) * 1000LL + ms;
}

std::string format_iso_time(SimTime t) {
  auto day = day_of(t);
  chr::year_month_day ymd(day);
  SimTime into = t - chr::duration_cast<chr::milliseconds>(day.time_since_epoch()).count();
  int ms = static_cast<int>(into % 1000);
  int secs = static_cast<int>(into / 1000);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                secs / 3600, (secs / 60) % 60, secs % 60);
  std::string out = buf;
  if (ms != 0) {
    std::snprintf(buf, sizeof buf, ".%03d", ms);
    out += buf;
  }
  return out + "Z";
}

}  // namespace topoclaw
