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

#include <gtest/gtest.h>

#include <unistd.h>

#include <filesystem>

#include "generators.hpp"
#include "topoclaw/error.hpp"
#include "topoclaw/io.hpp"
#include "topoclaw/memory.hpp"

namespace topoclaw {
namespace {

namespace fs = std::filesystem;

Observation obs(std::int64_t t, std::string content,
                std::optional<std::string> directive = std::nullopt) {
  return {t, ObservationKind::user_msg, std::move(content), std::move(directive)};
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("topoclaw-memory-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

TEST(Consolidate, BaseCase) {
  auto s = consolidate(MemoryState(4), obs(1, "hi"));
  EXPECT_EQ(s.m_log.size(), 1u);
  ASSERT_EQ(s.m_short.size(), 1u);
  EXPECT_EQ(s.m_short.front().content, "hi");
  EXPECT_TRUE(s.m_long.empty());
}

TEST(Consolidate, ShortWindowKeepsLastK) {
  MemoryState s(3);
  for (int i = 0; i < 4; ++i) s = consolidate(s, obs(i, "o" + std::to_string(i)));
  ASSERT_EQ(s.m_short.size(), 3u);
  EXPECT_EQ(s.m_short.front().content, "o1");
  EXPECT_EQ(s.m_short.back().content, "o3");
  EXPECT_EQ(s.m_log.size(), 4u);
}

TEST(Consolidate, ZeroCapacityKeepsNothingShort) {
  auto s = consolidate(MemoryState(0), obs(1, "x"));
  EXPECT_TRUE(s.m_short.empty());
  EXPECT_EQ(s.m_log.size(), 1u);
}

TEST(Consolidate, DirectiveUpserts) {
  auto s = consolidate(MemoryState(), obs(1, "tz", "owner.timezone: UTC+8"));
  EXPECT_EQ(s.m_long["owner"]["timezone"], "UTC+8");
  s = consolidate(s, obs(2, "tz", "owner.timezone: UTC+8"));
  EXPECT_EQ(s.m_long["owner"].size(), 1u);
  s = consolidate(s, obs(3, "tz", "owner.timezone: UTC-5"));
  EXPECT_EQ(s.m_long["owner"]["timezone"], "UTC-5");
}

TEST(Consolidate, TimestampRegression) {
  auto s = consolidate(MemoryState(), obs(10, "a"));
  try {
    consolidate(s, obs(9, "b"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::timestamp_regression);
  }
  EXPECT_NO_THROW(consolidate(s, obs(10, "same time")));
}

TEST(ParseDirective, Rules) {
  auto d = parse_directive(obs(0, "ignored", "owner.timezone: UTC+8"));
  ASSERT_TRUE(d);
  EXPECT_EQ(d->section, "owner");
  EXPECT_EQ(d->key, "timezone");
  EXPECT_EQ(d->value, "UTC+8");

  d = parse_directive(obs(0, "teal", "colour"));
  ASSERT_TRUE(d);
  EXPECT_EQ(d->section, "general");
  EXPECT_EQ(d->key, "colour");
  EXPECT_EQ(d->value, "teal");

  d = parse_directive(obs(0, "", "team . lead : bob"));
  ASSERT_TRUE(d);
  EXPECT_EQ(d->section, "team");
  EXPECT_EQ(d->key, "lead");

  d = parse_directive(obs(0, "", "multi\nline: a\nb"));
  ASSERT_TRUE(d);
  EXPECT_EQ(d->key, "multi line");
  EXPECT_EQ(d->value, "a b");

  EXPECT_FALSE(parse_directive(obs(0, "", ": orphan")));
  EXPECT_FALSE(parse_directive(obs(0, "", "#heading: x")));
  EXPECT_FALSE(parse_directive(obs(0, "", "s.#k: v")));
  EXPECT_FALSE(parse_directive(obs(0, "no directive")));
}

TEST(Replay, EmptyAndRegression) {
  EXPECT_EQ(replay({}, 5), MemoryState(5));
  std::vector<Observation> log;
  for (int i = 0; i < 6; ++i) log.push_back(obs(i * 10, "x"));
  log[4].timestamp = 5;
  try {
    replay(log, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::timestamp_regression);
    EXPECT_NE(std::string(e.what()).find("entry 5"), std::string::npos) << e.what();
  }
}

TEST(MemoryFiles, TruncatedLogNamesLine) {
  std::vector<Observation> log = {obs(1, "a"), obs(2, "b")};
  auto text = serialize_log(log);
  text.pop_back();
  text.pop_back();
  try {
    parse_log(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::parse);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(MemoryFiles, HandEditedLongIsAuthoritative) {
  TempDir dir;
  auto s = consolidate(MemoryState(4), obs(1, "x", "owner.timezone: UTC+8"));
  save_workspace(s, dir.path());
  auto long_path = dir.path() / kLongFile;
  write_text_file(long_path, read_text_file(long_path) + "nickname: Al\n");
  auto loaded = load_workspace(dir.path(), 4);
  EXPECT_EQ(loaded.m_long["owner"]["nickname"], "Al");
  EXPECT_EQ(loaded.m_long["owner"]["timezone"], "UTC+8");
}

TEST(MemoryFiles, ShortMustBeALogSuffix) {
  MemoryState s(2);
  for (int i = 0; i < 3; ++i) s = consolidate(s, obs(i, "o" + std::to_string(i)));
  MemoryState other(2);
  other = consolidate(other, obs(0, "elsewhere"));
  EXPECT_THROW(memory_from_files(serialize_log(s.m_log), serialize_short(other),
                                 serialize_long(s.m_long), 2),
               Error);
}

TEST(MemoryFiles, SaveOutsideScopeIsDenied) {
  TempDir dir;
  try {
    save_workspace(MemoryState(), dir.path(), "/definitely/not/here");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::sandbox_denied);
  }
  EXPECT_FALSE(fs::exists(dir.path() / kLogFile));
}

TEST(MemoryFiles, LongParseErrorsNameLine) {
  try {
    parse_long("# Long-term memory\n\n## owner\nno colon here\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
}

// Random logs: save/load round trip, replay equality, log prefix property,
// short window invariant.
TEST(MemoryProperties, RandomLogs) {
  testing::Rng rng(404);
  TempDir dir;
  for (int round = 0; round < 150; ++round) {
    const auto k = static_cast<std::size_t>(testing::pick(rng, 0, 6));
    auto log = testing::random_observations(rng, static_cast<std::size_t>(testing::pick(rng, 0, 25)));

    MemoryState live(k);
    std::string previous = serialize_log(live.m_log);
    for (const auto& o : log) {
      live = consolidate(live, o);
      auto now = serialize_log(live.m_log);
      ASSERT_EQ(now.compare(0, previous.size(), previous), 0);
      previous = now;

      const auto keep = std::min(k, live.m_log.size());
      ASSERT_EQ(live.m_short.size(), keep);
      ASSERT_TRUE(std::equal(live.m_short.begin(), live.m_short.end(),
                             live.m_log.end() - static_cast<std::ptrdiff_t>(keep)));
    }
    ASSERT_EQ(replay(live.m_log, k), live);
    ASSERT_EQ(parse_log(serialize_log(live.m_log)), live.m_log);
    ASSERT_EQ(parse_long(serialize_long(live.m_long)), live.m_long);

    save_workspace(live, dir.path());
    ASSERT_EQ(load_workspace(dir.path(), k), live) << "round " << round;
  }
}

TEST(MemoryJson, ObservationRoundTrip) {
  testing::Rng rng(5);
  for (const auto& o : testing::random_observations(rng, 50)) {
    EXPECT_EQ(observation_from_json(observation_to_json(o)), o);
  }
}

}  // namespace
}  // namespace topoclaw
