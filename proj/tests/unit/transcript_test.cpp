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

#include "fixtures.hpp"
#include "topoclaw/transcript.hpp"

namespace topoclaw {
namespace {

using nlohmann::json;

struct Checked {
  Scenario scenario;
  KeyStore keys;
  json transcript;
};

Checked checked(const std::string& name) {
  Checked c{testing::bundled_scenario(name), {}, {}};
  c.keys = testing::keystore_for(c.scenario);
  c.transcript = testing::run_bundled(name).to_json();
  return c;
}

TEST(VerifyTranscript, BundledScenariosAreClean) {
  for (const auto& name : testing::bundled_scenarios()) {
    auto c = checked(name);
    auto report = verify_transcript(c.transcript, &c.keys, &c.scenario.social);
    EXPECT_TRUE(report.ok()) << name << ": "
                             << (report.violations.empty() ? "" : report.violations[0]);
    EXPECT_TRUE(report.tags_checked);
    EXPECT_GT(report.events_checked, 0u) << name;
  }
}

TEST(VerifyTranscript, StructuralChecksWithoutKeys) {
  auto c = checked("crossdev_sms");
  auto report = verify_transcript(c.transcript, nullptr);
  EXPECT_TRUE(report.ok());
  EXPECT_FALSE(report.tags_checked);
}

json& first_record(json& t, const std::string& kind) {
  for (auto& r : t["records"]) {
    if (r["kind"] == kind) return r;
  }
  throw std::runtime_error("no " + kind + " record");
}

TEST(VerifyTranscript, DetectsTampering) {
  auto c = checked("crossdev_sms");

  auto t = c.transcript;
  first_record(t, "event")["event"]["human_id"] = "mallory";
  EXPECT_FALSE(verify_transcript(t, &c.keys, &c.scenario.social).ok());

  t = c.transcript;
  first_record(t, "event")["event"]["seq"] = 7;
  EXPECT_FALSE(verify_transcript(t, &c.keys, &c.scenario.social).ok());

  t = c.transcript;
  auto& decision = first_record(t, "decision");
  decision["decision"]["overall"] = "deny";
  EXPECT_FALSE(verify_transcript(t, &c.keys, &c.scenario.social).ok());

  t = c.transcript;
  t["records"].erase(t["records"].begin() + 3);
  EXPECT_FALSE(verify_transcript(t, &c.keys, &c.scenario.social).ok());

  t = c.transcript;
  t["memory"]["desktop"]["m_long"]["general"]["forged"] = "yes";
  EXPECT_FALSE(verify_transcript(t, &c.keys, &c.scenario.social).ok());

  t = c.transcript;
  t["records"][2]["time"] = 0;
  EXPECT_FALSE(verify_transcript(t, &c.keys, &c.scenario.social).ok());
}

TEST(VerifyTranscript, RejectsWrongFormat) {
  auto c = checked("crossdev_sms");
  c.transcript["format"] = "something-else";
  EXPECT_FALSE(verify_transcript(c.transcript, &c.keys).ok());
}

TEST(Transcript, SerializationIsDeterministic) {
  for (const auto& name : testing::bundled_scenarios()) {
    auto a = testing::run_bundled(name).serialize();
    auto b = testing::run_bundled(name).serialize();
    EXPECT_EQ(a, b) << name;
    EXPECT_EQ(a.back(), '\n');
  }
}

}  // namespace
}  // namespace topoclaw
