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

#include "generators.hpp"
#include "topoclaw/capability.hpp"
#include "topoclaw/error.hpp"

namespace topoclaw {
namespace {

TEST(CapabilityId, AcceptsDottedLowercaseTokens) {
  EXPECT_TRUE(is_valid_capability_id("sms.send"));
  EXPECT_TRUE(is_valid_capability_id("fs"));
  EXPECT_TRUE(is_valid_capability_id("a.b_c.d2"));
}

TEST(CapabilityId, RejectsMalformed) {
  for (const char* bad : {"", ".fs", "fs.", "fs..read", "FS.read", "fs read", "fs-read", "fs.*"}) {
    EXPECT_FALSE(is_valid_capability_id(bad)) << bad;
  }
  EXPECT_THROW(check_capability_ids({"ok.id", "Bad"}, "test"), Error);
}

TEST(CapabilitySet, SubsetAndIntersection) {
  CapabilitySet a{"fs.read", "fs.search"};
  EXPECT_TRUE(is_subset({"fs.search"}, a));
  EXPECT_TRUE(is_subset({}, a));
  EXPECT_FALSE(is_subset({"sms.send"}, a));
  EXPECT_EQ(intersect(a, {"fs.read", "msg.send"}), (CapabilitySet{"fs.read"}));
  EXPECT_EQ(difference(a, {"fs.read"}), (CapabilitySet{"fs.search"}));
  EXPECT_EQ(join(a), "fs.read,fs.search");
}

// Intersection against a bitmask model over the whole 6-element universe.
TEST(CapabilitySet, IntersectionMatchesBitmaskModel) {
  constexpr int kN = 6;
  auto from_mask = [](int m) {
    CapabilitySet s;
    for (int i = 0; i < kN; ++i) {
      if (m & (1 << i)) s.insert(testing::kPrivilegeUniverse[i]);
    }
    return s;
  };
  for (int x = 0; x < (1 << kN); ++x) {
    for (int y = 0; y < (1 << kN); ++y) {
      ASSERT_EQ(intersect(from_mask(x), from_mask(y)), from_mask(x & y));
    }
  }
}

}  // namespace
}  // namespace topoclaw
