// Copyright 2026 The EdgeSpec Authors.
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

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <span>
#include <sstream>
#include <string>

#include "test_support.hpp"

namespace edgespec::testing {

// Compares `actual` with the committed fixture. With EDGESPEC_REGEN_FIXTURES
// set, rewrites the fixture instead.
inline void expect_matches_fixture(const std::string& name, const std::string& actual) {
  const auto path = fixture_path(name);
  if (const char* regen = std::getenv("EDGESPEC_REGEN_FIXTURES"); regen != nullptr && *regen != '\0') {
    std::ofstream(path, std::ios::binary) << actual;
    GTEST_SKIP() << "rewrote " << path;
  }
  std::ifstream in(path, std::ios::binary);
  ASSERT_TRUE(in) << "missing fixture " << path;
  std::ostringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), actual) << "fixture " << name;
}

inline std::string format_values(const char* label, std::span<const double> values) {
  std::string out = label;
  char buf[40];
  for (double v : values) {
    std::snprintf(buf, sizeof buf, " %.17g", v);
    out += buf;
  }
  return out + "\n";
}

}  // namespace edgespec::testing
