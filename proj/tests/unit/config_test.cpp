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

#include <gtest/gtest.h>

#include <fstream>

#include "edgespec/cli/config.hpp"
#include "edgespec/errors.hpp"
#include "test_support.hpp"

namespace edgespec::cli {
namespace {

TEST(Config, DefaultsWhenEmpty) {
  const Config c = parse_config("");
  EXPECT_EQ(c.scenario.model.kind, sim::ModelKind::kBernoulli);
  EXPECT_EQ(c.scenario.channel.rate_bps, 1e6);
  EXPECT_EQ(c.scenario.policy.kind(), policy::Policy::Kind::kAdaptive);
  EXPECT_EQ(c.scenario.gamma0, 0.8);
  EXPECT_EQ(c.scenario.mu, 0.1);
  EXPECT_FALSE(c.seed_from_file);
  EXPECT_TRUE(c.warnings.empty());
}

TEST(Config, ParsesSections) {
  const Config c = parse_config(
      "# comment\n"
      "[model]\nkind = anchored\nmagnitude = 0.5\n"
      "[channel]\nkind = gilbert_elliott\nrate_weak = 500\n"
      "[policy]\npolicy = fixed:3\nk_max = 6\n"
      "[run]\nseed = 42\ntokens = 10\n"
      "[shift]\nmagnitudes = 0,1.5\nseeds = 4,5\n");
  EXPECT_EQ(c.scenario.model.kind, sim::ModelKind::kAnchored);
  EXPECT_EQ(c.scenario.model.magnitude, 0.5);
  EXPECT_EQ(c.scenario.channel.kind, sim::ChannelKind::kGilbertElliott);
  EXPECT_EQ(c.scenario.channel.ge.rate_weak, 500.0);
  EXPECT_EQ(c.scenario.policy.fixed_k(), 3);
  EXPECT_EQ(c.scenario.policy_config.k_max, 6);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_TRUE(c.seed_from_file);
  EXPECT_EQ(c.scenario.token_budget, 10u);
  EXPECT_EQ(c.shift.magnitudes, (std::vector<double>{0.0, 1.5}));
  EXPECT_EQ(c.shift_seeds, (std::vector<std::uint64_t>{4, 5}));
}

TEST(Config, RejectsUnknownNames) {
  EXPECT_THROW(parse_config("[model]\nflavour = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[extras]\nx = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("x = 1\n"), ConfigError);
  try {
    parse_config("[channel]\nrate = 5\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("channel.rate"), std::string::npos);
  }
}

TEST(Config, RejectsBadValues) {
  EXPECT_THROW(parse_config("[channel]\nrate_bps = -1\n"), ConfigError);
  EXPECT_THROW(parse_config("[channel]\nrate_bps = fast\n"), ConfigError);
  EXPECT_THROW(parse_config("[run]\ntokens = 0\n"), ConfigError);
  EXPECT_THROW(parse_config("[model]\nkind = transformer\n"), ConfigError);
  EXPECT_THROW(parse_config("[policy]\ngamma0 = 1.5\n"), ConfigError);
  EXPECT_THROW(parse_config("[policy]\npolicy = fixed:0\n"), ConfigError);
  EXPECT_THROW(parse_config("[shift]\nmagnitudes = 1,x\n"), ConfigError);
  EXPECT_THROW(parse_config("[latency]\ntoken_bits = 4\n"), ConfigError);
  EXPECT_THROW(parse_config("[model]\nkind = anchored\n[train]\nlambda1 = 0\nlambda2 = 0\n"), ConfigError);
}

TEST(Config, DuplicateKeyRejected) {
  EXPECT_THROW(parse_config("[run]\ntokens = 5\ntokens = 6\n"), ConfigError);
}

TEST(Config, WarnsWhenBitWidthsDifferFromWire) {
  const Config c = parse_config("[latency]\nheader_bits = 100\n");
  ASSERT_EQ(c.warnings.size(), 1u);
  EXPECT_NE(c.warnings[0].find("header_bits"), std::string::npos);
}

TEST(Config, ResolvedRoundTrip) {
  const Config c = parse_config("[model]\nkind = anchored\n[channel]\nkind = gilbert_elliott\n[run]\nseed = 9\n");
  const std::string resolved = resolved_config(c);
  const Config back = parse_config(resolved);
  EXPECT_EQ(resolved_config(back), resolved);
  EXPECT_EQ(back.seed, 9u);
  EXPECT_EQ(back.scenario.channel.ge.rate_strong, c.scenario.channel.ge.rate_strong);
}

TEST(Config, ShippedConfigsLoad) {
  for (const char* name : {"default.ini", "ge_ablation.ini", "k_landscape.ini", "anchored.ini", "shift.ini"}) {
    EXPECT_NO_THROW(load_config(testing::source_path(std::string("configs/") + name))) << name;
  }
}

TEST(Config, DefaultFileMatchesBuiltInDefaults) {
  Config file = load_config(testing::source_path("configs/default.ini"));
  Config builtin = parse_config("");
  builtin.seed_from_file = file.seed_from_file;
  EXPECT_EQ(resolved_config(file), resolved_config(builtin));
}

TEST(Config, RelativePathsResolveAgainstFile) {
  testing::TempDir dir;
  std::filesystem::create_directories(dir / "sub");
  std::ofstream(dir / "sub/trace.csv") << "0,1000\n";
  std::ofstream(dir / "sub/c.ini") << "[channel]\nkind = trace\ntrace = trace.csv\n";
  const Config c = load_config(dir / "sub/c.ini");
  ASSERT_TRUE(c.scenario.channel.trace_path.has_value());
  EXPECT_EQ(*c.scenario.channel.trace_path, dir / "sub/trace.csv");
}

TEST(Config, MissingFile) { EXPECT_THROW(load_config("/nonexistent/x.ini"), ConfigError); }

TEST(Lists, Parse) {
  EXPECT_EQ(parse_int_list("1,3,5", "k"), (std::vector<int>{1, 3, 5}));
  EXPECT_EQ(parse_number_list("0.5, 2", "m"), (std::vector<double>{0.5, 2.0}));
  EXPECT_THROW(parse_int_list("", "k"), ConfigError);
  EXPECT_THROW(parse_int_list("1,,2", "k"), ConfigError);
  EXPECT_THROW(parse_int_list("1.5", "k"), ConfigError);
  EXPECT_THROW(parse_number_list("a", "m"), ConfigError);
}

}  // namespace
}  // namespace edgespec::cli
