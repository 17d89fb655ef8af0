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
#include <json.hpp>
#include <sstream>

#include "edgespec/errors.hpp"
#include "edgespec/sim/report.hpp"
#include "edgespec/sim/simulate.hpp"
#include "golden.hpp"

namespace edgespec::sim {
namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Scenario small_scenario(policy::Policy pol) {
  Scenario s;
  s.model.bernoulli_p = 0.7;
  s.channel.kind = ChannelKind::kGilbertElliott;
  s.policy = pol;
  s.token_budget = 300;
  return s;
}

TEST(RoundsCsv, HeaderOnlyWhenEmpty) {
  EXPECT_EQ(rounds_csv({}), std::string(kRoundsCsvHeader) + "\n");
}

TEST(RoundsCsv, ReadBackReproducesRecords) {
  const Scenario s = small_scenario(policy::Policy::adaptive());
  const SimulationResult r = simulate(s, 2);
  const auto back = parse_rounds_csv(rounds_csv(r.records), s.power);
  ASSERT_EQ(back.size(), r.records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].round, r.records[i].round);
    EXPECT_EQ(back[i].rate_bps, r.records[i].rate_bps);
    EXPECT_EQ(back[i].k, r.records[i].k);
    EXPECT_EQ(back[i].tau, r.records[i].tau);
    EXPECT_EQ(back[i].time.t_total, r.records[i].time.t_total);
    EXPECT_EQ(back[i].energy.total, r.records[i].energy.total);
    EXPECT_EQ(back[i].gamma_hat, r.records[i].gamma_hat);
    EXPECT_EQ(back[i].fallback, r.records[i].fallback);
  }
  EXPECT_EQ(compute_metrics(back).etgr_emitted, r.metrics.etgr_emitted);
}

TEST(RoundsCsv, ParseErrors) {
  const latency::PowerParams pw;
  EXPECT_THROW(parse_rounds_csv("round,k\n", pw), ParseError);
  Scenario s;
  s.max_rounds = 3;
  const std::string csv = rounds_csv(simulate(s, 1).records);
  std::vector<std::string> lines;
  for (std::size_t pos = 0; pos < csv.size();) {
    const std::size_t eol = csv.find('\n', pos);
    lines.push_back(csv.substr(pos, eol - pos));
    pos = eol + 1;
  }
  ASSERT_EQ(lines.size(), 4u);
  auto with_line = [&](std::size_t i, const std::string& replacement) {
    std::string out;
    for (std::size_t j = 0; j < lines.size(); ++j) out += (j == i ? replacement : lines[j]) + "\n";
    return out;
  };
  const std::string third = lines[2];
  for (const std::string& bad : {third.substr(0, third.find(',')) + ",x" + third.substr(third.find(',', 2)),
                                 third.substr(0, third.rfind(',')) + ",2", third + ",extra"}) {
    try {
      parse_rounds_csv(with_line(2, bad), pw);
      FAIL() << bad;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), 3u) << bad;
    }
  }
}

TEST(RoundsCsv, PerfectDraftGolden) {
  Scenario s;
  s.model.bernoulli_p = 1.0;
  s.policy = policy::Policy::fixed(4);
  s.max_rounds = 5;
  testing::expect_matches_fixture("rounds_fixed_k4.csv", rounds_csv(simulate(s, 1).records));
}

TEST(SummaryJson, RequiredKeys) {
  const SimulationResult r = simulate(small_scenario(policy::Policy::adaptive()), 1);
  const auto j = nlohmann::json::parse(summary_json(r.metrics));
  for (const char* key : {"etgr_emitted", "etgr_accepted", "mean_acceptance", "p95_token_latency_s", "total_energy_j",
                          "time_shares", "energy_shares"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  for (const char* part : {"edge", "up", "cloud", "down"}) {
    EXPECT_TRUE(j["time_shares"].contains(part));
    EXPECT_TRUE(j["energy_shares"].contains(part));
  }
  EXPECT_EQ(j["etgr_emitted"].get<double>(), r.metrics.etgr_emitted);
}

TEST(RunOutputs, WritesThreeFiles) {
  testing::TempDir dir;
  const SimulationResult r = simulate(small_scenario(policy::Policy::adaptive()), 1);
  write_run_outputs(dir / "nested/out", r.records, r.metrics, "x = 1\n");
  EXPECT_EQ(slurp(dir / "nested/out/rounds.csv"), rounds_csv(r.records));
  EXPECT_EQ(slurp(dir / "nested/out/summary.json"), summary_json(r.metrics));
  EXPECT_EQ(slurp(dir / "nested/out/config.resolved"), "x = 1\n");
  for (const auto& e : std::filesystem::directory_iterator(dir / "nested/out")) {
    const std::string name = e.path().filename().string();
    EXPECT_TRUE(name == "rounds.csv" || name == "summary.json" || name == "config.resolved") << name;
  }
}

TEST(SweepCsv, OneLinePerRow) {
  const auto rows = sweep_k(small_scenario(policy::Policy::adaptive()), {1, 4}, true, 1);
  const std::string csv = sweep_csv(rows);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_NE(csv.find("\nfixed:4,"), std::string::npos);
  EXPECT_NE(csv.find("\nadaptive,"), std::string::npos);
}

TEST(LandscapeCsv, Shape) {
  const auto l = optimal_k_landscape(0.5, latency::LatencyParams{}, {400, 1e7}, 3);
  const std::string csv = landscape_csv(l);
  EXPECT_EQ(csv.substr(0, csv.find('\n')).find("rate_bps,etgr_k1,etgr_k2,etgr_k3"), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

}  // namespace
}  // namespace edgespec::sim
