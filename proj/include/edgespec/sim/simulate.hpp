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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "edgespec/latency.hpp"
#include "edgespec/sim/scenario.hpp"

namespace edgespec::sim {

struct RoundRecord {
  std::size_t round = 0;  // 1-based
  double rate_bps = 0.0;
  int k = 0;  // 0 for a cloud-only round
  int tau = 0;
  latency::StepBreakdown time;
  latency::EnergyBreakdown energy;
  double gamma_hat = 0.0;  // after this round's update
  bool fallback = false;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct Shares {
  double edge = 0.0;
  double up = 0.0;
  double cloud = 0.0;
  double down = 0.0;

  friend bool operator==(const Shares&, const Shares&) = default;
};

struct Metrics {
  std::size_t rounds = 0;
  std::size_t emitted_tokens = 0;   // sum of tau + 1
  std::size_t accepted_tokens = 0;  // sum of tau
  double total_time_s = 0.0;
  double etgr_emitted = 0.0;
  double etgr_accepted = 0.0;
  double mean_acceptance = 0.0;  // mean of tau / k over drafting rounds
  double mean_token_latency_s = 0.0;
  double p95_token_latency_s = 0.0;  // nearest rank
  double total_energy_j = 0.0;
  Shares time_shares;
  Shares energy_shares;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

struct SimulationResult {
  std::vector<RoundRecord> records;
  Metrics metrics;
  TokenSequence committed;  // prompt excluded
  TokenSequence prompt;
};

Metrics compute_metrics(const std::vector<RoundRecord>& records);

// Runs rounds until the token budget (or round limit) is reached. The clock
// is logical: round n samples the channel at the sum of earlier round times.
// Errors raised inside a round are rethrown as SimulationError naming it.
SimulationResult simulate(const Scenario& scenario, const ModelSet& models, std::uint64_t seed);
SimulationResult simulate(const Scenario& scenario, std::uint64_t seed);

// Prompt used by simulate for this seed.
TokenSequence make_prompt(const Scenario& scenario, std::uint64_t seed);

struct SweepRow {
  std::string policy;
  Metrics metrics;
};

// One row per fixed k (and one for the adaptive policy when asked), all on
// the same models, channel realization and prompt. Rows are computed on up to
// `threads` threads; results do not depend on the count.
std::vector<SweepRow> sweep_k(const Scenario& scenario, const std::vector<int>& k_values, bool include_adaptive,
                              std::uint64_t seed, unsigned threads = 1);
std::vector<SweepRow> sweep_k(const Scenario& scenario, const ModelSet& models, const std::vector<int>& k_values,
                              bool include_adaptive, std::uint64_t seed, unsigned threads = 1);

struct Landscape {
  std::vector<double> rates;
  int k_max = 0;
  std::vector<std::vector<double>> etgr;  // [rate][k - 1]
  std::vector<int> argmax_k;              // ties to the smaller k
};

Landscape optimal_k_landscape(double gamma, const latency::LatencyParams& params, const std::vector<double>& rates,
                              int k_max, policy::AcceptanceModel model = policy::AcceptanceModel::kGeometric);

}  // namespace edgespec::sim
