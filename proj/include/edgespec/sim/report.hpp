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

// Plot-ready outputs. Floating-point fields are printed with 17 significant
// digits so a CSV read back reproduces the doubles exactly.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "edgespec/latency.hpp"
#include "edgespec/sim/shift.hpp"
#include "edgespec/sim/simulate.hpp"

namespace edgespec::sim {

inline constexpr std::string_view kRoundsCsvHeader =
    "round,rate_bps,k,tau,t_edge,t_up,t_cloud,t_down,t_total,energy_j,gamma_hat,fallback";
inline constexpr int kSummarySchemaVersion = 1;

std::string rounds_csv(const std::vector<RoundRecord>& records);
// Inverse of rounds_csv. Energy components are recomputed from the times with
// `power`, since the CSV carries only the round total. Throws ParseError.
std::vector<RoundRecord> parse_rounds_csv(std::string_view text, const latency::PowerParams& power);

std::string summary_json(const Metrics& metrics);
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string landscape_csv(const Landscape& landscape);
std::string shift_csv(const ShiftExperiment& experiment);

// <dir>/rounds.csv, <dir>/summary.json, <dir>/config.resolved, each written
// atomically. Creates `dir` if needed. Throws IoError.
void write_run_outputs(const std::filesystem::path& dir, const std::vector<RoundRecord>& records,
                       const Metrics& metrics, std::string_view resolved_config);

}  // namespace edgespec::sim
