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

// Per-round latency of one draft/verify step and its fixed + marginal form,
// plus draft-model synchronization cost and a per-round energy account.
//
//   T_step(K, R) = T_edge(K) + T_up(K, R) + T_cloud(K) + T_down
//   T_edge(K)    = alpha_edge * K + beta
//   T_up(K, R)   = t_prop + (K * token_bits + header_bits) / R
//   T_cloud(K)   = t_base + K * delta_cloud
//
// which regroups as T_fixed(R) + K * T_marginal(R).

namespace edgespec::latency {

struct LatencyParams {
  double alpha_edge = 0.004;  // s per drafted token
  double beta = 0.002;        // s per drafting burst
  double token_bits = 16.0;
  double header_bits = 120.0;
  double t_prop = 0.02;        // one-way propagation, s
  double t_base = 0.05;        // cloud verification base cost, s
  double delta_cloud = 0.001;  // s per verified token
  double t_down = 0.02;        // downlink, K-independent, s

  // Throws ConfigError when a field is negative or non-finite.
  void validate() const;
};

struct StepBreakdown {
  double t_edge = 0.0;
  double t_up = 0.0;
  double t_cloud = 0.0;
  double t_down = 0.0;
  double t_total = 0.0;  // ((t_edge + t_up) + t_cloud) + t_down, exactly
  friend bool operator==(const StepBreakdown&, const StepBreakdown&) = default;
};

struct FixedMarginal {
  double t_fixed = 0.0;
  double t_marginal = 0.0;  // per drafted token
};

struct PowerParams {
  double p_edge_compute = 3.0;  // W
  double p_radio_tx = 4.0;      // W
  double p_radio_rx = 1.5;      // W
  double p_idle = 0.5;          // W, edge waiting on the cloud

  void validate() const;
};

struct EnergyBreakdown {
  double edge = 0.0;
  double up = 0.0;
  double cloud = 0.0;
  double down = 0.0;
  double total = 0.0;
  friend bool operator==(const EnergyBreakdown&, const EnergyBreakdown&) = default;
};

double edge_time(int k, const LatencyParams& p);
double uplink_time(int k, double rate_bps, const LatencyParams& p);
// Same, for an explicit payload size (the protocol uses actual encoded bits).
double uplink_time_bits(double bits, double rate_bps, const LatencyParams& p);
double cloud_time(int k, const LatencyParams& p);

FixedMarginal fixed_and_marginal(double rate_bps, const LatencyParams& p);

// k >= 1 for speculative rounds; k == 0 is the no-draft round used by the
// cloud-only baseline.
StepBreakdown step_time(int k, double rate_bps, const LatencyParams& p);

// Composes a breakdown from already-computed parts.
StepBreakdown make_breakdown(double t_edge, double t_up, double t_cloud, double t_down);

inline constexpr double kDefaultSyncEfficiency = 0.89;

// Seconds to ship a model of model_bytes at rate_bps with protocol efficiency
// in (0, 1].
double sync_time(double model_bytes, double rate_bps, double efficiency = kDefaultSyncEfficiency);

EnergyBreakdown energy_step(const StepBreakdown& b, const PowerParams& pw);

}  // namespace edgespec::latency
