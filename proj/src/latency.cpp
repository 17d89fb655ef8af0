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

#include "edgespec/latency.hpp"

#include <cmath>
#include <string>

#include "edgespec/errors.hpp"

namespace edgespec::latency {

namespace {

void require_non_negative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string(name) + " must be a finite value >= 0");
  }
}

void require_rate(double rate_bps) {
  if (!(rate_bps > 0.0)) throw DomainError("rate must be > 0");
}

void require_k(int k) {
  if (k < 0) throw ContractViolation("token count must be >= 0");
}

}  // namespace

void LatencyParams::validate() const {
  require_non_negative(alpha_edge, "alpha_edge");
  require_non_negative(beta, "beta");
  require_non_negative(token_bits, "token_bits");
  require_non_negative(header_bits, "header_bits");
  require_non_negative(t_prop, "t_prop");
  require_non_negative(t_base, "t_base");
  require_non_negative(delta_cloud, "delta_cloud");
  require_non_negative(t_down, "t_down");
}

void PowerParams::validate() const {
  require_non_negative(p_edge_compute, "p_edge_compute");
  require_non_negative(p_radio_tx, "p_radio_tx");
  require_non_negative(p_radio_rx, "p_radio_rx");
  require_non_negative(p_idle, "p_idle");
}

double edge_time(int k, const LatencyParams& p) {
  require_k(k);
  return p.alpha_edge * k + p.beta;
}

double uplink_time(int k, double rate_bps, const LatencyParams& p) {
  require_k(k);
  return uplink_time_bits(k * p.token_bits + p.header_bits, rate_bps, p);
}

double uplink_time_bits(double bits, double rate_bps, const LatencyParams& p) {
  require_rate(rate_bps);
  return p.t_prop + bits / rate_bps;
}

double cloud_time(int k, const LatencyParams& p) {
  require_k(k);
  return p.t_base + k * p.delta_cloud;
}

FixedMarginal fixed_and_marginal(double rate_bps, const LatencyParams& p) {
  require_rate(rate_bps);
  return {p.t_prop + p.t_base + p.t_down + p.header_bits / rate_bps + p.beta,
          p.alpha_edge + p.token_bits / rate_bps + p.delta_cloud};
}

StepBreakdown make_breakdown(double t_edge, double t_up, double t_cloud, double t_down) {
  return {t_edge, t_up, t_cloud, t_down, ((t_edge + t_up) + t_cloud) + t_down};
}

StepBreakdown step_time(int k, double rate_bps, const LatencyParams& p) {
  require_k(k);
  require_rate(rate_bps);
  // A no-draft round does not run the drafter at all, so beta is not paid.
  const double t_edge = k == 0 ? 0.0 : edge_time(k, p);
  return make_breakdown(t_edge, uplink_time(k, rate_bps, p), cloud_time(k, p), p.t_down);
}

double sync_time(double model_bytes, double rate_bps, double efficiency) {
  if (!(model_bytes > 0.0)) throw DomainError("sync_time: model size must be > 0");
  require_rate(rate_bps);
  if (!(efficiency > 0.0 && efficiency <= 1.0)) throw DomainError("sync_time: efficiency must be in (0, 1]");
  return 8.0 * model_bytes / (efficiency * rate_bps);
}

EnergyBreakdown energy_step(const StepBreakdown& b, const PowerParams& pw) {
  EnergyBreakdown e;
  e.edge = pw.p_edge_compute * b.t_edge;
  e.up = pw.p_radio_tx * b.t_up;
  e.cloud = pw.p_idle * b.t_cloud;
  e.down = pw.p_radio_rx * b.t_down;
  e.total = ((e.edge + e.up) + e.cloud) + e.down;
  return e;
}

}  // namespace edgespec::latency
