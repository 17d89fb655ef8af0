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

// Speculative-stride selection: pick the K in [1, k_max] that maximizes the
// predicted effective token generation rate
//
//   ETGR(K) = (1 + E[tau | K]) / (T_fixed + K * T_marginal)
//
// where the +1 is the correction token every round emits, and E[tau | K]
// comes from the edge-side EMA acceptance estimate.

#include <string>
#include <string_view>

namespace edgespec::policy {

enum class AcceptanceModel { kGeometric, kLinear };

std::string_view to_string(AcceptanceModel m);
AcceptanceModel parse_acceptance_model(std::string_view s);

class AcceptanceEstimator {
 public:
  static constexpr double kDefaultGamma0 = 0.8;
  static constexpr double kDefaultMu = 0.1;

  explicit AcceptanceEstimator(double gamma0 = kDefaultGamma0, double mu = kDefaultMu);

  double gamma_hat() const noexcept { return gamma_hat_; }
  double mu() const noexcept { return mu_; }

  // gamma <- (1 - mu) * gamma + mu * tau / k. Requires 0 <= tau <= k, k >= 1.
  void update(int tau, int k);

 private:
  double gamma_hat_;
  double mu_;
};

// Functional form of AcceptanceEstimator::update.
AcceptanceEstimator update_ema(AcceptanceEstimator estimator, int tau, int k);

struct PolicyConfig {
  int k_max = 8;
  AcceptanceModel acceptance_model = AcceptanceModel::kGeometric;
  double fallback_threshold = 0.05;

  void validate() const;
};

struct PolicyDecision {
  int k = 1;
  double predicted_etgr = 0.0;  // tokens/s
  bool fallback_engaged = false;
};

// geometric: gamma (1 - gamma^k) / (1 - gamma), k at gamma == 1.
// linear:    gamma * k.
double expected_accepted(double gamma, int k, AcceptanceModel model);

double predicted_etgr(double gamma, int k, double t_fixed, double t_marginal, AcceptanceModel model);

// Brute-force argmax over k in [1, k_max], ties to the smallest k. Falls back
// to k = 1 when gamma_hat < fallback_threshold.
PolicyDecision select_k(const AcceptanceEstimator& estimator, double t_fixed, double t_marginal,
                        const PolicyConfig& cfg);

// Which stride rule drives a simulation.
class Policy {
 public:
  enum class Kind { kAdaptive, kFixed, kCloudOnly };

  static Policy adaptive() { return Policy(Kind::kAdaptive, 0); }
  static Policy fixed(int k);
  static Policy cloud_only() { return Policy(Kind::kCloudOnly, 1); }

  // "adaptive", "fixed:<k>", "cloud_only".
  static Policy parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  int fixed_k() const noexcept { return fixed_k_; }
  std::string label() const;

  // Fixed strides are clamped to k_max. Cloud-only always answers k = 1: the
  // simulator runs such rounds without drafting and with zero acceptance.
  PolicyDecision decide(const AcceptanceEstimator& estimator, double t_fixed, double t_marginal,
                        const PolicyConfig& cfg) const;

  friend bool operator==(const Policy&, const Policy&) = default;

 private:
  Policy(Kind kind, int k) : kind_(kind), fixed_k_(k) {}

  Kind kind_;
  int fixed_k_;
};

Policy fixed_k_policy(int k);
Policy cloud_only_policy();

}  // namespace edgespec::policy
