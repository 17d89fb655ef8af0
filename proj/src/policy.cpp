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

#include "edgespec/policy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "edgespec/errors.hpp"

namespace edgespec::policy {

std::string_view to_string(AcceptanceModel m) {
  return m == AcceptanceModel::kGeometric ? "geometric" : "linear";
}

AcceptanceModel parse_acceptance_model(std::string_view s) {
  if (s == "geometric") return AcceptanceModel::kGeometric;
  if (s == "linear") return AcceptanceModel::kLinear;
  throw ConfigError("acceptance_model must be 'geometric' or 'linear', got '" + std::string(s) + "'");
}

AcceptanceEstimator::AcceptanceEstimator(double gamma0, double mu) : gamma_hat_(gamma0), mu_(mu) {
  if (!(gamma0 >= 0.0 && gamma0 <= 1.0)) throw ConfigError("gamma0 must be in [0, 1]");
  if (!(mu > 0.0 && mu <= 1.0)) throw ConfigError("mu must be in (0, 1]");
}

void AcceptanceEstimator::update(int tau, int k) {
  if (k < 1) throw ContractViolation("update_ema: k must be >= 1");
  if (tau < 0 || tau > k) throw ContractViolation("update_ema: tau must be in [0, k]");
  const double observed = static_cast<double>(tau) / k;
  gamma_hat_ = (1.0 - mu_) * gamma_hat_ + mu_ * observed;
  // Convex combination of values in [0, 1]; clamp only guards the last ulp.
  gamma_hat_ = std::clamp(gamma_hat_, 0.0, 1.0);
}

AcceptanceEstimator update_ema(AcceptanceEstimator estimator, int tau, int k) {
  estimator.update(tau, k);
  return estimator;
}

void PolicyConfig::validate() const {
  if (k_max < 1) throw ConfigError("k_max must be >= 1");
  if (!(fallback_threshold >= 0.0 && fallback_threshold <= 1.0)) {
    throw ConfigError("fallback_threshold must be in [0, 1]");
  }
}

double expected_accepted(double gamma, int k, AcceptanceModel model) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("expected_accepted: gamma must be in [0, 1]");
  if (k < 1) throw DomainError("expected_accepted: k must be >= 1");
  if (model == AcceptanceModel::kLinear) return std::min(gamma * k, static_cast<double>(k));
  if (gamma == 1.0) return k;
  return gamma * (1.0 - std::pow(gamma, k)) / (1.0 - gamma);
}

double predicted_etgr(double gamma, int k, double t_fixed, double t_marginal, AcceptanceModel model) {
  const double denom = t_fixed + k * t_marginal;
  if (!(denom > 0.0)) throw DomainError("predicted_etgr: round time must be > 0");
  return (1.0 + expected_accepted(gamma, k, model)) / denom;
}

PolicyDecision select_k(const AcceptanceEstimator& estimator, double t_fixed, double t_marginal,
                        const PolicyConfig& cfg) {
  cfg.validate();
  if (!(t_fixed > 0.0)) throw DomainError("select_k: t_fixed must be > 0");
  if (!(t_marginal >= 0.0)) throw DomainError("select_k: t_marginal must be >= 0");
  const double gamma = estimator.gamma_hat();
  if (gamma < cfg.fallback_threshold) {
    return {1, predicted_etgr(gamma, 1, t_fixed, t_marginal, cfg.acceptance_model), true};
  }
  PolicyDecision best{1, predicted_etgr(gamma, 1, t_fixed, t_marginal, cfg.acceptance_model), false};
  for (int k = 2; k <= cfg.k_max; ++k) {
    const double etgr = predicted_etgr(gamma, k, t_fixed, t_marginal, cfg.acceptance_model);
    if (etgr > best.predicted_etgr) best = {k, etgr, false};
  }
  return best;
}

Policy Policy::fixed(int k) {
  if (k < 1) throw ConfigError("fixed stride must be >= 1");
  return Policy(Kind::kFixed, k);
}

Policy Policy::parse(std::string_view text) {
  if (text == "adaptive") return adaptive();
  if (text == "cloud_only") return cloud_only();
  if (text.starts_with("fixed:")) {
    const std::string_view digits = text.substr(6);
    int k = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && k >= 1) return fixed(k);
  }
  throw ConfigError("policy must be adaptive, fixed:<k> or cloud_only, got '" + std::string(text) + "'");
}

std::string Policy::label() const {
  switch (kind_) {
    case Kind::kAdaptive:
      return "adaptive";
    case Kind::kFixed:
      return "fixed:" + std::to_string(fixed_k_);
    case Kind::kCloudOnly:
      return "cloud_only";
  }
  return "unknown";
}

PolicyDecision Policy::decide(const AcceptanceEstimator& estimator, double t_fixed, double t_marginal,
                              const PolicyConfig& cfg) const {
  switch (kind_) {
    case Kind::kAdaptive:
      return select_k(estimator, t_fixed, t_marginal, cfg);
    case Kind::kFixed: {
      const int k = std::min(fixed_k_, cfg.k_max);
      return {k, predicted_etgr(estimator.gamma_hat(), k, t_fixed, t_marginal, cfg.acceptance_model), false};
    }
    case Kind::kCloudOnly:
      // Nothing drafted, one token back per round. t_fixed still carries the
      // drafting overhead beta, so this slightly under-predicts.
      return {1, 1.0 / t_fixed, false};
  }
  throw ContractViolation("unknown policy kind");
}

Policy fixed_k_policy(int k) { return Policy::fixed(k); }
Policy cloud_only_policy() { return Policy::cloud_only(); }

}  // namespace edgespec::policy
