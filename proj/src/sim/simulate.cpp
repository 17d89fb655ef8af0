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

#include "edgespec/sim/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "edgespec/errors.hpp"
#include "edgespec/protocol/round.hpp"
#include "edgespec/random.hpp"

namespace edgespec::sim {

namespace {

constexpr std::uint64_t kTagPrompt = 31;
constexpr std::uint64_t kTagDraftSampling = 32;
constexpr std::uint32_t kSessionId = 1;

Shares shares_of(double edge, double up, double cloud, double down) {
  const double total = ((edge + up) + cloud) + down;
  if (!(total > 0.0)) return {};
  return {edge / total, up / total, cloud / total, down / total};
}

}  // namespace

Metrics compute_metrics(const std::vector<RoundRecord>& records) {
  Metrics m;
  m.rounds = records.size();
  if (records.empty()) return m;

  double t_edge = 0.0, t_up = 0.0, t_cloud = 0.0, t_down = 0.0;
  double e_edge = 0.0, e_up = 0.0, e_cloud = 0.0, e_down = 0.0;
  double acceptance_sum = 0.0;
  std::size_t drafting_rounds = 0;
  std::vector<double> per_token;
  for (const RoundRecord& r : records) {
    const std::size_t emitted = static_cast<std::size_t>(r.tau) + 1;
    m.emitted_tokens += emitted;
    m.accepted_tokens += static_cast<std::size_t>(r.tau);
    m.total_time_s += r.time.t_total;
    m.total_energy_j += r.energy.total;
    t_edge += r.time.t_edge;
    t_up += r.time.t_up;
    t_cloud += r.time.t_cloud;
    t_down += r.time.t_down;
    e_edge += r.energy.edge;
    e_up += r.energy.up;
    e_cloud += r.energy.cloud;
    e_down += r.energy.down;
    if (r.k > 0) {
      acceptance_sum += static_cast<double>(r.tau) / r.k;
      ++drafting_rounds;
    }
    per_token.insert(per_token.end(), emitted, r.time.t_total / static_cast<double>(emitted));
  }
  m.etgr_emitted = static_cast<double>(m.emitted_tokens) / m.total_time_s;
  m.etgr_accepted = static_cast<double>(m.accepted_tokens) / m.total_time_s;
  m.mean_acceptance = drafting_rounds == 0 ? 0.0 : acceptance_sum / static_cast<double>(drafting_rounds);
  m.mean_token_latency_s = m.total_time_s / static_cast<double>(m.emitted_tokens);
  std::sort(per_token.begin(), per_token.end());
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(per_token.size())));
  m.p95_token_latency_s = per_token[std::max<std::size_t>(rank, 1) - 1];
  m.time_shares = shares_of(t_edge, t_up, t_cloud, t_down);
  m.energy_shares = shares_of(e_edge, e_up, e_cloud, e_down);
  return m;
}

TokenSequence make_prompt(const Scenario& scenario, std::uint64_t seed) {
  Rng rng(derive_seed(seed, kTagPrompt));
  TokenSequence prompt(scenario.prompt_length);
  for (Token& t : prompt) t = static_cast<Token>(rng.below(scenario.model.family.vocab));
  return prompt;
}

SimulationResult simulate(const Scenario& scenario, const ModelSet& models, std::uint64_t seed) {
  scenario.validate();
  channel::ChannelModel channel = build_channel(scenario.channel, seed);
  SimulationResult result;
  result.prompt = make_prompt(scenario, seed);

  protocol::EdgeEndpoint edge(kSessionId, models.draft(), result.prompt, scenario.model.draft_temperature,
                              derive_seed(seed, kTagDraftSampling));
  protocol::CloudEndpoint cloud(kSessionId, models.target(), result.prompt);
  policy::AcceptanceEstimator estimator(scenario.gamma0, scenario.mu);
  const bool cloud_only = scenario.policy.kind() == policy::Policy::Kind::kCloudOnly;

  double clock = 0.0;
  std::size_t emitted = 0;
  while (emitted < scenario.token_budget && (scenario.max_rounds == 0 || result.records.size() < scenario.max_rounds)) {
    const std::size_t round = result.records.size() + 1;
    try {
      RoundRecord rec;
      rec.round = round;
      rec.rate_bps = channel.rate_at(clock);
      const latency::FixedMarginal fm = latency::fixed_and_marginal(rec.rate_bps, scenario.latency);
      const policy::PolicyDecision decision =
          scenario.policy.decide(estimator, fm.t_fixed, fm.t_marginal, scenario.policy_config);
      rec.k = cloud_only ? 0 : decision.k;
      rec.fallback = decision.fallback_engaged;

      const protocol::RoundResult rr = protocol::run_round(edge, cloud, rec.k, rec.rate_bps, scenario.latency);
      rec.tau = rr.outcome.tau;
      rec.time = rr.timing;
      rec.energy = latency::energy_step(rr.timing, scenario.power);
      if (rec.k > 0) estimator.update(rec.tau, rec.k);
      rec.gamma_hat = estimator.gamma_hat();

      clock += rec.time.t_total;
      emitted += rr.outcome.emitted.size();
      result.committed.insert(result.committed.end(), rr.outcome.emitted.begin(), rr.outcome.emitted.end());
      result.records.push_back(rec);
    } catch (const SimulationError&) {
      throw;
    } catch (const std::exception& e) {
      throw SimulationError(round, e.what());
    }
  }
  result.metrics = compute_metrics(result.records);
  return result;
}

SimulationResult simulate(const Scenario& scenario, std::uint64_t seed) {
  scenario.validate();
  const auto models = build_models(scenario.model, seed);
  return simulate(scenario, *models, seed);
}

std::vector<SweepRow> sweep_k(const Scenario& scenario, const ModelSet& models, const std::vector<int>& k_values,
                              bool include_adaptive, std::uint64_t seed, unsigned threads) {
  std::vector<Scenario> cells;
  for (int k : k_values) {
    Scenario s = scenario;
    s.policy = policy::Policy::fixed(k);
    cells.push_back(std::move(s));
  }
  if (include_adaptive) {
    Scenario s = scenario;
    s.policy = policy::Policy::adaptive();
    cells.push_back(std::move(s));
  }
  if (cells.empty()) throw ConfigError("sweep needs at least one k value or the adaptive policy");

  std::vector<SweepRow> rows(cells.size());
  auto run_cell = [&](std::size_t i) { rows[i] = {cells[i].policy.label(), simulate(cells[i], models, seed).metrics}; };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cells.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
    return rows;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < cells.size(); i += workers) run_cell(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

std::vector<SweepRow> sweep_k(const Scenario& scenario, const std::vector<int>& k_values, bool include_adaptive,
                              std::uint64_t seed, unsigned threads) {
  scenario.validate();
  const auto models = build_models(scenario.model, seed);
  return sweep_k(scenario, *models, k_values, include_adaptive, seed, threads);
}

Landscape optimal_k_landscape(double gamma, const latency::LatencyParams& params, const std::vector<double>& rates,
                              int k_max, policy::AcceptanceModel model) {
  if (rates.empty()) throw ConfigError("landscape needs at least one rate");
  if (k_max < 1) throw ConfigError("k_max must be >= 1");
  Landscape out;
  out.rates = rates;
  out.k_max = k_max;
  for (double rate : rates) {
    const latency::FixedMarginal fm = latency::fixed_and_marginal(rate, params);
    std::vector<double> curve;
    int best = 1;
    for (int k = 1; k <= k_max; ++k) {
      curve.push_back(policy::predicted_etgr(gamma, k, fm.t_fixed, fm.t_marginal, model));
      if (curve.back() > curve[static_cast<std::size_t>(best - 1)]) best = k;
    }
    out.etgr.push_back(std::move(curve));
    out.argmax_k.push_back(best);
  }
  return out;
}

}  // namespace edgespec::sim
