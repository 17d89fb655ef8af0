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

// Everything one simulation needs, in resolved form.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "edgespec/channel.hpp"
#include "edgespec/latency.hpp"
#include "edgespec/models/anchored.hpp"
#include "edgespec/models/lm.hpp"
#include "edgespec/models/training.hpp"
#include "edgespec/policy.hpp"

namespace edgespec::sim {

enum class ModelKind { kBernoulli, kAnchored };

struct ModelSpec {
  ModelKind kind = ModelKind::kBernoulli;
  double bernoulli_p = 0.7;
  models::FamilyConfig family;  // vocab is shared by both kinds
  // Anchored only: target version is fine_tune(base, magnitude, task_seed).
  double magnitude = 0.0;
  std::uint64_t task_seed = 1;
  // Anchored only: load the draft from here instead of training it.
  std::optional<std::filesystem::path> draft_checkpoint;
  models::TrainingConfig train;
  std::size_t corpus_sequences = 5000;
  std::size_t corpus_length = 32;
  std::uint64_t corpus_seed = 11;
  double draft_temperature = 0.0;
};

enum class ChannelKind { kConstant, kTrace, kGilbertElliott };

struct ChannelSpec {
  ChannelKind kind = ChannelKind::kConstant;
  double rate_bps = 1e6;
  std::optional<std::filesystem::path> trace_path;
  channel::HoldMode hold = channel::HoldMode::kStepHold;
  double snr_efficiency = 1.0;
  channel::GilbertElliottParams ge{2e6, 2e4, 0.9, 0.9, 0};
  double slot_s = 0.5;
};

struct Scenario {
  ModelSpec model;
  ChannelSpec channel;
  latency::LatencyParams latency;
  latency::PowerParams power;
  policy::PolicyConfig policy_config;
  policy::Policy policy = policy::Policy::adaptive();
  double gamma0 = policy::AcceptanceEstimator::kDefaultGamma0;
  double mu = policy::AcceptanceEstimator::kDefaultMu;
  std::size_t token_budget = 2000;  // stop once this many tokens are committed
  std::size_t max_rounds = 0;       // 0 = no round limit
  std::size_t prompt_length = 8;

  // Throws ConfigError on the first invalid field.
  void validate() const;
};

// Target and drafter for one scenario; the drafter may refer to the target,
// so the set is pinned in memory.
class ModelSet {
 public:
  virtual ~ModelSet() = default;
  virtual const models::TargetLm& target() const = 0;
  virtual const models::Drafter& draft() const = 0;
};

// Builds (and for anchored models without a checkpoint, trains) the models.
// Deterministic in (spec, seed).
std::unique_ptr<ModelSet> build_models(const ModelSpec& spec, std::uint64_t seed);

channel::ChannelModel build_channel(const ChannelSpec& spec, std::uint64_t seed);

}  // namespace edgespec::sim
