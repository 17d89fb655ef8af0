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

#include "edgespec/sim/scenario.hpp"

#include <cmath>

#include "edgespec/errors.hpp"
#include "edgespec/models/checkpoint.hpp"
#include "edgespec/models/corpus.hpp"
#include "edgespec/models/synthetic.hpp"
#include "edgespec/random.hpp"

namespace edgespec::sim {

namespace {

constexpr std::uint64_t kTagBernoulli = 21;
constexpr std::uint64_t kTagChannel = 22;

class BernoulliModels final : public ModelSet {
 public:
  BernoulliModels(std::size_t vocab, double p, std::uint64_t seed) : pair_(vocab, p, seed) {}
  const models::TargetLm& target() const override { return pair_.target; }
  const models::Drafter& draft() const override { return pair_.draft; }

 private:
  models::BernoulliPair pair_;
};

class AnchoredModels final : public ModelSet {
 public:
  AnchoredModels(models::TargetModel target, models::DraftModel draft)
      : target_(std::move(target)), draft_(std::move(draft)) {}
  const models::TargetLm& target() const override { return target_; }
  const models::Drafter& draft() const override { return draft_; }

 private:
  models::TargetModel target_;
  models::DraftModel draft_;
};

}  // namespace

void Scenario::validate() const {
  latency.validate();
  power.validate();
  policy_config.validate();
  if (token_budget == 0) throw ConfigError("run.tokens must be >= 1");
  if (prompt_length == 0) throw ConfigError("run.prompt_length must be >= 1");
  if (!(gamma0 >= 0.0 && gamma0 <= 1.0)) throw ConfigError("policy.gamma0 must be in [0, 1]");
  if (!(mu > 0.0 && mu <= 1.0)) throw ConfigError("policy.mu must be in (0, 1]");

  const std::size_t vocab = model.family.vocab;
  if (vocab < 2 || vocab > 65536) throw ConfigError("model.vocab must be in [2, 65536]");
  const double bits_needed = std::ceil(std::log2(static_cast<double>(vocab)));
  if (latency.token_bits < bits_needed) {
    throw ConfigError("latency.token_bits must be >= " + std::to_string(static_cast<int>(bits_needed)) +
                      " for a vocabulary of " + std::to_string(vocab));
  }
  if (model.kind == ModelKind::kBernoulli) {
    if (!(model.bernoulli_p >= 0.0 && model.bernoulli_p <= 1.0)) throw ConfigError("model.p must be in [0, 1]");
  } else {
    model.family.validate();
    if (!(model.magnitude >= 0.0)) throw ConfigError("model.magnitude must be >= 0");
    if (!model.draft_checkpoint) {
      model.train.validate();
      if (model.corpus_sequences == 0 || model.corpus_length == 0) {
        throw ConfigError("model.corpus_sequences and model.corpus_length must be >= 1");
      }
    }
  }
  if (!(model.draft_temperature >= 0.0)) throw ConfigError("model.draft_temperature must be >= 0");

  switch (channel.kind) {
    case ChannelKind::kConstant:
      if (!(channel.rate_bps > 0.0)) throw ConfigError("channel.rate_bps must be > 0");
      break;
    case ChannelKind::kTrace:
      if (!channel.trace_path) throw ConfigError("channel.trace is required for a trace channel");
      break;
    case ChannelKind::kGilbertElliott:
      channel.ge.validate();
      if (!(channel.slot_s > 0.0)) throw ConfigError("channel.slot_s must be > 0");
      break;
  }
}

std::unique_ptr<ModelSet> build_models(const ModelSpec& spec, std::uint64_t seed) {
  if (spec.kind == ModelKind::kBernoulli) {
    return std::make_unique<BernoulliModels>(spec.family.vocab, spec.bernoulli_p, derive_seed(seed, kTagBernoulli));
  }
  const models::TargetModel base = models::make_base_target(spec.family);
  models::TargetModel target = spec.magnitude > 0.0 ? models::fine_tune(base, spec.magnitude, spec.task_seed) : base;
  if (spec.draft_checkpoint) {
    models::DraftModel draft = models::attach_to_base(models::load_draft(*spec.draft_checkpoint), base);
    return std::make_unique<AnchoredModels>(std::move(target), std::move(draft));
  }
  const models::MarkovSource source(spec.family.vocab, spec.corpus_seed);
  const models::Corpus corpus =
      models::generate_corpus(source, spec.corpus_sequences, spec.corpus_length, derive_seed(spec.corpus_seed, 1));
  models::DraftTrainingResult trained = models::train_draft(base, corpus, spec.train, spec.family);
  return std::make_unique<AnchoredModels>(std::move(target), std::move(trained.draft));
}

channel::ChannelModel build_channel(const ChannelSpec& spec, std::uint64_t seed) {
  switch (spec.kind) {
    case ChannelKind::kConstant:
      return channel::ChannelModel(channel::ConstantChannel{spec.rate_bps});
    case ChannelKind::kTrace:
      return channel::ChannelModel(channel::load_trace_file(*spec.trace_path, spec.hold, spec.snr_efficiency));
    case ChannelKind::kGilbertElliott: {
      channel::GilbertElliottParams ge = spec.ge;
      ge.seed = derive_seed(derive_seed(seed, kTagChannel), spec.ge.seed);
      return channel::ChannelModel(channel::GilbertElliottChannel(ge, spec.slot_s));
    }
  }
  throw ContractViolation("unknown channel kind");
}

}  // namespace edgespec::sim
