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

#include "edgespec/models/synthetic.hpp"

#include <algorithm>

#include "edgespec/errors.hpp"
#include "edgespec/random.hpp"

namespace edgespec::models {

std::uint64_t context_hash(std::span<const Token> context, std::uint64_t seed) {
  std::uint64_t h = splitmix64(seed ^ context.size());
  const std::size_t tail = std::min<std::size_t>(context.size(), 4);
  for (std::size_t i = context.size() - tail; i < context.size(); ++i) h = splitmix64(h ^ context[i]);
  return h;
}

HashTarget::HashTarget(std::size_t vocab, std::uint64_t seed) : vocab_(vocab), seed_(seed) {
  if (vocab < 2 || vocab > 65536) throw ConfigError("vocab must be in [2, 65536]");
}

void HashTarget::features(std::span<const Token> context, std::span<double> out) const {
  if (context.empty()) throw ContractViolation("features: context must be non-empty");
  for (Token t : context.subspan(context.size() - std::min<std::size_t>(context.size(), 4))) {
    if (t >= vocab_) throw DomainError("token " + std::to_string(t) + " outside vocabulary");
  }
  out[0] = static_cast<double>(context_hash(context, seed_) % vocab_);
}

Token HashTarget::greedy_from_features(std::span<const double> feature) const {
  return static_cast<Token>(feature[0]);
}

BernoulliDraft::BernoulliDraft(const HashTarget& target, double p, std::uint64_t seed)
    : target_(target), p_(p), seed_(seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("bernoulli p must be in [0, 1]");
}

Token BernoulliDraft::greedy_next(std::span<const Token> context) const {
  const Token truth = target_.greedy_next(context);
  const std::uint64_t h = context_hash(context, seed_);
  if (to_unit(h) < p_) return truth;
  // Any token other than the target's choice, uniformly.
  const std::uint64_t shift = 1 + splitmix64(h) % (vocab_size() - 1);
  return static_cast<Token>((truth + shift) % vocab_size());
}

void BernoulliDraft::logits(std::span<const Token> context, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  out[greedy_next(context)] = 1.0;
}

BernoulliPair::BernoulliPair(std::size_t vocab, double p, std::uint64_t seed)
    : target(vocab, derive_seed(seed, 1)), draft(target, p, derive_seed(seed, 2)) {}

}  // namespace edgespec::models
