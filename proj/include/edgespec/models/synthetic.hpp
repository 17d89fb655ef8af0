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

// Controlled-agreement model pair for policy and simulator tests: the target's
// greedy token is a hash of its recent context, and the draft reproduces it at
// each position with independent probability p.

#include <cstdint>

#include "edgespec/models/lm.hpp"

namespace edgespec::models {

class HashTarget final : public TargetLm {
 public:
  HashTarget(std::size_t vocab, std::uint64_t seed);

  std::size_t vocab_size() const override { return vocab_; }
  // One feature: the greedy next token stored as a double.
  std::size_t feature_dim() const override { return 1; }
  void features(std::span<const Token> context, std::span<double> out) const override;
  Token greedy_from_features(std::span<const double> feature) const override;

 private:
  std::size_t vocab_;
  std::uint64_t seed_;
};

class BernoulliDraft final : public Drafter {
 public:
  BernoulliDraft(const HashTarget& target, double p, std::uint64_t seed);

  std::size_t vocab_size() const override { return target_.vocab_size(); }
  // One-hot on the proposed token.
  void logits(std::span<const Token> context, std::span<double> out) const override;
  Token greedy_next(std::span<const Token> context) const override;

  double p() const noexcept { return p_; }

 private:
  const HashTarget& target_;
  double p_;
  std::uint64_t seed_;
};

// Owns both halves; the draft refers to the target, so the pair is not movable.
struct BernoulliPair {
  BernoulliPair(std::size_t vocab, double p, std::uint64_t seed);
  BernoulliPair(const BernoulliPair&) = delete;
  BernoulliPair& operator=(const BernoulliPair&) = delete;

  HashTarget target;
  BernoulliDraft draft;
};

// Mix of (context length, last four tokens). Context-dependent but O(1).
std::uint64_t context_hash(std::span<const Token> context, std::uint64_t seed);

}  // namespace edgespec::models
