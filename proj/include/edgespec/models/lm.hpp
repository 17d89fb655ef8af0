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

// The two roles a model can play in a draft/verify session.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace edgespec {

// Token index. The wire format carries u16, which caps the vocabulary at 65536.
using Token = std::uint16_t;
using TokenSequence = std::vector<Token>;

namespace models {

// Index of the largest element; ties go to the lowest index.
std::size_t argmax(std::span<const double> values);

// Cloud-side authoritative model. The per-position feature vector is what the
// KV session caches; the greedy token for the next position is a function of
// the feature of the last committed position only.
class TargetLm {
 public:
  virtual ~TargetLm() = default;

  virtual std::size_t vocab_size() const = 0;
  virtual std::size_t feature_dim() const = 0;

  // Feature of the last position of a non-empty context. Throws DomainError
  // for out-of-vocabulary tokens it reads.
  virtual void features(std::span<const Token> context, std::span<double> out) const = 0;

  virtual Token greedy_from_features(std::span<const double> feature) const = 0;

  Token greedy_next(std::span<const Token> context) const;
};

// Edge-side proposer.
class Drafter {
 public:
  virtual ~Drafter() = default;

  virtual std::size_t vocab_size() const = 0;
  virtual void logits(std::span<const Token> context, std::span<double> out) const = 0;

  virtual Token greedy_next(std::span<const Token> context) const;
};

// Plain greedy decoding of the target alone; the reference every speculative
// run has to reproduce token for token.
TokenSequence greedy_decode(const TargetLm& target, std::span<const Token> prompt, std::size_t count);

// Lets a target stand in as its own drafter (acceptance is then 1).
class TargetAsDrafter final : public Drafter {
 public:
  explicit TargetAsDrafter(const TargetLm& target) : target_(target) {}

  std::size_t vocab_size() const override { return target_.vocab_size(); }
  void logits(std::span<const Token> context, std::span<double> out) const override;
  Token greedy_next(std::span<const Token> context) const override { return target_.greedy_next(context); }

 private:
  const TargetLm& target_;
};

}  // namespace models
}  // namespace edgespec
