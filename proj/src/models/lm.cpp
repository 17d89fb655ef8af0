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

#include "edgespec/models/lm.hpp"

#include <algorithm>

#include "edgespec/errors.hpp"

namespace edgespec::models {

std::size_t argmax(std::span<const double> values) {
  if (values.empty()) throw ContractViolation("argmax of empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

Token TargetLm::greedy_next(std::span<const Token> context) const {
  std::vector<double> h(feature_dim());
  features(context, h);
  return greedy_from_features(h);
}

Token Drafter::greedy_next(std::span<const Token> context) const {
  std::vector<double> z(vocab_size());
  logits(context, z);
  return static_cast<Token>(argmax(z));
}

TokenSequence greedy_decode(const TargetLm& target, std::span<const Token> prompt, std::size_t count) {
  if (prompt.empty()) throw ContractViolation("greedy_decode: prompt must be non-empty");
  TokenSequence context(prompt.begin(), prompt.end());
  context.reserve(prompt.size() + count);
  for (std::size_t i = 0; i < count; ++i) context.push_back(target.greedy_next(context));
  return TokenSequence(context.begin() + static_cast<std::ptrdiff_t>(prompt.size()), context.end());
}

void TargetAsDrafter::logits(std::span<const Token> context, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  out[target_.greedy_next(context)] = 1.0;
}

}  // namespace edgespec::models
