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

// Cloud-side per-session cache. Entry i holds the committed token at position
// i and the target feature computed over tokens[0..i], the toy analog of the
// KV pairs a transformer keeps. Rollback is truncation.

#include <cstdint>
#include <vector>

#include "edgespec/matrix.hpp"
#include "edgespec/models/lm.hpp"

namespace edgespec::protocol {

struct KvEntry {
  Token token = 0;
  Vector feature;

  friend bool operator==(const KvEntry&, const KvEntry&) = default;
};

class KvSession {
 public:
  KvSession(std::uint32_t session_id, const models::TargetLm& target);

  // Fresh session over `tokens`, each entry computed from scratch.
  static KvSession rebuild(std::uint32_t session_id, const models::TargetLm& target, std::span<const Token> tokens);

  std::uint32_t id() const noexcept { return id_; }
  std::size_t length() const noexcept { return tokens_.size(); }
  const TokenSequence& tokens() const noexcept { return tokens_; }
  const std::vector<KvEntry>& entries() const noexcept { return entries_; }
  const models::TargetLm& target() const noexcept { return *target_; }

  void append(Token token);
  void prefill(std::span<const Token> tokens);
  // Truncates to the first `length` entries. Requires length <= this->length().
  void rollback(std::size_t length);

  // Target's greedy token for the position after the last entry.
  Token next_greedy() const;

  // Same tokens and byte-identical cached features.
  bool same_state(const KvSession& other) const;

 private:
  std::uint32_t id_;
  const models::TargetLm* target_;
  TokenSequence tokens_;
  std::vector<KvEntry> entries_;
};

}  // namespace edgespec::protocol
