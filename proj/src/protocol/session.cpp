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

#include "edgespec/protocol/session.hpp"

#include <cstring>

#include "edgespec/errors.hpp"

namespace edgespec::protocol {

KvSession::KvSession(std::uint32_t session_id, const models::TargetLm& target) : id_(session_id), target_(&target) {}

KvSession KvSession::rebuild(std::uint32_t session_id, const models::TargetLm& target, std::span<const Token> tokens) {
  KvSession s(session_id, target);
  s.prefill(tokens);
  return s;
}

void KvSession::append(Token token) {
  tokens_.push_back(token);
  KvEntry entry{token, Vector(target_->feature_dim())};
  try {
    target_->features(tokens_, entry.feature);
  } catch (...) {
    tokens_.pop_back();
    throw;
  }
  entries_.push_back(std::move(entry));
}

void KvSession::prefill(std::span<const Token> tokens) {
  for (Token t : tokens) append(t);
}

void KvSession::rollback(std::size_t length) {
  if (length > tokens_.size()) throw ContractViolation("rollback: length exceeds session length");
  tokens_.resize(length);
  entries_.resize(length);
}

Token KvSession::next_greedy() const {
  if (entries_.empty()) throw ContractViolation("next_greedy: session is empty");
  return target_->greedy_from_features(entries_.back().feature);
}

bool KvSession::same_state(const KvSession& other) const {
  if (tokens_ != other.tokens_ || entries_.size() != other.entries_.size()) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Vector& a = entries_[i].feature;
    const Vector& b = other.entries_[i].feature;
    if (entries_[i].token != other.entries_[i].token || a.size() != b.size()) return false;
    if (!a.empty() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) != 0) return false;
  }
  return true;
}

}  // namespace edgespec::protocol
