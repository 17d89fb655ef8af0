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

// One draft/verify round:
//   edge drafts K tokens -> DraftBlockMsg -> pipe -> cloud verifies greedily,
//   rolls its cache back to the accepted prefix and appends the correction ->
//   VerifyResultMsg -> pipe -> edge commits accepted prefix + correction.

#include <cstdint>
#include <optional>
#include <span>

#include "edgespec/latency.hpp"
#include "edgespec/models/lm.hpp"
#include "edgespec/protocol/codec.hpp"
#include "edgespec/protocol/session.hpp"
#include "edgespec/random.hpp"

namespace edgespec::protocol {

// temperature == 0 drafts greedily; otherwise tokens are sampled from
// softmax(logits / temperature) using `rng`.
TokenSequence draft_block(const models::Drafter& draft, std::span<const Token> context, int k,
                          double temperature = 0.0, Rng* rng = nullptr);

// Greedy block verification against the session's target. Throws
// SessionDesyncError when msg.seq_offset != session.length(). Reads nothing
// but the message and the session.
VerifyResultMsg verify_block(KvSession& session, const DraftBlockMsg& msg);

struct RoundOutcome {
  int k_used = 0;
  int tau = 0;
  TokenSequence emitted;  // accepted prefix + correction, tau + 1 tokens
  std::size_t bytes_up = 0;
  std::size_t bytes_down = 0;
};

class EdgeEndpoint {
 public:
  EdgeEndpoint(std::uint32_t session_id, const models::Drafter& draft, std::span<const Token> prompt,
               double temperature = 0.0, std::uint64_t sampling_seed = 0);

  const TokenSequence& context() const noexcept { return context_; }
  std::uint32_t session_id() const noexcept { return session_id_; }

  DraftBlockMsg propose(int k);
  // Applies a verification result to the local context; returns the emitted tokens.
  TokenSequence commit(const DraftBlockMsg& sent, const VerifyResultMsg& result);

 private:
  std::uint32_t session_id_;
  const models::Drafter* draft_;
  TokenSequence context_;
  double temperature_;
  Rng rng_;
};

class CloudEndpoint {
 public:
  CloudEndpoint(std::uint32_t session_id, const models::TargetLm& target, std::span<const Token> prompt);

  VerifyResultMsg handle(const DraftBlockMsg& msg) { return verify_block(session_, msg); }
  // Rebuilds the session from the edge's committed prefix after a desync.
  void resync(std::span<const Token> committed);
  const KvSession& session() const noexcept { return session_; }

 private:
  KvSession session_;
};

struct RoundResult {
  RoundOutcome outcome;
  latency::StepBreakdown timing;
};

// k >= 1 drafts; k == 0 sends an empty block and receives the cloud's next
// token (the cloud-only baseline). Uplink time uses the encoded message size.
RoundResult run_round(EdgeEndpoint& edge, CloudEndpoint& cloud, int k, double rate_bps,
                      const latency::LatencyParams& params);

// Mean of tau / k over `rounds` rounds per prompt.
double measure_acceptance(const models::Drafter& draft, const models::TargetLm& target,
                          std::span<const TokenSequence> prompts, int k, std::size_t rounds);

}  // namespace edgespec::protocol
