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

#include "edgespec/protocol/round.hpp"

#include <cmath>

#include "edgespec/errors.hpp"

namespace edgespec::protocol {

namespace {

Token sample_token(std::span<const double> logits, double temperature, Rng& rng) {
  double top = -INFINITY;
  for (double v : logits) top = std::max(top, v / temperature);
  Vector w(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) sum += w[i] = std::exp(logits[i] / temperature - top);
  double u = rng.uniform() * sum;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (u < w[i]) return static_cast<Token>(i);
    u -= w[i];
  }
  return static_cast<Token>(w.size() - 1);
}

}  // namespace

TokenSequence draft_block(const models::Drafter& draft, std::span<const Token> context, int k, double temperature,
                          Rng* rng) {
  if (k < 1) throw ContractViolation("draft_block: k must be >= 1");
  if (temperature > 0.0 && rng == nullptr) throw ContractViolation("draft_block: sampling needs an rng");
  TokenSequence ctx(context.begin(), context.end());
  Vector logits(draft.vocab_size());
  for (int i = 0; i < k; ++i) {
    Token t;
    if (temperature > 0.0) {
      draft.logits(ctx, logits);
      t = sample_token(logits, temperature, *rng);
    } else {
      t = draft.greedy_next(ctx);
    }
    ctx.push_back(t);
  }
  return TokenSequence(ctx.end() - k, ctx.end());
}

VerifyResultMsg verify_block(KvSession& session, const DraftBlockMsg& msg) {
  if (msg.session_id != session.id()) throw SessionDesyncError("draft block addressed to another session");
  if (msg.seq_offset != session.length()) {
    throw SessionDesyncError("draft block offset " + std::to_string(msg.seq_offset) + " but session holds " +
                             std::to_string(session.length()) + " tokens");
  }
  const std::size_t base = session.length();
  const std::size_t k = msg.tokens.size();
  // Score the whole block in one pass, as the cloud would in a batched
  // forward: expected[i] is the target's choice after draft[0..i).
  std::vector<Token> expected;
  expected.reserve(k + 1);
  expected.push_back(session.next_greedy());
  for (std::size_t i = 0; i < k; ++i) {
    session.append(msg.tokens[i]);
    expected.push_back(session.next_greedy());
  }
  std::size_t tau = 0;
  while (tau < k && msg.tokens[tau] == expected[tau]) ++tau;
  session.rollback(base + tau);
  session.append(expected[tau]);
  return {msg.session_id, msg.seq_offset, static_cast<std::uint16_t>(tau), expected[tau]};
}

EdgeEndpoint::EdgeEndpoint(std::uint32_t session_id, const models::Drafter& draft, std::span<const Token> prompt,
                           double temperature, std::uint64_t sampling_seed)
    : session_id_(session_id),
      draft_(&draft),
      context_(prompt.begin(), prompt.end()),
      temperature_(temperature),
      rng_(sampling_seed) {
  if (context_.empty()) throw ContractViolation("prompt must be non-empty");
  if (temperature < 0.0) throw ConfigError("draft temperature must be >= 0");
}

DraftBlockMsg EdgeEndpoint::propose(int k) {
  DraftBlockMsg msg{session_id_, context_.size(), {}};
  if (k > 0) msg.tokens = draft_block(*draft_, context_, k, temperature_, &rng_);
  return msg;
}

TokenSequence EdgeEndpoint::commit(const DraftBlockMsg& sent, const VerifyResultMsg& result) {
  if (result.session_id != sent.session_id || result.seq_offset != sent.seq_offset ||
      sent.seq_offset != context_.size()) {
    throw SessionDesyncError("verification result does not answer the outstanding block");
  }
  if (result.accepted > sent.tokens.size()) throw ContractViolation("accepted count exceeds drafted count");
  TokenSequence emitted(sent.tokens.begin(), sent.tokens.begin() + result.accepted);
  emitted.push_back(result.correction);
  context_.insert(context_.end(), emitted.begin(), emitted.end());
  return emitted;
}

CloudEndpoint::CloudEndpoint(std::uint32_t session_id, const models::TargetLm& target, std::span<const Token> prompt)
    : session_(KvSession::rebuild(session_id, target, prompt)) {
  if (prompt.empty()) throw ContractViolation("prompt must be non-empty");
}

void CloudEndpoint::resync(std::span<const Token> committed) {
  session_ = KvSession::rebuild(session_.id(), session_.target(), committed);
}

RoundResult run_round(EdgeEndpoint& edge, CloudEndpoint& cloud, int k, double rate_bps,
                      const latency::LatencyParams& params) {
  if (k < 0) throw ContractViolation("run_round: k must be >= 0");
  Pipe uplink;
  Pipe downlink;

  const DraftBlockMsg block = edge.propose(k);
  const std::string up_bytes = encode(block);
  uplink.send(up_bytes);

  const auto received = uplink.receive();
  if (!received) throw CodecError("uplink frame incomplete");
  const VerifyResultMsg verdict = cloud.handle(decode_draft_block(*received));
  const std::string down_bytes = encode(verdict);
  downlink.send(down_bytes);

  const auto answer = downlink.receive();
  if (!answer) throw CodecError("downlink frame incomplete");
  RoundResult r;
  r.outcome.k_used = k;
  r.outcome.emitted = edge.commit(block, decode_verify_result(*answer));
  r.outcome.tau = static_cast<int>(r.outcome.emitted.size()) - 1;
  r.outcome.bytes_up = up_bytes.size();
  r.outcome.bytes_down = down_bytes.size();

  const double t_edge = k == 0 ? 0.0 : latency::edge_time(k, params);
  const double t_up = latency::uplink_time_bits(8.0 * static_cast<double>(up_bytes.size()), rate_bps, params);
  r.timing = latency::make_breakdown(t_edge, t_up, latency::cloud_time(k, params), params.t_down);
  return r;
}

double measure_acceptance(const models::Drafter& draft, const models::TargetLm& target,
                          std::span<const TokenSequence> prompts, int k, std::size_t rounds) {
  if (k < 1 || rounds == 0 || prompts.empty()) throw ContractViolation("measure_acceptance: empty workload");
  if (draft.vocab_size() != target.vocab_size()) throw ContractViolation("measure_acceptance: vocabularies differ");
  double sum = 0.0;
  for (const TokenSequence& prompt : prompts) {
    EdgeEndpoint edge(0, draft, prompt);
    CloudEndpoint cloud(0, target, prompt);
    for (std::size_t r = 0; r < rounds; ++r) {
      const DraftBlockMsg block = edge.propose(k);
      const VerifyResultMsg verdict = cloud.handle(block);
      edge.commit(block, verdict);
      sum += static_cast<double>(verdict.accepted) / k;
    }
  }
  return sum / static_cast<double>(prompts.size() * rounds);
}

}  // namespace edgespec::protocol
