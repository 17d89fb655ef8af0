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

#include <gtest/gtest.h>

#include "edgespec/errors.hpp"
#include "edgespec/models/anchored.hpp"
#include "edgespec/models/synthetic.hpp"
#include "edgespec/protocol/codec.hpp"
#include "edgespec/protocol/round.hpp"

namespace edgespec::protocol {
namespace {

class RoundTest : public ::testing::Test {
 protected:
  models::FamilyConfig family;
  models::TargetModel target = models::make_base_target(family);
};

TEST_F(RoundTest, VerifyAcceptsPrefixAndCorrects) {
  const TokenSequence ctx{3, 1, 4};
  const TokenSequence greedy = models::greedy_decode(target, ctx, 3);
  const Token wrong = static_cast<Token>((greedy[2] + 1) % family.vocab);
  KvSession s = KvSession::rebuild(9, target, ctx);
  const VerifyResultMsg r = verify_block(s, DraftBlockMsg{9, 3, {greedy[0], greedy[1], wrong}});
  EXPECT_EQ(r.accepted, 2);
  EXPECT_EQ(r.correction, greedy[2]);
  EXPECT_EQ(r.session_id, 9u);
  EXPECT_EQ(r.seq_offset, 3u);
  TokenSequence expected = ctx;
  expected.insert(expected.end(), greedy.begin(), greedy.end());
  EXPECT_TRUE(s.same_state(KvSession::rebuild(9, target, expected)));
}

TEST_F(RoundTest, VerifyAllAcceptedAppendsBonus) {
  const TokenSequence ctx{7, 7};
  const TokenSequence greedy = models::greedy_decode(target, ctx, 4);
  KvSession s = KvSession::rebuild(1, target, ctx);
  const VerifyResultMsg r = verify_block(s, DraftBlockMsg{1, 2, {greedy[0], greedy[1], greedy[2]}});
  EXPECT_EQ(r.accepted, 3);
  EXPECT_EQ(r.correction, greedy[3]);
  EXPECT_EQ(s.length(), 6u);
}

TEST_F(RoundTest, VerifyFirstTokenWrong) {
  const TokenSequence ctx{2, 5};
  const Token g = target.greedy_next(ctx);
  KvSession s = KvSession::rebuild(1, target, ctx);
  const VerifyResultMsg r = verify_block(s, DraftBlockMsg{1, 2, {static_cast<Token>((g + 1) % family.vocab), g}});
  EXPECT_EQ(r.accepted, 0);
  EXPECT_EQ(r.correction, g);
  EXPECT_EQ(s.tokens(), (TokenSequence{2, 5, g}));
}

TEST_F(RoundTest, DesyncAndForeignSessionRejected) {
  KvSession s = KvSession::rebuild(1, target, TokenSequence{1, 2, 3});
  EXPECT_THROW(verify_block(s, DraftBlockMsg{1, 2, {1}}), SessionDesyncError);
  EXPECT_THROW(verify_block(s, DraftBlockMsg{2, 3, {1}}), SessionDesyncError);
  EXPECT_EQ(s.length(), 3u);
}

TEST_F(RoundTest, CloudOnlyRound) {
  const TokenSequence prompt{1, 2};
  models::DraftModel draft = models::DraftModel::initialize(target, family, 1);
  EdgeEndpoint edge(1, draft, prompt);
  CloudEndpoint cloud(1, target, prompt);
  latency::LatencyParams p;
  const RoundResult r = run_round(edge, cloud, 0, 1e6, p);
  EXPECT_EQ(r.outcome.tau, 0);
  EXPECT_EQ(r.outcome.emitted, (TokenSequence{target.greedy_next(prompt)}));
  EXPECT_EQ(r.outcome.bytes_up, kDraftBlockHeaderBytes);
  EXPECT_EQ(r.outcome.bytes_down, kVerifyResultBytes);
  EXPECT_EQ(r.timing.t_edge, 0.0);
  EXPECT_DOUBLE_EQ(r.timing.t_up, p.t_prop + 120.0 / 1e6);
}

TEST_F(RoundTest, UplinkUsesEncodedSize) {
  models::BernoulliPair pair(64, 1.0, 3);
  const TokenSequence prompt{1};
  EdgeEndpoint edge(1, pair.draft, prompt);
  CloudEndpoint cloud(1, pair.target, prompt);
  latency::LatencyParams p;
  const RoundResult r = run_round(edge, cloud, 5, 1e5, p);
  EXPECT_EQ(r.outcome.bytes_up, 25u);
  EXPECT_EQ(r.outcome.tau, 5);
  EXPECT_DOUBLE_EQ(r.timing.t_up, p.t_prop + 200.0 / 1e5);
  EXPECT_EQ(r.timing.t_total, ((r.timing.t_edge + r.timing.t_up) + r.timing.t_cloud) + r.timing.t_down);
}

TEST_F(RoundTest, LosslessOverManyRounds) {
  models::DraftModel draft = models::DraftModel::initialize(target, family, 2);
  const TokenSequence prompt{5, 6, 7};
  EdgeEndpoint edge(1, draft, prompt, 0.8, 4);
  CloudEndpoint cloud(1, target, prompt);
  latency::LatencyParams p;
  TokenSequence emitted;
  for (int round = 0; round < 200; ++round) {
    const RoundResult r = run_round(edge, cloud, 1 + round % 6, 1e6, p);
    ASSERT_EQ(r.outcome.emitted.size(), static_cast<std::size_t>(r.outcome.tau) + 1);
    emitted.insert(emitted.end(), r.outcome.emitted.begin(), r.outcome.emitted.end());
  }
  EXPECT_EQ(emitted, models::greedy_decode(target, prompt, emitted.size()));
  TokenSequence full = prompt;
  full.insert(full.end(), emitted.begin(), emitted.end());
  EXPECT_EQ(edge.context(), full);
  EXPECT_TRUE(cloud.session().same_state(KvSession::rebuild(1, target, full)));
}

TEST_F(RoundTest, ResyncRecoversFromDesync) {
  models::BernoulliPair pair(64, 0.5, 3);
  const TokenSequence prompt{1, 2};
  EdgeEndpoint edge(1, pair.draft, prompt);
  CloudEndpoint cloud(1, pair.target, TokenSequence{1});
  EXPECT_THROW(cloud.handle(edge.propose(2)), SessionDesyncError);
  cloud.resync(edge.context());
  const DraftBlockMsg m = edge.propose(3);
  edge.commit(m, cloud.handle(m));
  EXPECT_EQ(cloud.session().tokens(), edge.context());
}

TEST_F(RoundTest, GreedyDraftBlockFollowsDraft) {
  models::DraftModel draft = models::DraftModel::initialize(target, family, 2);
  const TokenSequence ctx{9, 9, 9};
  const TokenSequence block = draft_block(draft, ctx, 4);
  ASSERT_EQ(block.size(), 4u);
  TokenSequence c = ctx;
  for (Token t : block) {
    EXPECT_EQ(t, draft.greedy_next(c));
    c.push_back(t);
  }
  EXPECT_THROW(draft_block(draft, ctx, 2, 1.0, nullptr), ContractViolation);
}

TEST(MeasureAcceptance, MatchesBernoulliRate) {
  models::BernoulliPair pair(64, 0.3, 8);
  std::vector<TokenSequence> prompts;
  for (Token i = 0; i < 200; ++i) prompts.push_back({static_cast<Token>(i % 64), static_cast<Token>(i % 7)});
  EXPECT_NEAR(measure_acceptance(pair.draft, pair.target, prompts, 1, 20), 0.3, 0.03);
}

}  // namespace
}  // namespace edgespec::protocol
