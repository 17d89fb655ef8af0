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

// Desk-scale anchored model family.
//
//   target (version s):  h_t = tanh(W_a (phi + A_s phi) + b_a),  z_t = W_v h_t
//   anchored draft:      x   = tanh(W_a phi_d + b_a)
//                        h_d = W2 tanh(W1 x + b1) + b2,          z_d = W_v h_d
//   generic draft:       z_g = V2 tanh(V1 phi_d + c1) + c2
//
// phi is a seeded hashed n-gram embedding over the last 4 tokens; phi_d is the
// same embedding truncated to the last 2 tokens, so the draft is a strictly
// weaker view of the context. The anchor block (W_a, b_a) and vocabulary
// projection W_v are frozen and shared by pointer; fine-tuning a target only
// moves its adapter A_s.

#include <cstdint>
#include <memory>
#include <vector>

#include "edgespec/matrix.hpp"
#include "edgespec/models/lm.hpp"
#include "edgespec/random.hpp"

namespace edgespec::models {

struct FamilyConfig {
  std::size_t vocab = 64;
  std::size_t dim = 16;
  std::size_t hidden = 32;
  std::size_t buckets = 1024;
  std::size_t target_window = 4;
  std::size_t draft_window = 2;
  // Scale of the order-g table entries, g = 1..target_window.
  std::vector<double> order_scales{1.0, 0.7, 0.3, 0.2};
  double anchor_gain = 1.0;
  double anchor_bias_scale = 1.0;
  double lm_head_scale = 2.0;
  std::uint64_t seed = 1;

  void validate() const;
};

// Sum over n-gram orders g = 1..window of table_g[hash(last g tokens)].
class NgramEmbedding {
 public:
  NgramEmbedding(std::size_t dim, std::size_t buckets, std::uint32_t salt, std::vector<Matrix> tables);

  static NgramEmbedding random(const FamilyConfig& cfg, std::uint32_t salt, Rng& rng);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t buckets() const noexcept { return buckets_; }
  std::size_t window() const noexcept { return tables_.size(); }
  std::uint32_t salt() const noexcept { return salt_; }
  const std::vector<Matrix>& tables() const noexcept { return tables_; }

  // Same tables for the lowest `window` orders.
  NgramEmbedding truncated(std::size_t window) const;

  std::size_t bucket(std::size_t order, std::span<const Token> last_tokens) const;
  void features(std::span<const Token> context, std::span<double> out) const;

  friend bool operator==(const NgramEmbedding&, const NgramEmbedding&) = default;

 private:
  std::size_t dim_;
  std::size_t buckets_;
  std::uint32_t salt_;
  std::vector<Matrix> tables_;
};

struct AnchorBlock {
  Matrix weight;  // d x d
  Vector bias;    // d

  // out = tanh(weight * in + bias)
  void apply(std::span<const double> in, std::span<double> out) const;

  friend bool operator==(const AnchorBlock&, const AnchorBlock&) = default;
};

struct BackboneVersion {
  std::uint32_t version_id = 0;
  std::shared_ptr<const NgramEmbedding> basis;
  Matrix adapter;  // d x d, zero at version 0
  std::uint64_t param_count = 0;
};

struct TargetForward {
  Vector features;  // h_t
  Vector logits;    // z_t
};

class TargetModel final : public TargetLm {
 public:
  TargetModel(BackboneVersion backbone, std::shared_ptr<const AnchorBlock> anchor,
              std::shared_ptr<const Matrix> lm_head);

  std::size_t vocab_size() const override { return lm_head_->rows(); }
  std::size_t feature_dim() const override { return lm_head_->cols(); }
  void features(std::span<const Token> context, std::span<double> out) const override;
  Token greedy_from_features(std::span<const double> feature) const override;

  TargetForward forward(std::span<const Token> context) const;

  const BackboneVersion& backbone() const noexcept { return backbone_; }
  const std::shared_ptr<const AnchorBlock>& anchor() const noexcept { return anchor_; }
  const std::shared_ptr<const Matrix>& lm_head() const noexcept { return lm_head_; }
  std::uint32_t version_id() const noexcept { return backbone_.version_id; }

 private:
  BackboneVersion backbone_;
  std::shared_ptr<const AnchorBlock> anchor_;
  std::shared_ptr<const Matrix> lm_head_;
};

// Version 0 of the family: zero adapter, seeded embedding, anchor and head.
TargetModel make_base_target(const FamilyConfig& cfg);

// Adapter-only update: adapter += magnitude * R / ||R||_2 with R a seeded
// Gaussian d x d matrix. Anchor and vocabulary projection are shared with the
// input, bit for bit. Version id increments.
TargetModel fine_tune(const TargetModel& model, double magnitude, std::uint64_t task_seed);

// Update without the backbone-freezing constraint, standing in for full
// fine-tuning of a conventional deployment: the same adapter step as
// fine_tune, plus anchor weight and vocabulary projection each moved by
// magnitude * (own spectral norm) * R' / ||R'||_2.
TargetModel fine_tune_unconstrained(const TargetModel& model, double magnitude, std::uint64_t task_seed);

double spectral_norm(const Matrix& m);

struct DraftHead {
  Matrix w1;  // hidden x d
  Vector b1;  // hidden
  Matrix w2;  // d x hidden
  Vector b2;  // d

  friend bool operator==(const DraftHead&, const DraftHead&) = default;
};

struct DraftForward {
  Vector anchor_out;  // frozen anchor applied to the proxy features
  Vector hidden;      // tanh(W1 x + b1)
  Vector h_d;         // head output, fed to the shared vocabulary projection
  Vector logits;
};

class DraftModel final : public Drafter {
 public:
  DraftModel(std::shared_ptr<const NgramEmbedding> proxy, std::shared_ptr<const AnchorBlock> anchor,
             std::shared_ptr<const Matrix> lm_head, DraftHead head);

  // Copies the anchor from `base` and draws a random head.
  static DraftModel initialize(const TargetModel& base, const FamilyConfig& cfg, std::uint64_t seed);

  std::size_t vocab_size() const override { return lm_head_->rows(); }
  void logits(std::span<const Token> context, std::span<double> out) const override;

  DraftForward forward(std::span<const Token> context) const;
  // Draft pipeline from precomputed anchor output.
  void head_forward(std::span<const double> anchor_out, DraftForward& out) const;

  const NgramEmbedding& proxy() const noexcept { return *proxy_; }
  const std::shared_ptr<const NgramEmbedding>& proxy_ptr() const noexcept { return proxy_; }
  const std::shared_ptr<const AnchorBlock>& anchor() const noexcept { return anchor_; }
  const std::shared_ptr<const Matrix>& lm_head() const noexcept { return lm_head_; }
  const DraftHead& head() const noexcept { return head_; }
  DraftHead& mutable_head() noexcept { return head_; }
  std::uint64_t param_count() const noexcept;

 private:
  std::shared_ptr<const NgramEmbedding> proxy_;
  std::shared_ptr<const AnchorBlock> anchor_;
  std::shared_ptr<const Matrix> lm_head_;
  DraftHead head_;
};

struct GenericHead {
  Matrix w1;  // hidden x d
  Vector b1;  // hidden
  Matrix w2;  // vocab x hidden
  Vector b2;  // vocab

  friend bool operator==(const GenericHead&, const GenericHead&) = default;
};

// Non-anchored baseline: a self-contained two-layer network on the proxy
// features with its own vocabulary projection. Shares nothing with the target.
class GenericDraft final : public Drafter {
 public:
  GenericDraft(std::shared_ptr<const NgramEmbedding> proxy, GenericHead head);

  static GenericDraft initialize(const TargetModel& base, const FamilyConfig& cfg, std::uint64_t seed);

  std::size_t vocab_size() const override { return head_.w2.rows(); }
  void logits(std::span<const Token> context, std::span<double> out) const override;

  const NgramEmbedding& proxy() const noexcept { return *proxy_; }
  const GenericHead& head() const noexcept { return head_; }
  GenericHead& mutable_head() noexcept { return head_; }

 private:
  std::shared_ptr<const NgramEmbedding> proxy_;
  GenericHead head_;
};

}  // namespace edgespec::models
