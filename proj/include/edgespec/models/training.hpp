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

// One-time draft-head training against the version-0 target.
//
//   J = lambda1 * mean ||W_p h_d - h_t||^2
//     + lambda2 * mean T^2 KL(softmax(z_t / T) || softmax(z_d / T))
//
// Only the head (W1, b1, W2, b2) and the training-time projection W_p move.
// The anchor block, vocabulary projection and proxy embedding are held by
// const pointer and are never touched.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "edgespec/matrix.hpp"
#include "edgespec/models/anchored.hpp"
#include "edgespec/models/corpus.hpp"

namespace edgespec::models {

struct TrainingConfig {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double temperature = 2.0;
  double lr = 0.05;
  std::size_t steps = 2000;
  std::size_t batch = 8;     // sequences per step
  std::size_t seq_len = 32;  // positions used per sequence
  std::uint64_t seed = 7;

  void validate() const;
};

// Feature-alignment loss over a batch of (h_d, h_t) pairs.
double loss_feat(std::span<const Vector> h_d, std::span<const Vector> h_t, const Matrix& w_p);

// T^2 KL(softmax(z_t/T) || softmax(z_d/T)) for one pair; teacher first.
double loss_kd(std::span<const double> z_t, std::span<const double> z_d, double temperature);
// Batch mean of the above.
double loss_kd(std::span<const Vector> z_t, std::span<const Vector> z_d, double temperature);

// Numerically stable softmax(z / temperature).
Vector softmax(std::span<const double> z, double temperature = 1.0);

// One training position for the anchored draft. The anchor output depends only
// on the frozen proxy and anchor, so it is computed once per position.
struct DraftExample {
  Vector anchor_out;
  Vector h_t;
  Vector z_t;
};

// One training position for the generic baseline.
struct GenericExample {
  Vector proxy_features;
  Vector z_t;
};

struct DraftGradients {
  DraftHead head;
  Matrix w_p;
};

// Trainable tensors in checkpoint order. Used by the optimizer, the
// finite-difference checks and the checkpoint writer alike.
std::vector<std::pair<std::string, std::span<double>>> parameter_groups(DraftHead& head, Matrix& w_p);
std::vector<std::pair<std::string, std::span<double>>> parameter_groups(GenericHead& head);

// Objective value; fills `grad` (shaped like the parameters) when non-null.
double draft_objective(const DraftModel& draft, const Matrix& w_p, std::span<const DraftExample> batch,
                       const TrainingConfig& cfg, DraftGradients* grad);

// KD-only objective for the baseline (lambda2 * T^2 KL).
double generic_objective(const GenericDraft& draft, std::span<const GenericExample> batch,
                         const TrainingConfig& cfg, GenericHead* grad);

std::vector<DraftExample> make_draft_examples(const TargetModel& target, const DraftModel& draft,
                                              std::span<const TokenSequence> sequences, std::size_t seq_len);
std::vector<GenericExample> make_generic_examples(const TargetModel& target, const GenericDraft& draft,
                                                  std::span<const TokenSequence> sequences, std::size_t seq_len);

struct DraftTrainingResult {
  DraftModel draft;
  Matrix w_p;
  double initial_loss;  // on a fixed monitor batch
  double final_loss;
  std::vector<std::pair<std::size_t, double>> history;  // (step, monitor loss)
};

struct GenericTrainingResult {
  GenericDraft draft;
  double initial_loss;
  double final_loss;
};

// Requires base.version_id() == 0. Throws TrainingError on a non-finite loss.
DraftTrainingResult train_draft(const TargetModel& base, const Corpus& corpus, const TrainingConfig& cfg,
                                const FamilyConfig& family);

GenericTrainingResult train_generic_draft(const TargetModel& base, const Corpus& corpus, const TrainingConfig& cfg,
                                          const FamilyConfig& family);

}  // namespace edgespec::models
