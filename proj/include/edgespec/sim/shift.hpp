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

// Acceptance of a static draft against evolving target versions.
//
// The anchored draft is measured against adapter-only fine-tunes, which is the
// deployment the anchored design permits. The non-anchored baseline is
// measured against unconstrained fine-tunes (anchor and vocabulary projection
// move too), the deployment it has to live with. A control column measures
// the baseline against the adapter-only versions as well.

#include <cstdint>
#include <vector>

#include "edgespec/models/anchored.hpp"
#include "edgespec/models/training.hpp"

namespace edgespec::sim {

struct ShiftEvalConfig {
  std::vector<double> magnitudes{0.0, 0.5, 1.0, 2.0};
  std::size_t prompts = 1000;
  std::size_t prompt_length = 8;
  int k = 1;
  std::size_t rounds = 4;  // per prompt
};

struct ShiftRow {
  double magnitude = 0.0;
  double anchored = 0.0;
  double baseline = 0.0;
  double baseline_same_target = 0.0;
};

std::vector<ShiftRow> version_shift_eval(const models::DraftModel& anchored, const models::GenericDraft& baseline,
                                         const models::TargetModel& base, const std::vector<TokenSequence>& prompts,
                                         std::uint64_t task_seed, const ShiftEvalConfig& cfg);

struct ShiftSeedResult {
  std::uint64_t seed = 0;
  double anchored_initial_loss = 0.0;
  double anchored_final_loss = 0.0;
  double baseline_initial_loss = 0.0;
  double baseline_final_loss = 0.0;
  std::vector<ShiftRow> rows;
};

struct ShiftExperiment {
  std::vector<ShiftSeedResult> seeds;
  std::vector<ShiftRow> mean;  // across seeds
};

// Per seed: base target, corpus, both drafts trained, held-out prompts drawn
// from the same source, then version_shift_eval.
ShiftExperiment run_shift_experiment(models::FamilyConfig family, models::TrainingConfig train,
                                     std::size_t corpus_sequences, std::size_t corpus_length,
                                     const ShiftEvalConfig& cfg, const std::vector<std::uint64_t>& seeds);

}  // namespace edgespec::sim
