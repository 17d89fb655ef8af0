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

#include "edgespec/sim/shift.hpp"

#include "edgespec/errors.hpp"
#include "edgespec/models/corpus.hpp"
#include "edgespec/protocol/round.hpp"
#include "edgespec/random.hpp"

namespace edgespec::sim {

namespace {

constexpr std::uint64_t kTagSource = 41;
constexpr std::uint64_t kTagCorpus = 42;
constexpr std::uint64_t kTagPrompts = 43;
constexpr std::uint64_t kTagTask = 44;

}  // namespace

std::vector<ShiftRow> version_shift_eval(const models::DraftModel& anchored, const models::GenericDraft& baseline,
                                         const models::TargetModel& base, const std::vector<TokenSequence>& prompts,
                                         std::uint64_t task_seed, const ShiftEvalConfig& cfg) {
  if (cfg.magnitudes.empty()) throw ConfigError("shift evaluation needs at least one magnitude");
  std::vector<ShiftRow> rows;
  for (double m : cfg.magnitudes) {
    if (!(m >= 0.0)) throw ConfigError("fine-tune magnitudes must be >= 0");
    const models::TargetModel adapted = models::fine_tune(base, m, task_seed);
    const models::TargetModel moved = models::fine_tune_unconstrained(base, m, task_seed);
    ShiftRow row;
    row.magnitude = m;
    row.anchored = protocol::measure_acceptance(anchored, adapted, prompts, cfg.k, cfg.rounds);
    row.baseline = protocol::measure_acceptance(baseline, moved, prompts, cfg.k, cfg.rounds);
    row.baseline_same_target = protocol::measure_acceptance(baseline, adapted, prompts, cfg.k, cfg.rounds);
    rows.push_back(row);
  }
  return rows;
}

ShiftExperiment run_shift_experiment(models::FamilyConfig family, models::TrainingConfig train,
                                     std::size_t corpus_sequences, std::size_t corpus_length,
                                     const ShiftEvalConfig& cfg, const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw ConfigError("shift experiment needs at least one seed");
  if (cfg.prompts == 0 || cfg.prompt_length == 0) throw ConfigError("shift evaluation needs prompts");
  ShiftExperiment out;
  for (std::uint64_t seed : seeds) {
    family.seed = seed;
    train.seed = seed;
    const models::TargetModel base = models::make_base_target(family);
    const models::MarkovSource source(family.vocab, derive_seed(seed, kTagSource));
    const models::Corpus corpus =
        models::generate_corpus(source, corpus_sequences, corpus_length, derive_seed(seed, kTagCorpus));
    const models::Corpus held =
        models::generate_corpus(source, cfg.prompts, cfg.prompt_length, derive_seed(seed, kTagPrompts));

    const models::DraftTrainingResult a = models::train_draft(base, corpus, train, family);
    const models::GenericTrainingResult g = models::train_generic_draft(base, corpus, train, family);
    ShiftSeedResult r{seed, a.initial_loss, a.final_loss, g.initial_loss, g.final_loss, {}};
    r.rows = version_shift_eval(a.draft, g.draft, base, held.sequences, derive_seed(seed, kTagTask), cfg);
    out.seeds.push_back(std::move(r));
  }
  out.mean = out.seeds.front().rows;
  for (std::size_t i = 0; i < out.mean.size(); ++i) {
    ShiftRow& m = out.mean[i];
    m.anchored = m.baseline = m.baseline_same_target = 0.0;
    for (const ShiftSeedResult& s : out.seeds) {
      m.anchored += s.rows[i].anchored;
      m.baseline += s.rows[i].baseline;
      m.baseline_same_target += s.rows[i].baseline_same_target;
    }
    const double n = static_cast<double>(out.seeds.size());
    m.anchored /= n;
    m.baseline /= n;
    m.baseline_same_target /= n;
  }
  return out;
}

}  // namespace edgespec::sim
