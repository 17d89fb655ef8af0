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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when everything passes).

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "edgespec/cli/cli.hpp"
#include "edgespec/cli/config.hpp"
#include "edgespec/latency.hpp"
#include "edgespec/models/anchored.hpp"
#include "edgespec/models/corpus.hpp"
#include "edgespec/models/synthetic.hpp"
#include "edgespec/models/training.hpp"
#include "edgespec/policy.hpp"
#include "edgespec/protocol/codec.hpp"
#include "edgespec/protocol/round.hpp"
#include "edgespec/protocol/session.hpp"
#include "edgespec/random.hpp"
#include "edgespec/sim/shift.hpp"
#include "edgespec/sim/simulate.hpp"
#include "gradcheck.hpp"
#include "test_support.hpp"

namespace {

using namespace edgespec;
using testing::source_path;

// Tolerances and workload sizes, fixed before any run.
constexpr int kLosslessCases = 1200;
constexpr double kLosslessBudgetS = 60.0;
constexpr int kRollbackHistories = 500;
constexpr double kRollbackBudgetS = 10.0;
constexpr double kLatencyIdentityTol = 1e-12;
constexpr double kSyncTol = 0.10;
constexpr double kAblationNearBest = 0.02;
constexpr double kAblationOverWorst = 0.20;
constexpr double kAblationBudgetS = 30.0;
constexpr int kMonteCarloTrials = 100000;
constexpr std::uint64_t kMonteCarloSeed = 7;
constexpr double kMonteCarloTol = 0.01;
constexpr double kEmaTol = 0.02;
constexpr double kGradTol = 1e-4;
constexpr int kGradPoints = 10;
constexpr double kGradBudgetS = 5.0;
constexpr double kShiftBaselineDrop = 0.30;
constexpr double kShiftBudgetS = 120.0;
constexpr int kCodecMessages = 10000;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(std::log(lo) + rng.uniform() * (std::log(hi) - std::log(lo)));
}

// Anchored targets and drafts shared by the protocol criteria.
struct AnchoredPool {
  models::FamilyConfig family;
  std::vector<std::unique_ptr<models::TargetModel>> targets;
  std::vector<std::unique_ptr<models::DraftModel>> drafts;

  AnchoredPool() {
    for (std::uint64_t fs : {1, 2}) {
      family.seed = fs;
      const models::TargetModel base = models::make_base_target(family);
      targets.push_back(std::make_unique<models::TargetModel>(base));
      targets.push_back(std::make_unique<models::TargetModel>(models::fine_tune(base, 0.5, fs)));
      targets.push_back(std::make_unique<models::TargetModel>(models::fine_tune(base, 2.0, fs + 10)));
      targets.push_back(std::make_unique<models::TargetModel>(models::fine_tune_unconstrained(base, 1.0, fs)));
      drafts.push_back(std::make_unique<models::DraftModel>(models::DraftModel::initialize(base, family, fs + 100)));
      models::TrainingConfig partial;
      partial.steps = 40;
      partial.seed = fs;
      const models::MarkovSource source(family.vocab, fs);
      const models::Corpus corpus = models::generate_corpus(source, 200, 32, fs);
      drafts.push_back(
          std::make_unique<models::DraftModel>(models::train_draft(base, corpus, partial, family).draft));
    }
  }
};

policy::Policy random_policy(Rng& rng) {
  switch (rng.below(3)) {
    case 0:
      return policy::Policy::adaptive();
    case 1:
      return policy::Policy::fixed(1 + static_cast<int>(rng.below(8)));
    default:
      return policy::Policy::cloud_only();
  }
}

void random_channel(sim::ChannelSpec& ch, Rng& rng) {
  if (rng.bernoulli(0.5)) {
    ch.kind = sim::ChannelKind::kConstant;
    ch.rate_bps = log_uniform(rng, 1e3, 1e8);
  } else {
    ch.kind = sim::ChannelKind::kGilbertElliott;
    ch.ge.rate_strong = log_uniform(rng, 1e5, 1e8);
    ch.ge.rate_weak = log_uniform(rng, 1e2, 1e5);
    ch.ge.p_stay_strong = 0.5 + 0.49 * rng.uniform();
    ch.ge.p_stay_weak = 0.5 + 0.49 * rng.uniform();
    ch.ge.seed = rng.next();
    ch.slot_s = 0.05 + rng.uniform();
  }
}

Verdict lossless(const AnchoredPool& pool) {
  Stopwatch sw;
  Rng rng(derive_seed(2024, 1));
  int mismatches = 0;
  std::size_t tokens = 0;
  int anchored_cases = 0;
  for (int c = 0; c < kLosslessCases; ++c) {
    sim::Scenario s;
    s.policy = random_policy(rng);
    random_channel(s.channel, rng);
    s.prompt_length = 1 + rng.below(12);
    s.token_budget = 20 + rng.below(100);
    const std::uint64_t seed = rng.next();
    std::unique_ptr<sim::ModelSet> owned;
    std::unique_ptr<testing::BorrowedModels> borrowed;
    const sim::ModelSet* models = nullptr;
    if (c % 2 == 0) {
      s.model.kind = sim::ModelKind::kBernoulli;
      s.model.bernoulli_p = rng.uniform();
      owned = sim::build_models(s.model, seed);
      models = owned.get();
    } else {
      // Any draft against any target of the same vocabulary, including
      // drafts from another family seed, with greedy or sampled drafting.
      s.model.kind = sim::ModelKind::kAnchored;
      s.model.draft_temperature = std::array{0.0, 0.5, 1.5}[rng.below(3)];
      const auto& t = *pool.targets[rng.below(pool.targets.size())];
      const auto& d = *pool.drafts[rng.below(pool.drafts.size())];
      borrowed = std::make_unique<testing::BorrowedModels>(t, d);
      models = borrowed.get();
      ++anchored_cases;
    }
    const sim::SimulationResult r = sim::simulate(s, *models, seed);
    tokens += r.committed.size();
    if (r.committed != models::greedy_decode(models->target(), r.prompt, r.committed.size())) ++mismatches;
  }
  const double t = sw.seconds();
  return {mismatches == 0 && t < kLosslessBudgetS,
          std::to_string(kLosslessCases) + " cases (" + std::to_string(anchored_cases) + " anchored), " +
              std::to_string(tokens) + " tokens, " + std::to_string(mismatches) + " mismatches, " +
              fmt("%.1f s", t) + " (limit " + fmt("%.0f s", kLosslessBudgetS) + ")"};
}

Verdict rollback(const AnchoredPool& pool) {
  Stopwatch sw;
  Rng rng(derive_seed(2024, 2));
  int bad = 0;
  std::size_t ops = 0;
  const std::size_t vocab = pool.family.vocab;
  for (int h = 0; h < kRollbackHistories; ++h) {
    const models::TargetModel& target = *pool.targets[rng.below(pool.targets.size())];
    TokenSequence oracle(1 + rng.below(10));
    for (Token& t : oracle) t = static_cast<Token>(rng.below(vocab));
    protocol::KvSession session = protocol::KvSession::rebuild(3, target, oracle);
    for (int op = 0; op < 30; ++op, ++ops) {
      if (rng.bernoulli(0.8)) {
        // Block whose first `good` tokens follow the target, the rest random.
        const std::size_t k = 1 + rng.below(8);
        const std::size_t good = rng.below(k + 1);
        protocol::DraftBlockMsg msg{3, oracle.size(), {}};
        TokenSequence ctx = oracle;
        for (std::size_t i = 0; i < k; ++i) {
          const Token t = i < good ? target.greedy_next(ctx) : static_cast<Token>(rng.below(vocab));
          msg.tokens.push_back(t);
          ctx.push_back(t);
        }
        protocol::verify_block(session, msg);
        std::size_t i = 0;
        while (i < k && msg.tokens[i] == target.greedy_next(oracle)) oracle.push_back(msg.tokens[i++]);
        oracle.push_back(target.greedy_next(oracle));
      } else {
        const std::size_t len = rng.below(oracle.size() + 1);
        session.rollback(len);
        oracle.resize(len);
        if (oracle.empty()) {
          oracle.push_back(static_cast<Token>(rng.below(vocab)));
          session.append(oracle.back());
        }
      }
      if (!session.same_state(protocol::KvSession::rebuild(3, target, oracle))) ++bad;
    }
  }
  const double t = sw.seconds();
  return {bad == 0 && t < kRollbackBudgetS, std::to_string(kRollbackHistories) + " histories, " + std::to_string(ops) +
                                                " checked states, " + std::to_string(bad) + " divergent, " +
                                                fmt("%.2f s", t) + " (limit " + fmt("%.0f s", kRollbackBudgetS) + ")"};
}

Verdict latency_identity() {
  Rng rng(derive_seed(2024, 3));
  double worst = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    latency::LatencyParams p;
    p.alpha_edge = log_uniform(rng, 1e-5, 1e-1);
    p.beta = log_uniform(rng, 1e-5, 1e-1);
    p.token_bits = 1.0 + static_cast<double>(rng.below(32));
    p.header_bits = static_cast<double>(rng.below(512));
    p.t_prop = log_uniform(rng, 1e-4, 1.0);
    p.t_base = log_uniform(rng, 1e-4, 1.0);
    p.delta_cloud = log_uniform(rng, 1e-6, 1e-1);
    p.t_down = log_uniform(rng, 1e-4, 1.0);
    const double rate = log_uniform(rng, 1e2, 1e9);
    const latency::FixedMarginal fm = latency::fixed_and_marginal(rate, p);
    for (int k = 1; k <= 64; ++k) {
      const double direct = latency::step_time(k, rate, p).t_total;
      const double regrouped = fm.t_fixed + k * fm.t_marginal;
      worst = std::max(worst, std::abs(direct - regrouped) / std::abs(direct));
    }
  }
  return {worst <= kLatencyIdentityTol, "100 draws x k in [1,64], max relative error " + fmt("%.3g", worst) +
                                            " (limit " + fmt("%.0e", kLatencyIdentityTol) + ")"};
}

Verdict sync_rows() {
  const double bytes = 3.2e9;
  const double rates[] = {10e6, 50e6, 300e6};
  const double reference_min[] = {48.0, 9.5, 1.6};
  bool ok = true;
  std::string detail;
  for (int i = 0; i < 3; ++i) {
    const double minutes = latency::sync_time(bytes, rates[i], 0.89) / 60.0;
    const double rel = std::abs(minutes - reference_min[i]) / reference_min[i];
    ok = ok && rel <= kSyncTol;
    detail += (i ? ", " : "") + fmt("%.0f Mbps ", rates[i] / 1e6) + fmt("%.2f min", minutes) + " vs " +
              fmt("%.1f", reference_min[i]) + fmt(" (%.1f%%)", 100.0 * rel);
  }
  return {ok, "3.2 GB at efficiency 0.89: " + detail + " (limit 10%)"};
}

Verdict landscape() {
  std::vector<double> rates;
  for (int i = 0; i <= 60; ++i) rates.push_back(1e3 * std::pow(10.0, i / 20.0));
  int violations = 0;
  int curves = 0;
  for (double gamma = 0.0; gamma <= 1.0 + 1e-9; gamma += 0.05) {
    for (int k_max : {8, 16, 64}) {
      const sim::Landscape l = sim::optimal_k_landscape(std::min(gamma, 1.0), latency::LatencyParams{}, rates, k_max);
      ++curves;
      for (std::size_t i = 1; i < l.argmax_k.size(); ++i) violations += l.argmax_k[i] < l.argmax_k[i - 1];
    }
  }
  const cli::Config cfg = cli::load_config(source_path("configs/k_landscape.ini"));
  const sim::Landscape doc = sim::optimal_k_landscape(0.5, cfg.scenario.latency, {400.0, 1e7},
                                                      cfg.scenario.policy_config.k_max);
  const bool pair_ok = doc.argmax_k[0] <= 2 && doc.argmax_k[1] >= 5;
  return {violations == 0 && pair_ok, std::to_string(curves) + " curves over 1e3..1e6 bps, " +
                                          std::to_string(violations) +
                                          " monotonicity violations; configs/k_landscape.ini at gamma 0.5: "
                                          "argmax " + std::to_string(doc.argmax_k[0]) + " at 400 bps, " +
                                          std::to_string(doc.argmax_k[1]) + " at 10 Mbps (need <=2, >=5)"};
}

Verdict ablation() {
  Stopwatch sw;
  const cli::Config cfg = cli::load_config(source_path("configs/ge_ablation.ini"));
  const auto rows = sim::sweep_k(cfg.scenario, {1, 3, 5, 7}, true, cfg.seed, 4);
  double best = 0.0, worst = INFINITY;
  std::string detail;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    best = std::max(best, rows[i].metrics.etgr_emitted);
    worst = std::min(worst, rows[i].metrics.etgr_emitted);
    detail += rows[i].policy + "=" + fmt("%.2f", rows[i].metrics.etgr_emitted) + " ";
  }
  const double adaptive = rows.back().metrics.etgr_emitted;
  const double t = sw.seconds();
  const bool ok = adaptive >= (1.0 - kAblationNearBest) * best && adaptive >= (1.0 + kAblationOverWorst) * worst &&
                  t < kAblationBudgetS;
  return {ok, "configs/ge_ablation.ini seed " + std::to_string(cfg.seed) + ": " + detail + "adaptive=" +
                  fmt("%.2f", adaptive) + " tok/s; vs best " + fmt("%+.1f%%", 100.0 * (adaptive / best - 1.0)) +
                  " (need >= -2%), vs worst " + fmt("%+.1f%%", 100.0 * (adaptive / worst - 1.0)) +
                  " (need >= +20%), " + fmt("%.1f s", t) + " (limit " + fmt("%.0f s", kAblationBudgetS) + ")"};
}

Verdict monte_carlo() {
  double worst = 0.0;
  double worst_se = 0.0;
  std::string worst_cell;
  std::uint64_t cell = 0;
  for (double gamma : {0.1, 0.5, 0.8, 0.95}) {
    for (int k : {1, 4, 8}) {
      Rng rng(derive_seed(kMonteCarloSeed, cell++));
      double sum = 0.0, sum_sq = 0.0;
      for (int trial = 0; trial < kMonteCarloTrials; ++trial) {
        int tau = 0;
        while (tau < k && rng.uniform() < gamma) ++tau;
        sum += tau;
        sum_sq += static_cast<double>(tau) * tau;
      }
      const double n = kMonteCarloTrials;
      const double mc = sum / n;
      const double formula = policy::expected_accepted(gamma, k, policy::AcceptanceModel::kGeometric);
      const double rel = std::abs(mc - formula) / formula;
      if (rel > worst) {
        worst = rel;
        // Standard error of the mean, relative to the formula value.
        worst_se = std::sqrt((sum_sq / n - mc * mc) / n) / formula;
        worst_cell = "gamma " + fmt("%g", gamma) + " K " + std::to_string(k);
      }
    }
  }
  return {worst <= kMonteCarloTol, "12 cells x 1e5 trials (seed " + std::to_string(kMonteCarloSeed) +
                                       "), worst relative error " + fmt("%.3f%%", 100.0 * worst) + " at " +
                                       worst_cell + " where one standard error is " + fmt("%.2f%%", 100.0 * worst_se) +
                                       " (limit 1%)"};
}

Verdict ema() {
  bool ok = true;
  std::string detail;
  for (double a : {0.3, 0.7}) {
    double across = 0.0;
    std::string per_seed;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      Rng rng(derive_seed(seed, 8));
      policy::AcceptanceEstimator est(policy::AcceptanceEstimator::kDefaultGamma0, 0.05);
      constexpr int k = 8;
      double tail = 0.0;
      for (int round = 1; round <= 500; ++round) {
        int tau = 0;
        for (int i = 0; i < k; ++i) tau += rng.bernoulli(a);
        est.update(tau, k);
        if (round > 400) tail += est.gamma_hat();
      }
      tail /= 100.0;
      across += tail;
      per_seed += (seed > 1 ? "/" : "") + fmt("%.3f", tail);
    }
    across /= 5.0;
    ok = ok && std::abs(across - a) <= kEmaTol;
    detail += (detail.empty() ? "" : "; ") + std::string("a=") + fmt("%.1f", a) + ": mean " + fmt("%.4f", across) +
              " (seeds " + per_seed + ")";
  }
  return {ok, "mu 0.05, last 100 of 500 rounds, 5 seeds: " + detail + " (limit +-0.02)"};
}

Verdict gradients() {
  Stopwatch sw;
  models::FamilyConfig family;
  const models::TargetModel base = models::make_base_target(family);
  models::DraftModel draft = models::DraftModel::initialize(base, family, 1);
  const models::MarkovSource source(family.vocab, 1);
  const models::Corpus corpus = models::generate_corpus(source, 2, 8, 2);
  const auto examples = models::make_draft_examples(base, draft, corpus.sequences, 8);
  Rng rng(derive_seed(2024, 9));
  double worst = 0.0;
  std::string worst_group;
  for (int point = 0; point < kGradPoints; ++point) {
    models::TrainingConfig cfg;
    cfg.lambda1 = 0.1 + rng.uniform();
    cfg.lambda2 = 0.1 + rng.uniform();
    cfg.temperature = 0.5 + 2.5 * rng.uniform();
    Matrix w_p = Matrix::identity(family.dim);
    testing::randomize(draft.mutable_head(), w_p, rng);
    models::DraftGradients grad;
    models::draft_objective(draft, w_p, examples, cfg, &grad);
    const auto errors = testing::compare_with_central_differences(
        models::parameter_groups(draft.mutable_head(), w_p), models::parameter_groups(grad.head, grad.w_p),
        [&] { return models::draft_objective(draft, w_p, examples, cfg, nullptr); });
    for (const auto& e : errors) {
      if (e.relative_error > worst) {
        worst = e.relative_error;
        worst_group = e.name;
      }
    }
  }
  const double t = sw.seconds();
  return {worst < kGradTol && t < kGradBudgetS,
          std::to_string(kGradPoints) + " points, " + std::to_string(examples.size()) +
              " positions, worst group relative error " + fmt("%.2e", worst) + " (" + worst_group + ", limit 1e-4), " +
              fmt("%.2f s", t) + " (limit " + fmt("%.0f s", kGradBudgetS) + ")"};
}

Verdict shift() {
  Stopwatch sw;
  const sim::ModelSpec spec;
  const sim::ShiftExperiment e = sim::run_shift_experiment(models::FamilyConfig{}, models::TrainingConfig{},
                                                           spec.corpus_sequences, spec.corpus_length,
                                                           sim::ShiftEvalConfig{}, {1, 2, 3});
  bool ok = true;
  std::string detail = "mean anchored/baseline:";
  for (const sim::ShiftRow& r : e.mean) {
    detail += " m=" + fmt("%g", r.magnitude) + " " + fmt("%.3f", r.anchored) + "/" + fmt("%.3f", r.baseline);
    if (r.magnitude > 0.0) ok = ok && r.anchored > r.baseline;
  }
  const auto at = [&](double m) -> double {
    for (const sim::ShiftRow& r : e.mean) {
      if (r.magnitude == m) return r.baseline;
    }
    return NAN;
  };
  const double drop = 1.0 - at(2.0) / at(0.0);
  ok = ok && drop >= kShiftBaselineDrop;
  const double t = sw.seconds();
  ok = ok && t < kShiftBudgetS;
  return {ok, detail + "; baseline drop at m=2 " + fmt("%.1f%%", 100.0 * drop) + " (need >= 30%), " +
                  fmt("%.1f s", t) + " (limit " + fmt("%.0f s", kShiftBudgetS) + ")"};
}

Verdict codec() {
  Rng rng(derive_seed(2024, 11));
  int failures = 0;
  int size_failures = 0;
  const latency::LatencyParams p;
  for (int i = 0; i < kCodecMessages; ++i) {
    protocol::Message m;
    if (rng.bernoulli(0.5)) {
      protocol::DraftBlockMsg d{static_cast<std::uint32_t>(rng.next()), rng.next(), {}};
      d.tokens.resize(rng.below(257));
      for (Token& t : d.tokens) t = static_cast<Token>(rng.below(65536));
      const std::size_t expected =
          static_cast<std::size_t>(p.header_bits / 8.0 + static_cast<double>(d.tokens.size()) * p.token_bits / 8.0);
      size_failures += protocol::encode(d).size() != expected;
      m = d;
    } else {
      m = protocol::VerifyResultMsg{static_cast<std::uint32_t>(rng.next()), rng.next(),
                                    static_cast<std::uint16_t>(rng.below(65536)), static_cast<Token>(rng.below(65536))};
    }
    failures += protocol::decode(protocol::encode(m)) != m;
  }
  return {failures == 0 && size_failures == 0, std::to_string(kCodecMessages) + " random messages, " +
                                                   std::to_string(failures) + " round-trip failures, " +
                                                   std::to_string(size_failures) + " size mismatches"};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict determinism() {
  testing::TempDir dir;
  const std::string config = source_path("configs/default.ini").string();
  int codes = 0;
  for (const char* name : {"a", "b"}) {
    const std::string out = (dir / name).string();
    const char* argv[] = {"edgespec", "run", config.c_str(), "--seed", "1", "--out", out.c_str()};
    std::ostringstream o, e;
    codes += cli::run_cli(7, argv, o, e);
  }
  bool same = codes == 0;
  std::size_t bytes = 0;
  for (const char* f : {"rounds.csv", "summary.json"}) {
    const std::string a = slurp(dir / "a" / f);
    same = same && !a.empty() && a == slurp(dir / "b" / f);
    bytes += a.size();
  }
  return {same, "two runs of configs/default.ini with seed 1: rounds.csv and summary.json " +
                    std::string(same ? "byte-identical" : "differ") + " (" + std::to_string(bytes) + " bytes)"};
}

}  // namespace

int main() {
  const AnchoredPool pool;
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"losslessness", [&] { return lossless(pool); }},
      {"rollback oracle", [&] { return rollback(pool); }},
      {"latency identity", latency_identity},
      {"sync cost rows", sync_rows},
      {"stride landscape", landscape},
      {"stride ablation", ablation},
      {"acceptance formula", monte_carlo},
      {"EMA convergence", ema},
      {"gradient check", gradients},
      {"version shift", shift},
      {"codec", codec},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed;
}
