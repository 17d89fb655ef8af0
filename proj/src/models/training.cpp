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

#include "edgespec/models/training.hpp"

#include <algorithm>
#include <cmath>

#include "edgespec/errors.hpp"

namespace edgespec::models {

namespace {

constexpr std::uint64_t kTagDraftInit = 1;
constexpr std::uint64_t kTagGenericInit = 2;
constexpr std::uint64_t kTagDraftBatches = 3;
constexpr std::uint64_t kTagGenericBatches = 4;
constexpr std::uint64_t kTagMonitor = 5;
constexpr std::size_t kHistoryEvery = 100;

Vector log_softmax(std::span<const double> z, double temperature) {
  double top = -INFINITY;
  for (double v : z) top = std::max(top, v / temperature);
  double sum = 0.0;
  for (double v : z) sum += std::exp(v / temperature - top);
  const double log_sum = std::log(sum) + top;
  Vector out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] / temperature - log_sum;
  return out;
}

// KL(p || q) from log-probabilities.
double kl_from_logs(const Vector& log_p, const Vector& log_q) {
  double kl = 0.0;
  for (std::size_t i = 0; i < log_p.size(); ++i) kl += std::exp(log_p[i]) * (log_p[i] - log_q[i]);
  return kl;
}

void check_finite(std::span<const double> z) {
  for (double v : z) {
    if (!std::isfinite(v)) throw DomainError("loss_kd: non-finite logit");
  }
}

DraftHead zeros_like(const DraftHead& h) {
  return {Matrix(h.w1.rows(), h.w1.cols()), Vector(h.b1.size(), 0.0), Matrix(h.w2.rows(), h.w2.cols()),
          Vector(h.b2.size(), 0.0)};
}

GenericHead zeros_like(const GenericHead& h) {
  return {Matrix(h.w1.rows(), h.w1.cols()), Vector(h.b1.size(), 0.0), Matrix(h.w2.rows(), h.w2.cols()),
          Vector(h.b2.size(), 0.0)};
}

std::vector<TokenSequence> pick(const Corpus& corpus, std::size_t count, Rng& rng) {
  std::vector<TokenSequence> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(corpus.sequences[rng.below(corpus.sequences.size())]);
  return out;
}

void descend(std::vector<std::pair<std::string, std::span<double>>> params,
             std::vector<std::pair<std::string, std::span<double>>> grads, double lr) {
  for (std::size_t g = 0; g < params.size(); ++g) kernels::axpy(-lr, grads[g].second, params[g].second);
}

void check_corpus(const Corpus& corpus, const TrainingConfig& cfg) {
  cfg.validate();
  if (corpus.sequences.empty()) throw ConfigError("training corpus is empty");
}

}  // namespace

void TrainingConfig::validate() const {
  if (!(temperature > 0.0)) throw ConfigError("temperature must be > 0");
  if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0)) throw ConfigError("lambda1 and lambda2 must be >= 0");
  if (lambda1 == 0.0 && lambda2 == 0.0) throw ConfigError("lambda1 and lambda2 must not both be 0");
  if (!(lr > 0.0)) throw ConfigError("lr must be > 0");
  if (batch == 0 || seq_len == 0) throw ConfigError("batch and seq_len must be >= 1");
}

Vector softmax(std::span<const double> z, double temperature) {
  Vector out = log_softmax(z, temperature);
  for (double& v : out) v = std::exp(v);
  return out;
}

double loss_feat(std::span<const Vector> h_d, std::span<const Vector> h_t, const Matrix& w_p) {
  if (h_d.size() != h_t.size() || h_d.empty()) throw ContractViolation("loss_feat: batch sizes differ or are empty");
  Vector projected(w_p.rows());
  double total = 0.0;
  for (std::size_t i = 0; i < h_d.size(); ++i) {
    if (h_d[i].size() != w_p.cols() || h_t[i].size() != w_p.rows()) {
      throw ContractViolation("loss_feat: feature dimension mismatch");
    }
    w_p.apply(h_d[i], projected);
    total += kernels::squared_distance(projected, h_t[i]);
  }
  return total / static_cast<double>(h_d.size());
}

double loss_kd(std::span<const double> z_t, std::span<const double> z_d, double temperature) {
  if (z_t.size() != z_d.size() || z_t.empty()) throw ContractViolation("loss_kd: logit lengths differ");
  if (!(temperature > 0.0)) throw DomainError("loss_kd: temperature must be > 0");
  check_finite(z_t);
  check_finite(z_d);
  const double kl = kl_from_logs(log_softmax(z_t, temperature), log_softmax(z_d, temperature));
  return temperature * temperature * kl;
}

double loss_kd(std::span<const Vector> z_t, std::span<const Vector> z_d, double temperature) {
  if (z_t.size() != z_d.size() || z_t.empty()) throw ContractViolation("loss_kd: batch sizes differ or are empty");
  double total = 0.0;
  for (std::size_t i = 0; i < z_t.size(); ++i) total += loss_kd(z_t[i], z_d[i], temperature);
  return total / static_cast<double>(z_t.size());
}

std::vector<std::pair<std::string, std::span<double>>> parameter_groups(DraftHead& head, Matrix& w_p) {
  return {{"head.w1", head.w1.flat()},
          {"head.b1", head.b1},
          {"head.w2", head.w2.flat()},
          {"head.b2", head.b2},
          {"train.w_p", w_p.flat()}};
}

std::vector<std::pair<std::string, std::span<double>>> parameter_groups(GenericHead& head) {
  return {{"generic.w1", head.w1.flat()},
          {"generic.b1", head.b1},
          {"generic.w2", head.w2.flat()},
          {"generic.b2", head.b2}};
}

double draft_objective(const DraftModel& draft, const Matrix& w_p, std::span<const DraftExample> batch,
                       const TrainingConfig& cfg, DraftGradients* grad) {
  if (batch.empty()) throw ContractViolation("draft_objective: empty batch");
  const double n = static_cast<double>(batch.size());
  const double t = cfg.temperature;
  const DraftHead& head = draft.head();
  const Matrix& lm_head = *draft.lm_head();
  const std::size_t d = head.w2.rows();
  const std::size_t h = head.w1.rows();

  if (grad != nullptr) {
    grad->head = zeros_like(head);
    grad->w_p = Matrix(w_p.rows(), w_p.cols());
  }

  DraftForward fwd;
  Vector residual(w_p.rows()), g_hd(d), g_a(h), dz(lm_head.rows());
  double feat = 0.0;
  double kd = 0.0;
  for (const DraftExample& ex : batch) {
    draft.head_forward(ex.anchor_out, fwd);
    w_p.apply(fwd.h_d, residual);
    for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= ex.h_t[i];
    feat += kernels::dot(residual, residual);

    const Vector log_p = log_softmax(ex.z_t, t);
    const Vector log_q = log_softmax(fwd.logits, t);
    kd += kl_from_logs(log_p, log_q);

    if (grad == nullptr) continue;
    // d/dz_d of T^2 KL(p || q) is T (q - p).
    for (std::size_t i = 0; i < dz.size(); ++i) dz[i] = cfg.lambda2 * t / n * (std::exp(log_q[i]) - std::exp(log_p[i]));
    std::fill(g_hd.begin(), g_hd.end(), 0.0);
    lm_head.apply_transpose_add(dz, g_hd);
    const double feat_scale = cfg.lambda1 * 2.0 / n;
    for (double& r : residual) r *= feat_scale;
    w_p.apply_transpose_add(residual, g_hd);
    grad->w_p.add_outer(1.0, residual, fwd.h_d);

    grad->head.w2.add_outer(1.0, g_hd, fwd.hidden);
    kernels::axpy(1.0, g_hd, grad->head.b2);
    std::fill(g_a.begin(), g_a.end(), 0.0);
    head.w2.apply_transpose_add(g_hd, g_a);
    for (std::size_t i = 0; i < h; ++i) g_a[i] *= 1.0 - fwd.hidden[i] * fwd.hidden[i];
    grad->head.w1.add_outer(1.0, g_a, ex.anchor_out);
    kernels::axpy(1.0, g_a, grad->head.b1);
  }
  return cfg.lambda1 * feat / n + cfg.lambda2 * t * t * kd / n;
}

double generic_objective(const GenericDraft& draft, std::span<const GenericExample> batch,
                         const TrainingConfig& cfg, GenericHead* grad) {
  if (batch.empty()) throw ContractViolation("generic_objective: empty batch");
  const double n = static_cast<double>(batch.size());
  const double t = cfg.temperature;
  const GenericHead& head = draft.head();
  const std::size_t h = head.w1.rows();
  if (grad != nullptr) *grad = zeros_like(head);

  Vector hidden(h), z(head.w2.rows()), dz(head.w2.rows()), g_a(h);
  double kd = 0.0;
  for (const GenericExample& ex : batch) {
    head.w1.apply(ex.proxy_features, hidden);
    for (std::size_t i = 0; i < h; ++i) hidden[i] = std::tanh(hidden[i] + head.b1[i]);
    head.w2.apply(hidden, z);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += head.b2[i];

    const Vector log_p = log_softmax(ex.z_t, t);
    const Vector log_q = log_softmax(z, t);
    kd += kl_from_logs(log_p, log_q);
    if (grad == nullptr) continue;

    for (std::size_t i = 0; i < dz.size(); ++i) dz[i] = cfg.lambda2 * t / n * (std::exp(log_q[i]) - std::exp(log_p[i]));
    grad->w2.add_outer(1.0, dz, hidden);
    kernels::axpy(1.0, dz, grad->b2);
    std::fill(g_a.begin(), g_a.end(), 0.0);
    head.w2.apply_transpose_add(dz, g_a);
    for (std::size_t i = 0; i < h; ++i) g_a[i] *= 1.0 - hidden[i] * hidden[i];
    grad->w1.add_outer(1.0, g_a, ex.proxy_features);
    kernels::axpy(1.0, g_a, grad->b1);
  }
  return cfg.lambda2 * t * t * kd / n;
}

std::vector<DraftExample> make_draft_examples(const TargetModel& target, const DraftModel& draft,
                                              std::span<const TokenSequence> sequences, std::size_t seq_len) {
  std::vector<DraftExample> out;
  const std::size_t d = draft.proxy().dim();
  Vector phi(d);
  for (const TokenSequence& seq : sequences) {
    const std::size_t positions = std::min(seq_len, seq.size());
    for (std::size_t j = 0; j < positions; ++j) {
      const std::span<const Token> ctx(seq.data(), j + 1);
      TargetForward tf = target.forward(ctx);
      DraftExample ex{Vector(d), std::move(tf.features), std::move(tf.logits)};
      draft.proxy().features(ctx, phi);
      draft.anchor()->apply(phi, ex.anchor_out);
      out.push_back(std::move(ex));
    }
  }
  return out;
}

std::vector<GenericExample> make_generic_examples(const TargetModel& target, const GenericDraft& draft,
                                                  std::span<const TokenSequence> sequences, std::size_t seq_len) {
  std::vector<GenericExample> out;
  for (const TokenSequence& seq : sequences) {
    const std::size_t positions = std::min(seq_len, seq.size());
    for (std::size_t j = 0; j < positions; ++j) {
      const std::span<const Token> ctx(seq.data(), j + 1);
      GenericExample ex{Vector(draft.proxy().dim()), target.forward(ctx).logits};
      draft.proxy().features(ctx, ex.proxy_features);
      out.push_back(std::move(ex));
    }
  }
  return out;
}

DraftTrainingResult train_draft(const TargetModel& base, const Corpus& corpus, const TrainingConfig& cfg,
                                const FamilyConfig& family) {
  if (base.version_id() != 0) throw ContractViolation("train_draft: base target must be version 0");
  check_corpus(corpus, cfg);
  DraftModel draft = DraftModel::initialize(base, family, derive_seed(cfg.seed, kTagDraftInit));
  Matrix w_p = Matrix::identity(family.dim);

  Rng monitor_rng(derive_seed(cfg.seed, kTagMonitor));
  const auto monitor = make_draft_examples(base, draft, pick(corpus, cfg.batch, monitor_rng), cfg.seq_len);
  const double initial = draft_objective(draft, w_p, monitor, cfg, nullptr);

  DraftTrainingResult result{draft, w_p, initial, initial, {{0, initial}}};
  Rng rng(derive_seed(cfg.seed, kTagDraftBatches));
  DraftGradients grad;
  for (std::size_t step = 1; step <= cfg.steps; ++step) {
    const auto batch = make_draft_examples(base, result.draft, pick(corpus, cfg.batch, rng), cfg.seq_len);
    const double loss = draft_objective(result.draft, result.w_p, batch, cfg, &grad);
    if (!std::isfinite(loss)) throw TrainingError(step, "non-finite training loss");
    descend(parameter_groups(result.draft.mutable_head(), result.w_p), parameter_groups(grad.head, grad.w_p), cfg.lr);
    if (step % kHistoryEvery == 0 || step == cfg.steps) {
      const double m = draft_objective(result.draft, result.w_p, monitor, cfg, nullptr);
      if (!std::isfinite(m)) throw TrainingError(step, "non-finite monitor loss");
      result.history.emplace_back(step, m);
    }
  }
  result.final_loss = result.history.back().second;
  return result;
}

GenericTrainingResult train_generic_draft(const TargetModel& base, const Corpus& corpus, const TrainingConfig& cfg,
                                          const FamilyConfig& family) {
  if (base.version_id() != 0) throw ContractViolation("train_generic_draft: base target must be version 0");
  check_corpus(corpus, cfg);
  GenericDraft draft = GenericDraft::initialize(base, family, derive_seed(cfg.seed, kTagGenericInit));

  Rng monitor_rng(derive_seed(cfg.seed, kTagMonitor));
  const auto monitor = make_generic_examples(base, draft, pick(corpus, cfg.batch, monitor_rng), cfg.seq_len);
  const double initial = generic_objective(draft, monitor, cfg, nullptr);

  Rng rng(derive_seed(cfg.seed, kTagGenericBatches));
  GenericHead grad;
  for (std::size_t step = 1; step <= cfg.steps; ++step) {
    const auto batch = make_generic_examples(base, draft, pick(corpus, cfg.batch, rng), cfg.seq_len);
    const double loss = generic_objective(draft, batch, cfg, &grad);
    if (!std::isfinite(loss)) throw TrainingError(step, "non-finite training loss");
    descend(parameter_groups(draft.mutable_head()), parameter_groups(grad), cfg.lr);
  }
  const double final_loss = generic_objective(draft, monitor, cfg, nullptr);
  return {std::move(draft), initial, final_loss};
}

}  // namespace edgespec::models
