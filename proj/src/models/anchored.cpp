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

#include "edgespec/models/anchored.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "edgespec/errors.hpp"

namespace edgespec::models {

namespace {

constexpr std::uint64_t kTagTables = 1;
constexpr std::uint64_t kTagAnchor = 2;
constexpr std::uint64_t kTagLmHead = 3;
constexpr std::uint64_t kTagSalt = 4;
constexpr std::uint64_t kTagAdapterStep = 11;
constexpr std::uint64_t kTagAnchorStep = 12;
constexpr std::uint64_t kTagLmHeadStep = 13;
constexpr double kHeadOutputScale = 0.1;

Matrix gaussian(std::size_t rows, std::size_t cols, double scale, Rng& rng) {
  Matrix m(rows, cols);
  for (double& v : m.flat()) v = scale * rng.normal();
  return m;
}

Vector gaussian(std::size_t n, double scale, Rng& rng) {
  Vector v(n);
  for (double& x : v) x = scale * rng.normal();
  return v;
}

// Random direction with unit spectral norm.
Matrix unit_spectral(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Matrix r = gaussian(n, n, 1.0, rng);
  const double norm = spectral_norm(r);
  for (double& v : r.flat()) v /= norm;
  return r;
}

void check_tokens(std::span<const Token> tokens, std::size_t vocab) {
  for (Token t : tokens) {
    if (t >= vocab) {
      throw DomainError("token " + std::to_string(t) + " outside vocabulary of size " + std::to_string(vocab));
    }
  }
}

std::uint64_t matrix_params(const Matrix& m) { return m.size(); }

}  // namespace

void FamilyConfig::validate() const {
  if (vocab < 2 || vocab > 65536) throw ConfigError("vocab must be in [2, 65536]");
  if (dim == 0 || hidden == 0 || buckets == 0) throw ConfigError("dim, hidden and buckets must be > 0");
  if (target_window == 0 || draft_window == 0 || draft_window > target_window) {
    throw ConfigError("windows must satisfy 1 <= draft_window <= target_window");
  }
  if (order_scales.size() != target_window) throw ConfigError("order_scales needs one entry per target order");
}

NgramEmbedding::NgramEmbedding(std::size_t dim, std::size_t buckets, std::uint32_t salt, std::vector<Matrix> tables)
    : dim_(dim), buckets_(buckets), salt_(salt), tables_(std::move(tables)) {
  if (tables_.empty()) throw ConfigError("n-gram embedding needs at least one order");
  for (const Matrix& t : tables_) {
    if (t.rows() != buckets_ || t.cols() != dim_) throw ConfigError("n-gram table has the wrong shape");
  }
}

NgramEmbedding NgramEmbedding::random(const FamilyConfig& cfg, std::uint32_t salt, Rng& rng) {
  std::vector<Matrix> tables;
  for (std::size_t g = 0; g < cfg.target_window; ++g) {
    tables.push_back(gaussian(cfg.buckets, cfg.dim, cfg.order_scales[g], rng));
  }
  return NgramEmbedding(cfg.dim, cfg.buckets, salt, std::move(tables));
}

NgramEmbedding NgramEmbedding::truncated(std::size_t window) const {
  if (window == 0 || window > tables_.size()) throw ContractViolation("truncated: bad window");
  return NgramEmbedding(dim_, buckets_, salt_, std::vector<Matrix>(tables_.begin(), tables_.begin() + window));
}

std::size_t NgramEmbedding::bucket(std::size_t order, std::span<const Token> last_tokens) const {
  std::uint64_t h = splitmix64((static_cast<std::uint64_t>(salt_) << 8) ^ order);
  for (Token t : last_tokens) h = splitmix64(h ^ t);
  return static_cast<std::size_t>(h % buckets_);
}

void NgramEmbedding::features(std::span<const Token> context, std::span<double> out) const {
  if (context.empty()) throw ContractViolation("features: context must be non-empty");
  if (out.size() != dim_) throw ContractViolation("features: output has the wrong size");
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t order = 1; order <= tables_.size() && order <= context.size(); ++order) {
    const auto last = context.subspan(context.size() - order);
    kernels::axpy(1.0, tables_[order - 1].row(bucket(order, last)), out);
  }
}

void AnchorBlock::apply(std::span<const double> in, std::span<double> out) const {
  weight.apply(in, out);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(out[i] + bias[i]);
}

double spectral_norm(const Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) e(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(r, c);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(e);
  return svd.singularValues().size() == 0 ? 0.0 : svd.singularValues()(0);
}

TargetModel::TargetModel(BackboneVersion backbone, std::shared_ptr<const AnchorBlock> anchor,
                         std::shared_ptr<const Matrix> lm_head)
    : backbone_(std::move(backbone)), anchor_(std::move(anchor)), lm_head_(std::move(lm_head)) {
  if (!backbone_.basis || !anchor_ || !lm_head_) throw ContractViolation("TargetModel: missing component");
  const std::size_t d = backbone_.basis->dim();
  if (backbone_.adapter.rows() != d || backbone_.adapter.cols() != d || anchor_->weight.rows() != d ||
      anchor_->weight.cols() != d || anchor_->bias.size() != d || lm_head_->cols() != d) {
    throw ContractViolation("TargetModel: inconsistent dimensions");
  }
}

TargetForward TargetModel::forward(std::span<const Token> context) const {
  if (context.empty()) throw ContractViolation("target_logits: context must be non-empty");
  const NgramEmbedding& basis = *backbone_.basis;
  check_tokens(context.subspan(context.size() - std::min(context.size(), basis.window())), vocab_size());
  const std::size_t d = basis.dim();
  Vector phi(d), u(d);
  basis.features(context, phi);
  backbone_.adapter.apply(phi, u);
  for (std::size_t i = 0; i < d; ++i) u[i] = phi[i] + u[i];
  TargetForward out{Vector(d), Vector(vocab_size())};
  anchor_->apply(u, out.features);
  lm_head_->apply(out.features, out.logits);
  return out;
}

void TargetModel::features(std::span<const Token> context, std::span<double> out) const {
  const TargetForward f = forward(context);
  std::copy(f.features.begin(), f.features.end(), out.begin());
}

Token TargetModel::greedy_from_features(std::span<const double> feature) const {
  Vector z(vocab_size());
  lm_head_->apply(feature, z);
  return static_cast<Token>(argmax(z));
}

TargetModel make_base_target(const FamilyConfig& cfg) {
  cfg.validate();
  Rng table_rng(derive_seed(cfg.seed, kTagTables));
  const auto salt = static_cast<std::uint32_t>(derive_seed(cfg.seed, kTagSalt));
  auto basis = std::make_shared<const NgramEmbedding>(NgramEmbedding::random(cfg, salt, table_rng));

  Rng anchor_rng(derive_seed(cfg.seed, kTagAnchor));
  auto anchor = std::make_shared<AnchorBlock>();
  anchor->weight = gaussian(cfg.dim, cfg.dim, cfg.anchor_gain / std::sqrt(static_cast<double>(cfg.dim)), anchor_rng);
  anchor->bias = gaussian(cfg.dim, cfg.anchor_bias_scale, anchor_rng);

  Rng head_rng(derive_seed(cfg.seed, kTagLmHead));
  auto lm_head = std::make_shared<const Matrix>(gaussian(cfg.vocab, cfg.dim, cfg.lm_head_scale, head_rng));

  BackboneVersion backbone;
  backbone.version_id = 0;
  backbone.basis = basis;
  backbone.adapter = Matrix(cfg.dim, cfg.dim);
  std::uint64_t params = matrix_params(backbone.adapter) + matrix_params(anchor->weight) + anchor->bias.size() +
                         matrix_params(*lm_head);
  for (const Matrix& t : basis->tables()) params += matrix_params(t);
  backbone.param_count = params;
  return TargetModel(std::move(backbone), std::move(anchor), std::move(lm_head));
}

TargetModel fine_tune(const TargetModel& model, double magnitude, std::uint64_t task_seed) {
  if (!(magnitude >= 0.0)) throw DomainError("fine_tune: magnitude must be >= 0");
  BackboneVersion next = model.backbone();
  next.version_id += 1;
  if (magnitude > 0.0) {
    const Matrix step = unit_spectral(next.adapter.rows(), derive_seed(task_seed, kTagAdapterStep));
    kernels::axpy(magnitude, step.flat(), next.adapter.flat());
  }
  return TargetModel(std::move(next), model.anchor(), model.lm_head());
}

TargetModel fine_tune_unconstrained(const TargetModel& model, double magnitude, std::uint64_t task_seed) {
  const TargetModel adapted = fine_tune(model, magnitude, task_seed);
  if (magnitude == 0.0) return adapted;

  auto anchor = std::make_shared<AnchorBlock>(*model.anchor());
  const Matrix anchor_step = unit_spectral(anchor->weight.rows(), derive_seed(task_seed, kTagAnchorStep));
  kernels::axpy(magnitude * spectral_norm(anchor->weight), anchor_step.flat(), anchor->weight.flat());

  auto lm_head = std::make_shared<Matrix>(*model.lm_head());
  Rng rng(derive_seed(task_seed, kTagLmHeadStep));
  Matrix head_step = gaussian(lm_head->rows(), lm_head->cols(), 1.0, rng);
  const double step_norm = spectral_norm(head_step);
  kernels::axpy(magnitude * spectral_norm(*lm_head) / step_norm, head_step.flat(), lm_head->flat());

  return TargetModel(adapted.backbone(), std::move(anchor), std::move(lm_head));
}

DraftModel::DraftModel(std::shared_ptr<const NgramEmbedding> proxy, std::shared_ptr<const AnchorBlock> anchor,
                       std::shared_ptr<const Matrix> lm_head, DraftHead head)
    : proxy_(std::move(proxy)), anchor_(std::move(anchor)), lm_head_(std::move(lm_head)), head_(std::move(head)) {
  if (!proxy_ || !anchor_ || !lm_head_) throw ContractViolation("DraftModel: missing component");
  const std::size_t d = proxy_->dim();
  const std::size_t h = head_.w1.rows();
  if (anchor_->weight.rows() != d || head_.w1.cols() != d || head_.b1.size() != h || head_.w2.rows() != d ||
      head_.w2.cols() != h || head_.b2.size() != d || lm_head_->cols() != d) {
    throw ContractViolation("DraftModel: inconsistent dimensions");
  }
}

DraftModel DraftModel::initialize(const TargetModel& base, const FamilyConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  DraftHead head;
  head.w1 = gaussian(cfg.hidden, cfg.dim, 1.0 / std::sqrt(static_cast<double>(cfg.dim)), rng);
  head.b1 = Vector(cfg.hidden, 0.0);
  // Small output layer: an untrained head yields near-uniform logits.
  head.w2 = gaussian(cfg.dim, cfg.hidden, kHeadOutputScale / std::sqrt(static_cast<double>(cfg.hidden)), rng);
  head.b2 = Vector(cfg.dim, 0.0);
  auto proxy = std::make_shared<const NgramEmbedding>(base.backbone().basis->truncated(cfg.draft_window));
  return DraftModel(std::move(proxy), base.anchor(), base.lm_head(), std::move(head));
}

void DraftModel::head_forward(std::span<const double> anchor_out, DraftForward& out) const {
  const std::size_t h = head_.w1.rows();
  const std::size_t d = head_.w2.rows();
  out.hidden.resize(h);
  out.h_d.resize(d);
  out.logits.resize(vocab_size());
  head_.w1.apply(anchor_out, out.hidden);
  for (std::size_t i = 0; i < h; ++i) out.hidden[i] = std::tanh(out.hidden[i] + head_.b1[i]);
  head_.w2.apply(out.hidden, out.h_d);
  for (std::size_t i = 0; i < d; ++i) out.h_d[i] += head_.b2[i];
  lm_head_->apply(out.h_d, out.logits);
}

DraftForward DraftModel::forward(std::span<const Token> context) const {
  if (context.empty()) throw ContractViolation("draft_logits: context must be non-empty");
  check_tokens(context.subspan(context.size() - std::min(context.size(), proxy_->window())), vocab_size());
  const std::size_t d = proxy_->dim();
  Vector phi(d);
  proxy_->features(context, phi);
  DraftForward out;
  out.anchor_out.resize(d);
  anchor_->apply(phi, out.anchor_out);
  head_forward(out.anchor_out, out);
  return out;
}

void DraftModel::logits(std::span<const Token> context, std::span<double> out) const {
  const DraftForward f = forward(context);
  std::copy(f.logits.begin(), f.logits.end(), out.begin());
}

std::uint64_t DraftModel::param_count() const noexcept {
  std::uint64_t n = head_.w1.size() + head_.b1.size() + head_.w2.size() + head_.b2.size();
  n += anchor_->weight.size() + anchor_->bias.size() + lm_head_->size();
  for (const Matrix& t : proxy_->tables()) n += t.size();
  return n;
}

GenericDraft::GenericDraft(std::shared_ptr<const NgramEmbedding> proxy, GenericHead head)
    : proxy_(std::move(proxy)), head_(std::move(head)) {
  if (!proxy_) throw ContractViolation("GenericDraft: missing proxy");
  const std::size_t h = head_.w1.rows();
  if (head_.w1.cols() != proxy_->dim() || head_.b1.size() != h || head_.w2.cols() != h ||
      head_.b2.size() != head_.w2.rows()) {
    throw ContractViolation("GenericDraft: inconsistent dimensions");
  }
}

GenericDraft GenericDraft::initialize(const TargetModel& base, const FamilyConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  GenericHead head;
  head.w1 = gaussian(cfg.hidden, cfg.dim, 1.0 / std::sqrt(static_cast<double>(cfg.dim)), rng);
  head.b1 = Vector(cfg.hidden, 0.0);
  head.w2 = gaussian(cfg.vocab, cfg.hidden, 1.0 / std::sqrt(static_cast<double>(cfg.hidden)), rng);
  head.b2 = Vector(cfg.vocab, 0.0);
  auto proxy = std::make_shared<const NgramEmbedding>(base.backbone().basis->truncated(cfg.draft_window));
  return GenericDraft(std::move(proxy), std::move(head));
}

void GenericDraft::logits(std::span<const Token> context, std::span<double> out) const {
  if (context.empty()) throw ContractViolation("draft_logits: context must be non-empty");
  check_tokens(context.subspan(context.size() - std::min(context.size(), proxy_->window())), vocab_size());
  const std::size_t h = head_.w1.rows();
  Vector phi(proxy_->dim()), hidden(h);
  proxy_->features(context, phi);
  head_.w1.apply(phi, hidden);
  for (std::size_t i = 0; i < h; ++i) hidden[i] = std::tanh(hidden[i] + head_.b1[i]);
  head_.w2.apply(hidden, out);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += head_.b2[i];
}

}  // namespace edgespec::models
