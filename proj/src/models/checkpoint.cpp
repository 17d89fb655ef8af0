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

#include "edgespec/models/checkpoint.hpp"

#include <map>

#include "edgespec/bytes.hpp"
#include "edgespec/errors.hpp"
#include "edgespec/io.hpp"

namespace edgespec::models {

namespace {

constexpr std::string_view kMagic = "FXSP";

NamedTensor from_matrix(std::string name, const Matrix& m) {
  return {std::move(name), {static_cast<std::uint32_t>(m.rows()), static_cast<std::uint32_t>(m.cols())},
          std::vector<double>(m.flat().begin(), m.flat().end())};
}

NamedTensor from_vector(std::string name, const Vector& v) {
  return {std::move(name), {static_cast<std::uint32_t>(v.size())}, v};
}

class TensorMap {
 public:
  explicit TensorMap(std::vector<NamedTensor> tensors) {
    for (NamedTensor& t : tensors) {
      const std::string name = t.name;
      if (!map_.emplace(name, std::move(t)).second) throw CodecError("duplicate tensor '" + name + "'");
    }
  }

  const NamedTensor& get(const std::string& name, std::size_t ndim) const {
    const auto it = map_.find(name);
    if (it == map_.end()) throw CodecError("checkpoint lacks tensor '" + name + "'");
    if (it->second.dims.size() != ndim) throw CodecError("tensor '" + name + "' has the wrong rank");
    return it->second;
  }

  bool has(const std::string& name) const { return map_.contains(name); }

  Matrix matrix(const std::string& name) const {
    const NamedTensor& t = get(name, 2);
    Matrix m(t.dims[0], t.dims[1]);
    std::copy(t.values.begin(), t.values.end(), m.flat().begin());
    return m;
  }

  Vector vector(const std::string& name) const { return get(name, 1).values; }

 private:
  std::map<std::string, NamedTensor> map_;
};

}  // namespace

std::string encode_container(const std::vector<NamedTensor>& tensors) {
  std::string out(kMagic);
  bytes::put_le<std::uint16_t>(out, kCheckpointVersion);
  for (const NamedTensor& t : tensors) {
    if (t.name.size() > UINT16_MAX) throw ContractViolation("tensor name too long");
    if (t.dims.size() > UINT8_MAX) throw ContractViolation("tensor rank too large");
    std::size_t count = 1;
    for (std::uint32_t d : t.dims) count *= d;
    if (count != t.values.size()) throw ContractViolation("tensor '" + t.name + "' dims do not match its values");
    bytes::put_le<std::uint16_t>(out, static_cast<std::uint16_t>(t.name.size()));
    out += t.name;
    out.push_back(static_cast<char>(t.dims.size()));
    for (std::uint32_t d : t.dims) bytes::put_le<std::uint32_t>(out, d);
    for (double v : t.values) bytes::put_f64_le(out, v);
  }
  return out;
}

std::vector<NamedTensor> decode_container(std::string_view data) {
  bytes::Reader in(data);
  if (data.size() < kMagic.size() || in.take(kMagic.size()) != kMagic) throw CodecError("bad checkpoint magic");
  const auto version = in.le<std::uint16_t>();
  if (version != kCheckpointVersion) throw CodecError("unsupported checkpoint version " + std::to_string(version));
  std::vector<NamedTensor> tensors;
  while (!in.done()) {
    NamedTensor t;
    const auto name_len = in.le<std::uint16_t>();
    t.name = std::string(in.take(name_len));
    const auto ndim = in.le<std::uint8_t>();
    std::uint64_t count = 1;
    for (std::uint8_t i = 0; i < ndim; ++i) {
      t.dims.push_back(in.le<std::uint32_t>());
      count *= t.dims.back();
    }
    if (count > in.remaining() / 8) throw CodecError("truncated buffer reading tensor '" + t.name + "'");
    t.values.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) t.values.push_back(in.f64_le());
    tensors.push_back(std::move(t));
  }
  return tensors;
}

std::string serialize_draft(const DraftModel& draft, const Matrix* w_p) {
  std::vector<NamedTensor> t;
  t.push_back({"proxy.salt", {1}, {static_cast<double>(draft.proxy().salt())}});
  for (std::size_t g = 0; g < draft.proxy().window(); ++g) {
    t.push_back(from_matrix("proxy.table." + std::to_string(g + 1), draft.proxy().tables()[g]));
  }
  t.push_back(from_matrix("anchor.weight", draft.anchor()->weight));
  t.push_back(from_vector("anchor.bias", draft.anchor()->bias));
  t.push_back(from_matrix("lm_head", *draft.lm_head()));
  const DraftHead& h = draft.head();
  t.push_back(from_matrix("head.w1", h.w1));
  t.push_back(from_vector("head.b1", h.b1));
  t.push_back(from_matrix("head.w2", h.w2));
  t.push_back(from_vector("head.b2", h.b2));
  if (w_p != nullptr) t.push_back(from_matrix("train.w_p", *w_p));
  return encode_container(t);
}

DraftModel deserialize_draft(std::string_view data) {
  const TensorMap map(decode_container(data));
  const Vector salt = map.vector("proxy.salt");
  if (salt.size() != 1) throw CodecError("proxy.salt must hold one value");
  std::vector<Matrix> tables;
  for (std::size_t g = 1; map.has("proxy.table." + std::to_string(g)); ++g) {
    tables.push_back(map.matrix("proxy.table." + std::to_string(g)));
  }
  if (tables.empty()) throw CodecError("checkpoint lacks tensor 'proxy.table.1'");
  try {
    auto proxy = std::make_shared<const NgramEmbedding>(tables.front().cols(), tables.front().rows(),
                                                        static_cast<std::uint32_t>(salt[0]), std::move(tables));
    auto anchor = std::make_shared<const AnchorBlock>(AnchorBlock{map.matrix("anchor.weight"), map.vector("anchor.bias")});
    auto lm_head = std::make_shared<const Matrix>(map.matrix("lm_head"));
    DraftHead head{map.matrix("head.w1"), map.vector("head.b1"), map.matrix("head.w2"), map.vector("head.b2")};
    return DraftModel(std::move(proxy), std::move(anchor), std::move(lm_head), std::move(head));
  } catch (const ConfigError& e) {
    throw CodecError(std::string("inconsistent checkpoint: ") + e.what());
  } catch (const ContractViolation& e) {
    throw CodecError(std::string("inconsistent checkpoint: ") + e.what());
  }
}

DraftModel attach_to_base(const DraftModel& draft, const TargetModel& base) {
  if (!(*draft.anchor() == *base.anchor())) throw ConfigError("draft anchor block does not match the target's");
  if (!(*draft.lm_head() == *base.lm_head())) {
    throw ConfigError("draft vocabulary projection does not match the target's");
  }
  return DraftModel(draft.proxy_ptr(), base.anchor(), base.lm_head(), draft.head());
}

void save_draft(const std::filesystem::path& path, const DraftModel& draft, const Matrix* w_p) {
  write_file_atomic(path, serialize_draft(draft, w_p));
}

DraftModel load_draft(const std::filesystem::path& path) { return deserialize_draft(read_file(path)); }

}  // namespace edgespec::models
