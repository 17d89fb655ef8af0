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

// Versioned binary container:
//   "FXSP" | u16 version | tensors until end of input
//   tensor := u16 name_len | name (UTF-8) | u8 ndim | u32 dims[ndim] | f64 values[prod(dims)]
// All integers and values little-endian.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "edgespec/matrix.hpp"
#include "edgespec/models/anchored.hpp"

namespace edgespec::models {

inline constexpr std::uint16_t kCheckpointVersion = 1;

struct NamedTensor {
  std::string name;
  std::vector<std::uint32_t> dims;
  std::vector<double> values;

  friend bool operator==(const NamedTensor&, const NamedTensor&) = default;
};

std::string encode_container(const std::vector<NamedTensor>& tensors);
// Throws CodecError on bad magic, unknown version, truncation or a size that
// does not match the dims.
std::vector<NamedTensor> decode_container(std::string_view bytes);

// Self-contained draft: proxy tables, anchor, vocabulary projection and head.
// `w_p` is stored under "train.w_p" when given; inference never reads it.
std::string serialize_draft(const DraftModel& draft, const Matrix* w_p = nullptr);
DraftModel deserialize_draft(std::string_view bytes);

// Re-points a loaded draft at the base target's frozen anchor and vocabulary
// projection. Throws ConfigError unless they are bit-identical.
DraftModel attach_to_base(const DraftModel& draft, const TargetModel& base);

void save_draft(const std::filesystem::path& path, const DraftModel& draft, const Matrix* w_p = nullptr);
DraftModel load_draft(const std::filesystem::path& path);

}  // namespace edgespec::models
