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

// Explicit-endianness byte packing shared by the wire codec and the
// checkpoint container. Independent of host byte order.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "edgespec/errors.hpp"

namespace edgespec::bytes {

template <typename U>
void put_le(std::string& out, U value) {
  for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
}

inline void put_f64_le(std::string& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }

inline void put_u32_be(std::string& out, std::uint32_t v) {
  for (int i = 3; i >= 0; --i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

// Sequential reader; every read past the end throws CodecError.
class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  std::size_t remaining() const noexcept { return data_.size() - pos_; }
  bool done() const noexcept { return pos_ == data_.size(); }

  template <typename U>
  U le() {
    need(sizeof(U), "integer");
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      v |= static_cast<U>(static_cast<U>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i));
    }
    pos_ += sizeof(U);
    return v;
  }

  double f64_le() { return std::bit_cast<double>(le<std::uint64_t>()); }

  std::string_view take(std::size_t n) {
    need(n, "byte run");
    const std::string_view s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  void need(std::size_t n, const char* what) const {
    if (remaining() < n) throw CodecError(std::string("truncated buffer reading ") + what);
  }

  std::string_view data_;
  std::size_t pos_ = 0;
};

}  // namespace edgespec::bytes
