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

// Wire messages, little-endian, fixed width:
//
//   DraftBlockMsg    0xD1 | session u32 | offset u64 | count u16 | tokens u16 x count
//   VerifyResultMsg  0xD2 | session u32 | offset u64 | accepted u16 | correction u16
//
// Over a byte stream each message is preceded by its length as u32 big-endian.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "edgespec/models/lm.hpp"

namespace edgespec::protocol {

inline constexpr std::uint8_t kDraftBlockMagic = 0xD1;
inline constexpr std::uint8_t kVerifyResultMagic = 0xD2;
inline constexpr std::size_t kDraftBlockHeaderBytes = 15;
inline constexpr std::size_t kTokenBytes = 2;
inline constexpr std::size_t kVerifyResultBytes = 17;
inline constexpr std::uint32_t kMaxFrameBytes = 1u << 20;

struct DraftBlockMsg {
  std::uint32_t session_id = 0;
  std::uint64_t seq_offset = 0;  // tokens already committed
  TokenSequence tokens;          // empty only for a no-draft (cloud-only) request

  friend bool operator==(const DraftBlockMsg&, const DraftBlockMsg&) = default;
};

struct VerifyResultMsg {
  std::uint32_t session_id = 0;
  std::uint64_t seq_offset = 0;
  std::uint16_t accepted = 0;
  Token correction = 0;

  friend bool operator==(const VerifyResultMsg&, const VerifyResultMsg&) = default;
};

using Message = std::variant<DraftBlockMsg, VerifyResultMsg>;

constexpr std::size_t draft_block_bytes(std::size_t count) { return kDraftBlockHeaderBytes + kTokenBytes * count; }

std::string encode(const DraftBlockMsg& msg);
std::string encode(const VerifyResultMsg& msg);
std::string encode(const Message& msg);

// Throw CodecError on bad magic, truncation or trailing bytes.
DraftBlockMsg decode_draft_block(std::string_view bytes);
VerifyResultMsg decode_verify_result(std::string_view bytes);
Message decode(std::string_view bytes);

// Length-prefixed frame around one encoded message.
std::string frame(std::string_view payload);

// Incremental deframer for a reliable byte stream.
class FrameReader {
 public:
  void feed(std::string_view bytes) { buffer_.append(bytes); }
  // Next complete payload, or nullopt if more bytes are needed. Throws
  // CodecError for a declared length above kMaxFrameBytes.
  std::optional<std::string> next();
  std::size_t buffered() const noexcept { return buffer_.size(); }

 private:
  std::string buffer_;
};

// In-process reliable byte pipe with framing on both ends.
class Pipe {
 public:
  void send(std::string_view payload) { reader_.feed(frame(payload)); }
  std::optional<std::string> receive() { return reader_.next(); }

 private:
  FrameReader reader_;
};

}  // namespace edgespec::protocol
