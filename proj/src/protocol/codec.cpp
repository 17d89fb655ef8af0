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

#include "edgespec/protocol/codec.hpp"

#include "edgespec/bytes.hpp"
#include "edgespec/errors.hpp"

namespace edgespec::protocol {

namespace {

void expect_magic(bytes::Reader& in, std::uint8_t magic) {
  if (in.done()) throw CodecError("truncated buffer: empty message");
  const auto got = in.le<std::uint8_t>();
  if (got != magic) throw CodecError("bad magic byte " + std::to_string(got));
}

void expect_end(const bytes::Reader& in) {
  if (!in.done()) throw CodecError(std::to_string(in.remaining()) + " trailing bytes after message");
}

}  // namespace

std::string encode(const DraftBlockMsg& msg) {
  if (msg.tokens.size() > UINT16_MAX) throw ContractViolation("draft block longer than 65535 tokens");
  std::string out;
  out.reserve(draft_block_bytes(msg.tokens.size()));
  out.push_back(static_cast<char>(kDraftBlockMagic));
  bytes::put_le(out, msg.session_id);
  bytes::put_le(out, msg.seq_offset);
  bytes::put_le(out, static_cast<std::uint16_t>(msg.tokens.size()));
  for (Token t : msg.tokens) bytes::put_le(out, t);
  return out;
}

std::string encode(const VerifyResultMsg& msg) {
  std::string out;
  out.reserve(kVerifyResultBytes);
  out.push_back(static_cast<char>(kVerifyResultMagic));
  bytes::put_le(out, msg.session_id);
  bytes::put_le(out, msg.seq_offset);
  bytes::put_le(out, msg.accepted);
  bytes::put_le(out, msg.correction);
  return out;
}

std::string encode(const Message& msg) {
  return std::visit([](const auto& m) { return encode(m); }, msg);
}

DraftBlockMsg decode_draft_block(std::string_view data) {
  bytes::Reader in(data);
  expect_magic(in, kDraftBlockMagic);
  DraftBlockMsg msg;
  msg.session_id = in.le<std::uint32_t>();
  msg.seq_offset = in.le<std::uint64_t>();
  const auto count = in.le<std::uint16_t>();
  msg.tokens.reserve(count);
  for (std::uint16_t i = 0; i < count; ++i) msg.tokens.push_back(in.le<Token>());
  expect_end(in);
  return msg;
}

VerifyResultMsg decode_verify_result(std::string_view data) {
  bytes::Reader in(data);
  expect_magic(in, kVerifyResultMagic);
  VerifyResultMsg msg;
  msg.session_id = in.le<std::uint32_t>();
  msg.seq_offset = in.le<std::uint64_t>();
  msg.accepted = in.le<std::uint16_t>();
  msg.correction = in.le<Token>();
  expect_end(in);
  return msg;
}

Message decode(std::string_view data) {
  if (data.empty()) throw CodecError("truncated buffer: empty message");
  const auto magic = static_cast<std::uint8_t>(data[0]);
  if (magic == kDraftBlockMagic) return decode_draft_block(data);
  if (magic == kVerifyResultMagic) return decode_verify_result(data);
  throw CodecError("bad magic byte " + std::to_string(magic));
}

std::string frame(std::string_view payload) {
  if (payload.size() > kMaxFrameBytes) throw ContractViolation("frame payload too large");
  std::string out;
  out.reserve(4 + payload.size());
  bytes::put_u32_be(out, static_cast<std::uint32_t>(payload.size()));
  out.append(payload);
  return out;
}

std::optional<std::string> FrameReader::next() {
  if (buffer_.size() < 4) return std::nullopt;
  std::uint32_t len = 0;
  for (int i = 0; i < 4; ++i) len = (len << 8) | static_cast<unsigned char>(buffer_[i]);
  if (len > kMaxFrameBytes) throw CodecError("frame length " + std::to_string(len) + " exceeds limit");
  if (buffer_.size() < 4 + static_cast<std::size_t>(len)) return std::nullopt;
  std::string payload = buffer_.substr(4, len);
  buffer_.erase(0, 4 + static_cast<std::size_t>(len));
  return payload;
}

}  // namespace edgespec::protocol
