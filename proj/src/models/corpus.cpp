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

#include "edgespec/models/corpus.hpp"

#include <array>
#include <charconv>
#include <sstream>

#include "edgespec/errors.hpp"
#include "edgespec/io.hpp"

namespace edgespec::models {

namespace {

constexpr std::array<double, 4> kCumulative{0.55, 0.80, 0.92, 1.0};

}  // namespace

MarkovSource::MarkovSource(std::size_t vocab, std::uint64_t seed) : vocab_(vocab), seed_(seed) {
  if (vocab < 2 || vocab > 65536) throw ConfigError("vocab must be in [2, 65536]");
}

Token MarkovSource::candidate(Token a, Token b, std::size_t rank) const {
  const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | (static_cast<std::uint64_t>(b) << 8) | rank;
  return static_cast<Token>(splitmix64(seed_ ^ splitmix64(key)) % vocab_);
}

Token MarkovSource::next(Token a, Token b, Rng& rng) const {
  const double u = rng.uniform();
  std::size_t rank = 0;
  while (rank + 1 < kCumulative.size() && u >= kCumulative[rank]) ++rank;
  return candidate(a, b, rank);
}

TokenSequence MarkovSource::sample(std::size_t length, Rng& rng) const {
  TokenSequence s;
  s.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    if (i < 2) {
      s.push_back(static_cast<Token>(rng.below(vocab_)));
    } else {
      s.push_back(next(s[i - 2], s[i - 1], rng));
    }
  }
  return s;
}

Corpus generate_corpus(const MarkovSource& source, std::size_t count, std::size_t length,
                       std::uint64_t sample_seed) {
  Rng rng(sample_seed);
  Corpus c;
  c.vocab = source.vocab();
  c.sequences.reserve(count);
  for (std::size_t i = 0; i < count; ++i) c.sequences.push_back(source.sample(length, rng));
  return c;
}

std::string corpus_to_text(const Corpus& corpus) {
  std::string out;
  for (const TokenSequence& s : corpus.sequences) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i > 0) out += ' ';
      out += std::to_string(s[i]);
    }
    out += '\n';
  }
  return out;
}

Corpus parse_corpus(std::string_view text, std::size_t vocab) {
  Corpus c;
  c.vocab = vocab;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    TokenSequence seq;
    std::size_t pos = 0;
    while (pos < line.size()) {
      if (line[pos] == ' ') {
        ++pos;
        continue;
      }
      unsigned value = 0;
      const auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + line.size(), value);
      if (ec != std::errc() || (ptr != line.data() + line.size() && *ptr != ' ')) {
        throw ParseError(line_no, "expected a token index");
      }
      if (value >= vocab) throw ParseError(line_no, "token " + std::to_string(value) + " outside vocabulary");
      seq.push_back(static_cast<Token>(value));
      pos = static_cast<std::size_t>(ptr - line.data());
    }
    if (!seq.empty()) c.sequences.push_back(std::move(seq));
  }
  return c;
}

void write_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  write_file_atomic(path, corpus_to_text(corpus));
}

Corpus read_corpus(const std::filesystem::path& path, std::size_t vocab) {
  return parse_corpus(read_file(path), vocab);
}

}  // namespace edgespec::models
