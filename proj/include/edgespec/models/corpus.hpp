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

// Seeded order-2 Markov token source and the corpus container.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "edgespec/models/lm.hpp"
#include "edgespec/random.hpp"

namespace edgespec::models {

// Each token pair (a, b) has four successor candidates picked by hashing
// (seed, a, b); they are drawn with probabilities 0.55 / 0.25 / 0.12 / 0.08.
class MarkovSource {
 public:
  MarkovSource(std::size_t vocab, std::uint64_t seed);

  std::size_t vocab() const noexcept { return vocab_; }
  Token candidate(Token a, Token b, std::size_t rank) const;
  Token next(Token a, Token b, Rng& rng) const;
  TokenSequence sample(std::size_t length, Rng& rng) const;

 private:
  std::size_t vocab_;
  std::uint64_t seed_;
};

struct Corpus {
  std::size_t vocab = 0;
  std::vector<TokenSequence> sequences;
};

// `count` sequences of `length` tokens drawn from the source with an
// independent sampling stream.
Corpus generate_corpus(const MarkovSource& source, std::size_t count, std::size_t length,
                       std::uint64_t sample_seed);

// One space-separated sequence per line.
std::string corpus_to_text(const Corpus& corpus);
// Throws ParseError naming the line for bad tokens or tokens >= vocab.
Corpus parse_corpus(std::string_view text, std::size_t vocab);

void write_corpus(const std::filesystem::path& path, const Corpus& corpus);
Corpus read_corpus(const std::filesystem::path& path, std::size_t vocab);

}  // namespace edgespec::models
