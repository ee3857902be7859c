/*
 * Copyright 2026 The slicevuln Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Symbol normalization, word-level vocabulary and fixed-length encoding.

#ifndef SLICEVULN_TOKENIZER_HPP_
#define SLICEVULN_TOKENIZER_HPP_

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace slicevuln {

struct NormalizeOptions {
  // Names kept verbatim (risky API functions); keywords are always kept.
  std::set<std::string, std::less<>> preserved;
  // When false, only comments/directives are dropped and tokens re-spaced.
  bool rename_symbols = true;
};

// Renames user identifiers to VAR1, VAR2, ... and called functions to
// FUN1, FUN2, ... in first-occurrence order; string literals become STR and
// numbers longer than four characters NUM. Tokens are joined by one space.
// Idempotent. Lex errors propagate.
std::string normalize(std::string_view slice, const NormalizeOptions& opts);

// Whitespace-delimited tokens of normalized text.
std::vector<std::string_view> split_tokens(std::string_view text);

inline constexpr std::int32_t kPadId = 0;
inline constexpr std::int32_t kUnkId = 1;
inline constexpr std::int32_t kClsId = 2;
inline constexpr std::size_t kNumReserved = 3;

class Vocab {
 public:
  Vocab();

  std::int32_t id(std::string_view token) const;  // UNK when absent
  const std::string& token(std::int32_t id) const { return tokens_.at(id); }
  std::size_t size() const { return tokens_.size(); }
  bool contains(std::string_view token) const;

  // "token<TAB>id" per line, reserved ids first.
  std::string serialize() const;
  static Vocab deserialize(std::string_view text);
  std::uint64_t hash() const;

  void save(const std::string& path) const;
  static Vocab load(const std::string& path);

  bool operator==(const Vocab& o) const { return tokens_ == o.tokens_; }

 private:
  friend Vocab build_vocab(std::span<const std::string> corpus,
                           std::size_t max_size);
  void push(std::string token);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::int32_t> ids_;
};

// Keeps the max_size - 3 most frequent tokens, ties in lexicographic order.
Vocab build_vocab(std::span<const std::string> corpus, std::size_t max_size);

inline constexpr std::size_t kDefaultVocabSize = 4096;
inline constexpr std::size_t kDefaultMaxLen = 512;

struct Encoding {
  std::vector<std::int32_t> ids;
  std::vector<std::uint8_t> attention_mask;

  // Number of unmasked positions.
  std::size_t length() const;
  bool operator==(const Encoding&) const = default;
};

// [CLS] + ids, truncated and PAD-padded to exactly max_len.
Encoding encode(std::string_view normalized, const Vocab& vocab,
                std::size_t max_len = kDefaultMaxLen);

}  // namespace slicevuln

#endif  // SLICEVULN_TOKENIZER_HPP_
