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

#include "slicevuln/tokenizer.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "slicevuln/common.hpp"
#include "slicevuln/slicer.hpp"

namespace slicevuln {

namespace {

constexpr const char* kReserved[] = {"[PAD]", "[UNK]", "[CLS]"};

// Library names that are not user-defined, plus the normalizer's own
// placeholders, which must survive a second pass.
bool is_well_known(std::string_view name) {
  static const std::unordered_set<std::string_view> kNames = {
      "STR", "NUM", "NULL", "EOF", "stdin", "stdout", "stderr", "errno",
      "SIZE_MAX", "INT_MAX", "INT_MIN", "UINT_MAX", "CHAR_BIT", "BUFSIZ",
      "std", "main"};
  return kNames.count(name) > 0 || is_type_name(name);
}

}  // namespace

std::string normalize(std::string_view slice, const NormalizeOptions& opts) {
  const auto tokens = lex(slice);
  std::vector<const Token*> sig;
  for (const auto& t : tokens) {
    if (t.significant()) sig.push_back(&t);
  }

  std::unordered_map<std::string_view, std::string> renamed;
  int vars = 0;
  int funs = 0;
  std::string out;
  for (std::size_t i = 0; i < sig.size(); ++i) {
    const Token& t = *sig[i];
    std::string piece;
    switch (t.cls) {
      case TokenClass::Identifier: {
        if (!opts.rename_symbols || opts.preserved.count(t.text) ||
            is_well_known(t.text)) {
          piece = t.text;
          break;
        }
        auto it = renamed.find(t.text);
        if (it == renamed.end()) {
          const bool called = i + 1 < sig.size() && sig[i + 1]->is("(");
          std::string name = called ? "FUN" + std::to_string(++funs)
                                    : "VAR" + std::to_string(++vars);
          it = renamed.emplace(t.text, std::move(name)).first;
        }
        piece = it->second;
        break;
      }
      case TokenClass::StringLiteral:
        piece = opts.rename_symbols ? "STR" : t.text;
        break;
      case TokenClass::Number:
        piece = t.text.size() <= 4 ? t.text : "NUM";
        break;
      default:
        piece = t.text;
        break;
    }
    if (!out.empty()) out += ' ';
    out += piece;
  }
  return out;
}

std::vector<std::string_view> split_tokens(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' ||
                               text[i] == '\n' || text[i] == '\r'))
      ++i;
    const std::size_t start = i;
    while (i < text.size() && !(text[i] == ' ' || text[i] == '\t' ||
                                text[i] == '\n' || text[i] == '\r'))
      ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

Vocab::Vocab() {
  for (const char* r : kReserved) push(r);
}

void Vocab::push(std::string token) {
  const auto id = static_cast<std::int32_t>(tokens_.size());
  if (!ids_.emplace(token, id).second) {
    throw DataError("vocabulary token '" + token + "' appears twice");
  }
  tokens_.push_back(std::move(token));
}

std::int32_t Vocab::id(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnkId : it->second;
}

bool Vocab::contains(std::string_view token) const {
  return ids_.find(std::string(token)) != ids_.end();
}

std::string Vocab::serialize() const {
  std::string out;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    out += tokens_[i];
    out += '\t';
    out += std::to_string(i);
    out += '\n';
  }
  return out;
}

Vocab Vocab::deserialize(std::string_view text) {
  Vocab v;
  std::size_t line_no = 0;
  for (const auto& line : split_lines(text)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos) {
      throw DataError("vocab line " + std::to_string(line_no) + ": missing tab");
    }
    const std::string token = line.substr(0, tab);
    long long id = -1;
    try {
      id = std::stoll(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw DataError("vocab line " + std::to_string(line_no) + ": bad id");
    }
    if (line_no <= kNumReserved) {
      if (token != kReserved[line_no - 1] ||
          id != static_cast<long long>(line_no - 1)) {
        throw DataError("vocab line " + std::to_string(line_no) +
                        ": reserved ids must come first");
      }
      continue;
    }
    if (id != static_cast<long long>(v.size())) {
      throw DataError("vocab line " + std::to_string(line_no) +
                      ": ids must be dense and ascending");
    }
    v.push(token);
  }
  return v;
}

std::uint64_t Vocab::hash() const { return fnv1a(serialize()); }

void Vocab::save(const std::string& path) const { write_file(path, serialize()); }

Vocab Vocab::load(const std::string& path) { return deserialize(read_file(path)); }

Vocab build_vocab(std::span<const std::string> corpus, std::size_t max_size) {
  if (max_size < 4) throw ConfigError("vocabulary max_size must be >= 4");
  std::map<std::string_view, std::uint64_t> freq;
  for (const auto& text : corpus) {
    for (auto tok : split_tokens(text)) ++freq[tok];
  }
  std::vector<std::pair<std::string_view, std::uint64_t>> ranked(freq.begin(),
                                                                 freq.end());
  // std::map already orders by token, so a stable sort on count keeps ties
  // lexicographic.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  Vocab v;
  for (const auto& [tok, _] : ranked) {
    if (v.size() >= max_size) break;
    if (v.contains(tok)) continue;  // a literal "[PAD]" in the corpus
    v.push(std::string(tok));
  }
  return v;
}

std::size_t Encoding::length() const {
  return static_cast<std::size_t>(
      std::count(attention_mask.begin(), attention_mask.end(), 1));
}

Encoding encode(std::string_view normalized, const Vocab& vocab,
                std::size_t max_len) {
  if (max_len < 2) throw ConfigError("max_len must be >= 2");
  Encoding e;
  e.ids.assign(max_len, kPadId);
  e.attention_mask.assign(max_len, 0);
  e.ids[0] = kClsId;
  e.attention_mask[0] = 1;
  std::size_t pos = 1;
  for (auto tok : split_tokens(normalized)) {
    if (pos >= max_len) break;
    const std::int32_t id = vocab.id(tok);
    // Literal "[PAD]"/"[CLS]" text must not alias the reserved ids.
    e.ids[pos] = id < static_cast<std::int32_t>(kNumReserved) ? kUnkId : id;
    e.attention_mask[pos] = 1;
    ++pos;
  }
  return e;
}

}  // namespace slicevuln
