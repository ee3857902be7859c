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

// Lossless C/C++ lexer, vulnerability-candidate detection and a
// hop-bounded identifier-sharing slice builder.
//
// Candidate rules, applied to the significant tokens (no whitespace,
// comments or preprocessor directives):
//   API  identifier from the risky-function list followed by '('.
//   AU   identifier followed by '[' (subscript or array declarator).
//   PU   '*' followed by an identifier where the '*' is unary or part of a
//        declarator; '*(' whose parenthesised expression starts with an
//        identifier; '->' preceded by an identifier.
//   AE   binary + - * / % with identifier/number operands on both sides,
//        outside subscripts and dereference parentheses.
// A site (the token that triggers a rule) yields one candidate; ties at the
// same position go API > AU > PU > AE.

#ifndef SLICEVULN_SLICER_HPP_
#define SLICEVULN_SLICER_HPP_

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "slicevuln/common.hpp"
#include "slicevuln/corpus.hpp"

namespace slicevuln {

enum class TokenClass : std::uint8_t {
  Identifier,
  Keyword,
  Number,
  StringLiteral,
  CharLiteral,
  Operator,
  Punctuation,
  Comment,
  Whitespace,
  Directive,
};

std::string_view to_string(TokenClass cls);

struct Token {
  std::string text;
  TokenClass cls = TokenClass::Whitespace;
  int line = 1;    // 1-based
  int column = 1;  // 1-based, in bytes

  bool significant() const {
    return cls != TokenClass::Whitespace && cls != TokenClass::Comment &&
           cls != TokenClass::Directive;
  }
  bool is(std::string_view s) const { return text == s; }
  bool operator==(const Token&) const = default;
};

// Lexing failure; `line()` is where the offending construct starts.
class LexError : public DataError {
 public:
  LexError(const std::string& what, int line)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Concatenating the returned token texts reproduces `source` exactly.
std::vector<Token> lex(std::string_view source);

bool is_keyword(std::string_view word);
// Standard typedef names (size_t, FILE, uint8_t, ...) and *_t names.
bool is_type_name(std::string_view word);

struct SliceConfig {
  std::set<std::string, std::less<>> api_list;
  int max_slice_lines = 30;
  int def_use_hops = 2;

  void validate() const;
};

// Classic risky C library functions.
const std::set<std::string, std::less<>>& default_api_list();
SliceConfig default_slice_config();

// One name per line; '#' starts a comment; blank lines ignored.
std::set<std::string, std::less<>> parse_api_list(std::string_view text);
std::set<std::string, std::less<>> load_api_list(const std::string& path);

struct Candidate {
  Kind kind = Kind::API;
  int line = 0;
  int column = 0;  // position of the site token
  std::string focus;
  int span_begin = 0;
  int span_end = 0;

  bool operator==(const Candidate&) const = default;
};

// Sorted by (line, column).
std::vector<Candidate> extract_candidates(std::string_view source,
                                          const SliceConfig& cfg);

// Candidate line plus the lines of the enclosing function (or the whole
// input) reachable through at most `def_use_hops` identifier-sharing hops,
// in source order, truncated to `max_slice_lines` around the candidate.
// Lines are joined with '\n'.
std::string build_slice(std::string_view source, const Candidate& candidate,
                        const SliceConfig& cfg);

// 1-based inclusive line ranges of bodies found by brace-matching from an
// "identifier (args) {" header.
struct LineRange {
  int begin = 0;
  int end = 0;
};
std::vector<LineRange> find_functions(const std::vector<Token>& tokens);

}  // namespace slicevuln

#endif  // SLICEVULN_SLICER_HPP_
