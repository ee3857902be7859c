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

#include "slicevuln/slicer.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <unordered_set>

#include "slicevuln/common.hpp"

namespace slicevuln {

std::string_view to_string(TokenClass cls) {
  switch (cls) {
    case TokenClass::Identifier: return "identifier";
    case TokenClass::Keyword: return "keyword";
    case TokenClass::Number: return "number";
    case TokenClass::StringLiteral: return "string-literal";
    case TokenClass::CharLiteral: return "char-literal";
    case TokenClass::Operator: return "operator";
    case TokenClass::Punctuation: return "punctuation";
    case TokenClass::Comment: return "comment";
    case TokenClass::Whitespace: return "whitespace";
    case TokenClass::Directive: return "directive";
  }
  return "?";
}

namespace {

const std::unordered_set<std::string_view>& keywords() {
  static const std::unordered_set<std::string_view> kKeywords = {
      // C
      "auto", "break", "case", "char", "const", "continue", "default", "do",
      "double", "else", "enum", "extern", "float", "for", "goto", "if",
      "inline", "int", "long", "register", "restrict", "return", "short",
      "signed", "sizeof", "static", "struct", "switch", "typedef", "union",
      "unsigned", "void", "volatile", "while", "_Bool", "_Complex",
      "_Imaginary", "_Alignas", "_Alignof", "_Atomic", "_Generic",
      "_Noreturn", "_Static_assert", "_Thread_local",
      // C++
      "alignas", "alignof", "and", "and_eq", "asm", "bitand", "bitor", "bool",
      "catch", "char8_t", "char16_t", "char32_t", "class", "compl", "concept",
      "consteval", "constexpr", "constinit", "const_cast", "co_await",
      "co_return", "co_yield", "decltype", "delete", "dynamic_cast",
      "explicit", "export", "false", "friend", "mutable", "namespace", "new",
      "noexcept", "not", "not_eq", "nullptr", "operator", "or", "or_eq",
      "private", "protected", "public", "reinterpret_cast", "requires",
      "static_assert", "static_cast", "template", "this", "thread_local",
      "throw", "true", "try", "typeid", "typename", "using", "virtual",
      "wchar_t", "xor", "xor_eq"};
  return kKeywords;
}

// Longest first within each leading character is not needed: the matcher
// tries lengths 3, 2, 1 in turn.
const std::unordered_set<std::string_view>& operators() {
  static const std::unordered_set<std::string_view> kOperators = {
      ">>=", "<<=", "...", "->*", "<=>", "->", "++", "--", "<<", ">>", "<=",
      ">=",  "==",  "!=",  "&&",  "||",  "+=", "-=", "*=", "/=", "%=", "&=",
      "|=",  "^=",  "::",  ".*",  "##",  "+",  "-",  "*",  "/",  "%",  "<",
      ">",   "=",   "!",   "&",   "|",   "^",  "~",  "?",  ":",  ".",  "#"};
  return kOperators;
}

bool is_ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
         c == '$';
}
bool is_ident_char(unsigned char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9');
}
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }
bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

bool is_literal_prefix(std::string_view word) {
  return word == "L" || word == "u" || word == "U" || word == "u8" ||
         word == "R" || word == "LR" || word == "uR" || word == "UR" ||
         word == "u8R";
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    while (pos_ < src_.size()) lex_one();
    return std::move(tokens_);
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void emit(std::size_t start, TokenClass cls) {
    Token t;
    t.text = std::string(src_.substr(start, pos_ - start));
    t.cls = cls;
    t.line = start_line_;
    t.column = start_col_;
    for (char c : t.text) {
      if (c == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
    if (cls != TokenClass::Whitespace) at_line_start_ = false;
    if (cls == TokenClass::Whitespace &&
        t.text.find('\n') != std::string::npos) {
      at_line_start_ = true;
    }
    tokens_.push_back(std::move(t));
  }

  void lex_one() {
    const std::size_t start = pos_;
    start_line_ = line_;
    start_col_ = col_;
    const auto c = static_cast<unsigned char>(peek());

    if (is_space(c)) {
      while (pos_ < src_.size() && is_space(static_cast<unsigned char>(peek())))
        ++pos_;
      emit(start, TokenClass::Whitespace);
      return;
    }
    if (c == '#' && at_line_start_) {
      lex_directive();
      emit(start, TokenClass::Directive);
      return;
    }
    if (c == '/' && peek(1) == '/') {
      while (pos_ < src_.size() && peek() != '\n') ++pos_;
      emit(start, TokenClass::Comment);
      return;
    }
    if (c == '/' && peek(1) == '*') {
      const std::size_t close = src_.find("*/", pos_ + 2);
      if (close == std::string_view::npos) {
        throw LexError("unterminated block comment", start_line_);
      }
      pos_ = close + 2;
      emit(start, TokenClass::Comment);
      return;
    }
    if (is_ident_start(c)) {
      while (pos_ < src_.size() && is_ident_char(static_cast<unsigned char>(peek())))
        ++pos_;
      const std::string_view word = src_.substr(start, pos_ - start);
      if ((peek() == '"' || peek() == '\'') && is_literal_prefix(word)) {
        const bool raw = word.back() == 'R' && peek() == '"';
        if (raw) {
          lex_raw_string();
        } else {
          lex_quoted(peek());
        }
        emit(start, peek_back_quote() == '\'' ? TokenClass::CharLiteral
                                              : TokenClass::StringLiteral);
        return;
      }
      emit(start, keywords().count(word) ? TokenClass::Keyword
                                         : TokenClass::Identifier);
      return;
    }
    if (is_digit(c) || (c == '.' && is_digit(static_cast<unsigned char>(peek(1))))) {
      lex_number();
      emit(start, TokenClass::Number);
      return;
    }
    if (c == '"') {
      lex_quoted('"');
      emit(start, TokenClass::StringLiteral);
      return;
    }
    if (c == '\'') {
      lex_quoted('\'');
      emit(start, TokenClass::CharLiteral);
      return;
    }
    if (c >= 0x80) {
      while (pos_ < src_.size() && static_cast<unsigned char>(peek()) >= 0x80)
        ++pos_;
      emit(start, TokenClass::Punctuation);
      return;
    }
    for (std::size_t len = 3; len >= 1; --len) {
      if (pos_ + len <= src_.size() &&
          operators().count(src_.substr(pos_, len))) {
        pos_ += len;
        emit(start, TokenClass::Operator);
        return;
      }
    }
    ++pos_;
    emit(start, TokenClass::Punctuation);
  }

  // Quote character that closed the literal just scanned.
  char peek_back_quote() const { return pos_ > 0 ? src_[pos_ - 1] : '\0'; }

  void lex_directive() {
    while (pos_ < src_.size()) {
      if (peek() == '\\' && peek(1) == '\n') {
        pos_ += 2;
        continue;
      }
      if (peek() == '\\' && peek(1) == '\r' && peek(2) == '\n') {
        pos_ += 3;
        continue;
      }
      if (peek() == '\n') break;
      ++pos_;
    }
    // A trailing '\r' stays with the directive; the newline does not.
  }

  void lex_quoted(char quote) {
    const char* what = quote == '"' ? "unterminated string literal"
                                    : "unterminated character literal";
    ++pos_;  // opening quote
    while (true) {
      if (pos_ >= src_.size() || peek() == '\n') {
        throw LexError(what, start_line_);
      }
      const char ch = peek();
      if (ch == '\\') {
        if (pos_ + 1 >= src_.size()) throw LexError(what, start_line_);
        pos_ += 2;  // escape, including an escaped newline
        continue;
      }
      ++pos_;
      if (ch == quote) return;
    }
  }

  void lex_raw_string() {
    ++pos_;  // '"'
    const std::size_t open = src_.find('(', pos_);
    if (open == std::string_view::npos || open - pos_ > 16) {
      throw LexError("malformed raw string literal", start_line_);
    }
    const std::string closing =
        ")" + std::string(src_.substr(pos_, open - pos_)) + "\"";
    const std::size_t close = src_.find(closing, open + 1);
    if (close == std::string_view::npos) {
      throw LexError("unterminated string literal", start_line_);
    }
    pos_ = close + closing.size();
  }

  void lex_number() {
    while (pos_ < src_.size()) {
      const auto ch = static_cast<unsigned char>(peek());
      if ((ch == 'e' || ch == 'E' || ch == 'p' || ch == 'P') &&
          (peek(1) == '+' || peek(1) == '-')) {
        pos_ += 2;
      } else if (is_ident_char(ch) || ch == '.') {
        ++pos_;
      } else if (ch == '\'' && is_ident_char(static_cast<unsigned char>(peek(1)))) {
        pos_ += 2;  // digit separator
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  int start_line_ = 1;
  int start_col_ = 1;
  bool at_line_start_ = true;
  std::vector<Token> tokens_;
};

}  // namespace

std::vector<Token> lex(std::string_view source) { return Lexer(source).run(); }

bool is_keyword(std::string_view word) { return keywords().count(word) > 0; }

bool is_type_name(std::string_view word) {
  static const std::unordered_set<std::string_view> kTypes = {
      "FILE", "DIR", "va_list", "jmp_buf", "fpos_t", "wint_t", "BOOL", "BYTE",
      "WORD", "DWORD", "UINT", "ULONG", "LPSTR", "LPCSTR", "HANDLE", "TCHAR"};
  if (kTypes.count(word)) return true;
  return word.size() > 2 && word.substr(word.size() - 2) == "_t";
}

void SliceConfig::validate() const {
  if (max_slice_lines < 1) throw ConfigError("max_slice_lines must be >= 1");
  if (def_use_hops < 0) throw ConfigError("def_use_hops must be >= 0");
}

const std::set<std::string, std::less<>>& default_api_list() {
  static const std::set<std::string, std::less<>> kApis = {
      "strcpy",  "strncpy", "strcat",   "strncat", "sprintf",  "vsprintf",
      "snprintf", "vsnprintf", "gets",  "fgets",   "scanf",    "sscanf",
      "fscanf",  "vscanf",  "memcpy",   "memmove", "memset",   "memcmp",
      "strlen",  "strcmp",  "strncmp",  "strchr",  "strrchr",  "strstr",
      "strtok",  "strdup",  "malloc",   "calloc",  "realloc",  "free",
      "alloca",  "read",    "recv",     "recvfrom", "fread",   "getenv",
      "system",  "popen",   "execl",    "execvp",  "printf",   "fprintf",
      "wcscpy",  "wcsncpy", "wcscat",   "wcslen",  "lstrcpy",  "StrCpy"};
  return kApis;
}

SliceConfig default_slice_config() {
  SliceConfig cfg;
  cfg.api_list = default_api_list();
  return cfg;
}

std::set<std::string, std::less<>> parse_api_list(std::string_view text) {
  std::set<std::string, std::less<>> out;
  for (const auto& raw : split_lines(text)) {
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (!line.empty()) out.emplace(line);
  }
  return out;
}

std::set<std::string, std::less<>> load_api_list(const std::string& path) {
  return parse_api_list(read_file(path));
}

namespace {

std::vector<const Token*> significant_tokens(const std::vector<Token>& tokens) {
  std::vector<const Token*> sig;
  sig.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (t.significant()) sig.push_back(&t);
  }
  return sig;
}

// Index of the token matching the opener at `open`, or sig.size() if none.
std::size_t match_forward(const std::vector<const Token*>& sig,
                          std::size_t open) {
  const std::string_view opener = sig[open]->text;
  const std::string_view closer =
      opener == "(" ? ")" : opener == "[" ? "]" : "}";
  int depth = 0;
  for (std::size_t i = open; i < sig.size(); ++i) {
    if (sig[i]->cls != TokenClass::Punctuation) continue;
    if (sig[i]->text == opener) ++depth;
    if (sig[i]->text == closer && --depth == 0) return i;
  }
  return sig.size();
}

std::optional<std::size_t> match_backward(const std::vector<const Token*>& sig,
                                          std::size_t close) {
  const std::string_view closer = sig[close]->text;
  const std::string_view opener = closer == ")" ? "(" : "[";
  int depth = 0;
  for (std::size_t i = close + 1; i-- > 0;) {
    if (sig[i]->cls != TokenClass::Punctuation) continue;
    if (sig[i]->text == closer) ++depth;
    if (sig[i]->text == opener && --depth == 0) return i;
  }
  return std::nullopt;
}

bool is_identifier(const Token* t) { return t->cls == TokenClass::Identifier; }

class CandidateScanner {
 public:
  CandidateScanner(const std::vector<const Token*>& sig, const SliceConfig& cfg)
      : sig_(sig), cfg_(cfg) {}

  std::vector<Candidate> run() {
    mark_excluded_contexts();
    for (std::size_t i = 0; i < sig_.size(); ++i) {
      scan_api_and_array(i);
      scan_pointer(i);
      scan_arithmetic(i);
    }
    return finish();
  }

 private:
  // An identifier that names a type rather than a value.
  bool is_type_identifier(std::size_t i) const {
    if (!is_identifier(sig_[i])) return false;
    if (is_type_name(sig_[i]->text)) return true;
    if (i > 0 && sig_[i - 1]->cls == TokenClass::Keyword) {
      const auto& kw = sig_[i - 1]->text;
      return kw == "struct" || kw == "union" || kw == "enum" || kw == "class";
    }
    return false;
  }

  bool is_value_operand(std::size_t i) const {
    const Token* t = sig_[i];
    return (is_identifier(t) && !is_type_identifier(i)) ||
           t->cls == TokenClass::Number;
  }

  // Token that ends an operand, which makes a following '*' binary.
  bool ends_operand(std::size_t i) const {
    const Token* t = sig_[i];
    if (t->cls == TokenClass::StringLiteral || t->cls == TokenClass::CharLiteral)
      return true;
    if (t->cls == TokenClass::Punctuation && (t->is(")") || t->is("]")))
      return true;
    return is_value_operand(i) ||
           (t->cls == TokenClass::Keyword && (t->is("this") || t->is("nullptr")));
  }

  bool star_is_unary_or_declarator(std::size_t i) const {
    return i == 0 || !ends_operand(i - 1);
  }

  // Marks tokens inside subscripts and dereference parentheses, where
  // arithmetic belongs to the AU/PU site rather than forming an AE site.
  void mark_excluded_contexts() {
    excluded_.assign(sig_.size(), false);
    for (std::size_t i = 0; i < sig_.size(); ++i) {
      const Token* t = sig_[i];
      std::size_t open = sig_.size();
      if (t->cls == TokenClass::Punctuation && t->is("[")) {
        open = i;
      } else if (t->is("*") && t->cls == TokenClass::Operator &&
                 star_is_unary_or_declarator(i) && i + 2 < sig_.size() &&
                 sig_[i + 1]->is("(") && is_identifier(sig_[i + 2])) {
        open = i + 1;
      }
      if (open == sig_.size()) continue;
      const std::size_t close = match_forward(sig_, open);
      for (std::size_t k = open + 1; k < close && k < sig_.size(); ++k) {
        excluded_[k] = true;
      }
    }
  }

  int line_of_match(std::size_t open) const {
    const std::size_t close = match_forward(sig_, open);
    return close < sig_.size() ? sig_[close]->line : sig_.back()->line;
  }

  void add(Kind kind, std::size_t site, std::string focus, int span_end) {
    Candidate c;
    c.kind = kind;
    c.line = sig_[site]->line;
    c.column = sig_[site]->column;
    c.focus = std::move(focus);
    c.span_begin = c.line;
    c.span_end = std::max(span_end, c.line);
    found_.push_back(std::move(c));
  }

  void scan_api_and_array(std::size_t i) {
    const Token* t = sig_[i];
    if (!is_identifier(t) || i + 1 >= sig_.size()) return;
    const Token* next = sig_[i + 1];
    if (next->is("(") && cfg_.api_list.count(t->text)) {
      add(Kind::API, i, t->text, line_of_match(i + 1));
    } else if (next->is("[")) {
      add(Kind::AU, i, t->text, line_of_match(i + 1));
    }
  }

  void scan_pointer(std::size_t i) {
    const Token* t = sig_[i];
    if (t->cls != TokenClass::Operator) return;
    if (t->is("->")) {
      if (i > 0 && is_identifier(sig_[i - 1])) {
        add(Kind::PU, i, sig_[i - 1]->text,
            i + 1 < sig_.size() ? sig_[i + 1]->line : t->line);
      }
      return;
    }
    if (!t->is("*") || !star_is_unary_or_declarator(i) || i + 1 >= sig_.size())
      return;
    const Token* next = sig_[i + 1];
    if (is_identifier(next)) {
      add(Kind::PU, i, next->text, next->line);
    } else if (next->is("(") && i + 2 < sig_.size() && is_identifier(sig_[i + 2])) {
      add(Kind::PU, i, sig_[i + 2]->text, line_of_match(i + 1));
    }
  }

  static bool is_assignment(const Token* t) {
    if (t->cls != TokenClass::Operator) return false;
    return t->is("=") || t->is("+=") || t->is("-=") || t->is("*=") ||
           t->is("/=") || t->is("%=") || t->is("&=") || t->is("|=") ||
           t->is("^=") || t->is("<<=") || t->is(">>=");
  }

  // Variable assigned by the statement containing sig_[op], if any.
  std::optional<std::size_t> assigned_variable(std::size_t op) const {
    int depth = 0;
    for (std::size_t i = op; i-- > 0;) {
      const Token* t = sig_[i];
      if (t->cls == TokenClass::Punctuation) {
        if (t->is(")") || t->is("]")) {
          ++depth;
        } else if (t->is("(") || t->is("[")) {
          if (depth > 0) --depth;
        } else if (t->is(";") || t->is("{") || t->is("}")) {
          return std::nullopt;
        }
        continue;
      }
      if (depth == 0 && is_assignment(t) && i > 0) {
        std::size_t lhs = i - 1;
        if (sig_[lhs]->is("]")) {
          auto open = match_backward(sig_, lhs);
          if (!open || *open == 0) return std::nullopt;
          lhs = *open - 1;
        }
        if (is_identifier(sig_[lhs])) return lhs;
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  void scan_arithmetic(std::size_t i) {
    const Token* t = sig_[i];
    if (t->cls != TokenClass::Operator || excluded_[i]) return;
    if (!(t->is("+") || t->is("-") || t->is("*") || t->is("/") || t->is("%")))
      return;
    if (i == 0 || i + 1 >= sig_.size()) return;
    if (!is_value_operand(i - 1) || !is_value_operand(i + 1)) return;
    std::optional<std::size_t> focus;
    if (auto lhs = assigned_variable(i); lhs && sig_[*lhs]->line == t->line) {
      focus = lhs;
    } else if (is_identifier(sig_[i - 1])) {
      focus = i - 1;
    } else if (is_identifier(sig_[i + 1])) {
      focus = i + 1;
    }
    if (!focus) return;
    add(Kind::AE, i, sig_[*focus]->text, sig_[i + 1]->line);
    found_.back().span_begin = sig_[i - 1]->line;
  }

  std::vector<Candidate> finish() {
    std::stable_sort(found_.begin(), found_.end(),
                     [](const Candidate& a, const Candidate& b) {
                       if (a.line != b.line) return a.line < b.line;
                       if (a.column != b.column) return a.column < b.column;
                       return a.kind < b.kind;
                     });
    std::vector<Candidate> out;
    for (auto& c : found_) {
      if (!out.empty() && out.back().line == c.line &&
          out.back().column == c.column) {
        continue;  // lower-precedence kind at an already claimed site
      }
      out.push_back(std::move(c));
    }
    return out;
  }

  const std::vector<const Token*>& sig_;
  const SliceConfig& cfg_;
  std::vector<bool> excluded_;
  std::vector<Candidate> found_;
};

}  // namespace

std::vector<Candidate> extract_candidates(std::string_view source,
                                          const SliceConfig& cfg) {
  const auto tokens = lex(source);
  const auto sig = significant_tokens(tokens);
  return CandidateScanner(sig, cfg).run();
}

std::vector<LineRange> find_functions(const std::vector<Token>& tokens) {
  const auto sig = significant_tokens(tokens);
  std::vector<LineRange> out;
  std::size_t i = 0;
  while (i + 1 < sig.size()) {
    if (!is_identifier(sig[i]) || !sig[i + 1]->is("(")) {
      ++i;
      continue;
    }
    const std::size_t close = match_forward(sig, i + 1);
    std::size_t k = close + 1;
    // Trailing qualifiers between ')' and '{'.
    while (k < sig.size() && sig[k]->cls == TokenClass::Keyword &&
           (sig[k]->is("const") || sig[k]->is("noexcept") ||
            sig[k]->is("override") || sig[k]->is("final") ||
            sig[k]->is("volatile"))) {
      ++k;
    }
    if (close >= sig.size() || k >= sig.size() || !sig[k]->is("{")) {
      ++i;
      continue;
    }
    const std::size_t body_end = match_forward(sig, k);
    const int end_line =
        body_end < sig.size() ? sig[body_end]->line : sig.back()->line;
    out.push_back({sig[i]->line, end_line});
    if (body_end >= sig.size()) break;
    i = body_end + 1;
  }
  return out;
}

std::string build_slice(std::string_view source, const Candidate& candidate,
                        const SliceConfig& cfg) {
  cfg.validate();
  // Line texts indexed from 1; a trailing newline does not open a new line.
  std::vector<std::string_view> lines;
  {
    std::size_t start = 0;
    while (true) {
      const std::size_t nl = source.find('\n', start);
      if (nl == std::string_view::npos) {
        if (start < source.size() || lines.empty())
          lines.push_back(source.substr(start));
        break;
      }
      lines.push_back(source.substr(start, nl - start));
      start = nl + 1;
    }
    for (auto& l : lines) {
      if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    }
  }
  const int num_lines = static_cast<int>(lines.size());
  if (candidate.line < 1 || candidate.line > num_lines) {
    throw DataError("candidate line " + std::to_string(candidate.line) +
                    " outside input of " + std::to_string(num_lines) +
                    " lines");
  }

  const auto tokens = lex(source);
  LineRange region{1, num_lines};
  for (const auto& fn : find_functions(tokens)) {
    if (fn.begin <= candidate.line && candidate.line <= fn.end) {
      region = fn;
      break;
    }
  }

  std::map<int, std::set<std::string_view>> idents;
  for (const auto& t : tokens) {
    if (t.cls == TokenClass::Identifier && t.line >= region.begin &&
        t.line <= region.end && !is_type_name(t.text)) {
      idents[t.line].insert(t.text);
    }
  }

  std::set<int> included = {candidate.line};
  std::set<std::string_view> known = idents[candidate.line];
  for (int hop = 0; hop < cfg.def_use_hops; ++hop) {
    std::vector<int> added;
    for (const auto& [line, names] : idents) {
      if (included.count(line)) continue;
      const bool shares = std::any_of(names.begin(), names.end(), [&](auto n) {
        return known.count(n) > 0;
      });
      if (shares) added.push_back(line);
    }
    if (added.empty()) break;
    for (int line : added) {
      included.insert(line);
      known.insert(idents[line].begin(), idents[line].end());
    }
  }

  std::vector<int> ordered(included.begin(), included.end());
  const auto max_lines = static_cast<std::size_t>(cfg.max_slice_lines);
  if (ordered.size() > max_lines) {
    const auto pos = static_cast<std::size_t>(
        std::find(ordered.begin(), ordered.end(), candidate.line) -
        ordered.begin());
    const std::size_t half = (max_lines - 1) / 2;
    std::size_t first = pos > half ? pos - half : 0;
    first = std::min(first, ordered.size() - max_lines);
    ordered = std::vector<int>(ordered.begin() + static_cast<long>(first),
                               ordered.begin() + static_cast<long>(first + max_lines));
  }

  std::string out;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    if (i) out += '\n';
    out += lines[static_cast<std::size_t>(ordered[i] - 1)];
  }
  return out;
}

}  // namespace slicevuln
