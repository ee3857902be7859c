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

// Helpers shared by the unit tests and the acceptance runner: golden slicer
// corpus loading, an independent metric oracle and random slice generation.

#ifndef SLICEVULN_TESTS_TEST_SUPPORT_HPP_
#define SLICEVULN_TESTS_TEST_SUPPORT_HPP_

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "slicevuln/common.hpp"
#include "slicevuln/corpus.hpp"
#include "slicevuln/metrics.hpp"
#include "slicevuln/slicer.hpp"
#include "slicevuln/tokenizer.hpp"

namespace slicevuln::testing {

inline std::string data_path(const std::string& rel) {
  return std::string(SLICEVULN_TEST_DATA) + "/" + rel;
}

// One hand label: kind, line, and the column of the n-th occurrence of
// `site` on that line (identifiers match whole words only).
struct GoldenLabel {
  Kind kind;
  int line;
  int column;
  std::string focus;

  auto key() const { return std::tie(line, column, kind, focus); }
  bool operator==(const GoldenLabel& o) const { return key() == o.key(); }
  bool operator<(const GoldenLabel& o) const { return key() < o.key(); }
};

struct GoldenCase {
  std::string name;
  std::string source;
  std::vector<GoldenLabel> labels;
};

inline int locate(const std::string& line_text, const std::string& site, int occurrence) {
  const bool word = std::isalpha(static_cast<unsigned char>(site[0])) || site[0] == '_';
  auto is_word = [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
  };
  int seen = 0;
  for (std::size_t pos = line_text.find(site); pos != std::string::npos;
       pos = line_text.find(site, pos + 1)) {
    if (word) {
      const bool left = pos > 0 && is_word(line_text[pos - 1]);
      const std::size_t end = pos + site.size();
      const bool right = end < line_text.size() && is_word(line_text[end]);
      if (left || right) continue;
    }
    if (++seen == occurrence) return static_cast<int>(pos) + 1;
  }
  throw DataError("site '" + site + "' not found on line: " + line_text);
}

inline std::vector<GoldenCase> load_golden() {
  namespace fs = std::filesystem;
  std::vector<GoldenCase> cases;
  const fs::path dir = data_path("golden");
  std::vector<fs::path> sources;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".c") sources.push_back(entry.path());
  }
  std::sort(sources.begin(), sources.end());
  for (const auto& src : sources) {
    GoldenCase gc;
    gc.name = src.stem().string();
    gc.source = read_file(src.string());
    const auto lines = split_lines(gc.source);
    fs::path expected = src;
    expected.replace_extension(".expected");
    for (const auto& raw : split_lines(read_file(expected.string()))) {
      if (raw.empty() || raw[0] == '#') continue;
      std::istringstream in(raw);
      std::string kind, site, focus;
      int line = 0, occurrence = 0;
      in >> kind >> line >> site >> occurrence >> focus;
      if (!in || line < 1 || line > static_cast<int>(lines.size())) {
        throw DataError(gc.name + ": bad label line '" + raw + "'");
      }
      gc.labels.push_back(GoldenLabel{parse_kind(kind), line,
                                      locate(lines[line - 1], site, occurrence), focus});
    }
    std::sort(gc.labels.begin(), gc.labels.end());
    cases.push_back(std::move(gc));
  }
  return cases;
}

inline SliceConfig golden_config() {
  SliceConfig cfg = default_slice_config();
  cfg.api_list = load_api_list(data_path("golden/api_list.txt"));
  return cfg;
}

inline std::vector<GoldenLabel> as_labels(const std::vector<Candidate>& cands) {
  std::vector<GoldenLabel> out;
  for (const auto& c : cands) out.push_back({c.kind, c.line, c.column, c.focus});
  std::sort(out.begin(), out.end());
  return out;
}

// Textbook formulas evaluated step by step in long double.
struct OracleMetrics {
  double recall, specificity, precision, f1, mcc, accuracy;
};

inline OracleMetrics oracle_metrics(double tp, double fp, double tn, double fn) {
  const long double TP = tp, FP = fp, TN = tn, FN = fn;
  const long double rec = TP / (TP + FN);
  const long double spec = TN / (TN + FP);
  const long double prec = TP / (TP + FP);
  const long double f1 = 2.0L * TP / (2.0L * TP + FP + FN);
  const long double acc = (TP + TN) / (TP + TN + FP + FN);
  const long double num = TP * TN - FP * FN;
  const long double den = std::sqrt((TP + FP) * (TP + FN) * (TN + FP) * (TN + FN));
  return {static_cast<double>(rec), static_cast<double>(spec),
          static_cast<double>(prec), static_cast<double>(f1),
          static_cast<double>(num / den), static_cast<double>(acc)};
}

// Random slices over a small grammar of statements.
class SliceGenerator {
 public:
  explicit SliceGenerator(std::uint64_t seed) : gen_(seed) {}

  std::string next() {
    std::string s;
    const int n = 1 + pick(8);
    for (int i = 0; i < n; ++i) s += statement() + (pick(3) == 0 ? "\n" : " ");
    return s;
  }

  int pick(int n) { return static_cast<int>(gen_() % static_cast<unsigned>(n)); }

 private:
  std::string name() {
    static const char* kNames[] = {"a", "buf", "len", "p", "q", "node", "tmp",
                                   "idx", "out", "src", "dst", "k2", "x_y"};
    return kNames[pick(13)];
  }
  std::string func() {
    static const char* kFuncs[] = {"helper", "strcpy", "memcpy", "run", "check"};
    return kFuncs[pick(5)];
  }
  std::string number() {
    return pick(2) ? std::to_string(pick(100)) : std::to_string(100000 + pick(9000));
  }
  std::string operand() {
    switch (pick(4)) {
      case 0: return number();
      case 1: return "\"s" + std::to_string(pick(5)) + "\"";
      default: return name();
    }
  }
  std::string statement() {
    switch (pick(7)) {
      case 0: return "int " + name() + " = " + operand() + ";";
      case 1: return name() + " = " + operand() + " + " + operand() + ";";
      case 2: return func() + "(" + name() + ", " + operand() + ");";
      case 3: return name() + "[" + name() + "] = " + operand() + ";";
      case 4: return "if (" + name() + " > " + number() + ") { " + name() + "++; }";
      case 5: return "*" + name() + " = " + name() + "->next; /* note */";
      default: return "char " + name() + "[" + number() + "]; // c";
    }
  }

  std::mt19937_64 gen_;
};

// Consistent renaming of every non-preserved identifier.
inline std::string rename_all(const std::string& src, const NormalizeOptions& opts) {
  std::string out;
  std::map<std::string, std::string> mapping;
  for (const auto& t : lex(src)) {
    if (t.cls == TokenClass::Identifier && !opts.preserved.count(t.text) &&
        !is_type_name(t.text)) {
      auto [it, inserted] = mapping.try_emplace(t.text, "");
      if (inserted) it->second = "renamed" + std::to_string(mapping.size()) + "z";
      out += it->second;
    } else {
      out += t.text;
    }
  }
  return out;
}

}  // namespace slicevuln::testing

#endif  // SLICEVULN_TESTS_TEST_SUPPORT_HPP_
