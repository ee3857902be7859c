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

#include "slicevuln/synthetic.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "slicevuln/common.hpp"

namespace slicevuln {

namespace {

constexpr std::array<const char*, 40> kNamePool = {
    "buf",   "dst",   "src",    "data",  "len",    "n",      "size",  "count",
    "p",     "q",     "node",   "ptr",   "str",    "input",  "out",   "tmp",
    "idx",   "pos",   "val",    "result", "total", "elem",   "extra", "a",
    "b",     "c",     "header", "packet", "msg",   "name",   "path",  "key",
    "entry", "item",  "offset", "limit", "cursor", "record", "chunk", "block"};

constexpr std::array<const char*, 6> kFieldPool = {"next", "length", "value",
                                                   "flags", "owner", "state"};

constexpr std::array<const char*, 6> kHelperPool = {
    "log_event", "update_stats", "check_state", "compute_hash", "notify",
    "process_item"};

class Ctx {
 public:
  explicit Ctx(std::uint64_t key) : rng_(key) {}

  // A fresh variable name, unique within the sample.
  std::string name() {
    while (true) {
      std::string n = kNamePool[rng_.uniform_below(kNamePool.size())];
      if (rng_.uniform() < 0.3) n += std::to_string(rng_.uniform_below(10));
      if (used_.insert(n).second) return n;
    }
  }
  std::string field() { return kFieldPool[rng_.uniform_below(kFieldPool.size())]; }
  std::string helper() {
    return kHelperPool[rng_.uniform_below(kHelperPool.size())];
  }
  std::string size() {
    static constexpr std::array<int, 6> kSizes = {8, 16, 32, 64, 128, 256};
    return std::to_string(kSizes[rng_.uniform_below(kSizes.size())]);
  }
  int range(int lo, int hi) {
    return lo + static_cast<int>(rng_.uniform_below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
  bool coin(double p) { return rng_.uniform() < p; }
  CounterRng& rng() { return rng_; }

 private:
  CounterRng rng_;
  std::set<std::string> used_;
};

using Lines = std::vector<std::string>;
using Template = std::function<Lines(Ctx&)>;

struct TemplateSet {
  std::vector<Template> easy;
  std::vector<Template> hard;
};

// ---- API ------------------------------------------------------------------

TemplateSet api_vulnerable() {
  TemplateSet t;
  t.easy = {
      [](Ctx& c) {
        auto d = c.name(), s = c.name();
        return Lines{"char " + d + "[" + c.size() + "];", "strcpy(" + d + ", " + s + ");"};
      },
      [](Ctx& c) {
        auto d = c.name(), s = c.name();
        return Lines{"char " + d + "[" + c.size() + "];",
                     "sprintf(" + d + ", \"%s\", " + s + ");"};
      },
      [](Ctx& c) {
        auto d = c.name();
        return Lines{"char " + d + "[" + c.size() + "];", "gets(" + d + ");"};
      },
      [](Ctx& c) {
        auto d = c.name(), s = c.name();
        return Lines{"char " + d + "[" + c.size() + "];", "strcat(" + d + ", " + s + ");"};
      },
  };
  t.hard = {
      [](Ctx& c) {  // bounded copy without room for the terminator
        auto d = c.name(), s = c.name();
        return Lines{"char " + d + "[" + c.size() + "];",
                     "strncpy(" + d + ", " + s + ", sizeof(" + d + "));"};
      },
      [](Ctx& c) {  // no room for the terminator
        auto d = c.name(), s = c.name();
        return Lines{"char " + d + "[" + c.size() + "];",
                     "if (strlen(" + s + ") <= sizeof(" + d + ")) {",
                     "    strcpy(" + d + ", " + s + ");", "}"};
      },
      [](Ctx& c) {
        auto d = c.name(), s = c.name(), l = c.name();
        return Lines{"char " + d + "[" + c.size() + "];",
                     "size_t " + l + " = strlen(" + s + ");",
                     "memcpy(" + d + ", " + s + ", " + l + ");"};
      },
  };
  return t;
}

TemplateSet api_safe() {
  TemplateSet t;
  t.easy = {
      [](Ctx& c) {
        auto d = c.name(), s = c.name();
        return Lines{"char " + d + "[" + c.size() + "];",
                     "strncpy(" + d + ", " + s + ", sizeof(" + d + ") - 1);",
                     d + "[sizeof(" + d + ") - 1] = '\\0';"};
      },
      [](Ctx& c) {
        auto d = c.name(), s = c.name();
        return Lines{"char " + d + "[" + c.size() + "];",
                     "snprintf(" + d + ", sizeof(" + d + "), \"%s\", " + s + ");"};
      },
      [](Ctx& c) {
        auto d = c.name();
        return Lines{"char " + d + "[" + c.size() + "];",
                     "fgets(" + d + ", sizeof(" + d + "), stdin);"};
      },
      [](Ctx& c) {
        auto d = c.name(), s = c.name(), l = c.name();
        return Lines{"char " + d + "[" + c.size() + "];",
                     "size_t " + l + " = strlen(" + s + ");",
                     "if (" + l + " >= sizeof(" + d + ")) {", "    return -1;", "}",
                     "memcpy(" + d + ", " + s + ", " + l + ");"};
      },
  };
  t.hard = {
      [](Ctx& c) {
        auto d = c.name(), s = c.name();
        return Lines{"char " + d + "[" + c.size() + "];",
                     "if (strlen(" + s + ") < sizeof(" + d + ")) {",
                     "    strcpy(" + d + ", " + s + ");", "}"};
      },
      [](Ctx& c) {  // constant source fits
        auto d = c.name();
        return Lines{"char " + d + "[" + c.size() + "];",
                     "strcpy(" + d + ", \"ok\");"};
      },
  };
  return t;
}

// ---- AU -------------------------------------------------------------------

TemplateSet au_vulnerable() {
  TemplateSet t;
  t.easy = {
      [](Ctx& c) {
        auto a = c.name(), i = c.name(), v = c.name();
        const auto n = c.size();
        return Lines{"int " + a + "[" + n + "];",
                     "for (" + i + " = 0; " + i + " <= " + n + "; " + i + "++) {",
                     "    " + a + "[" + i + "] = " + v + ";", "}"};
      },
      [](Ctx& c) {
        auto a = c.name(), idx = c.name(), v = c.name();
        return Lines{"int " + a + "[" + c.size() + "];",
                     a + "[" + idx + "] = " + v + ";"};
      },
      [](Ctx& c) {
        auto b = c.name();
        const auto n = c.size();
        return Lines{"char " + b + "[" + n + "];", b + "[" + n + "] = '\\0';"};
      },
  };
  t.hard = {
      [](Ctx& c) {  // off-by-one bound check
        auto a = c.name(), idx = c.name(), v = c.name();
        const auto n = c.size();
        return Lines{"int " + a + "[" + n + "];",
                     "if (" + idx + " <= " + n + ") {",
                     "    " + a + "[" + idx + "] = " + v + ";", "}"};
      },
      [](Ctx& c) {  // byte count used as element count
        auto a = c.name(), i = c.name();
        return Lines{"int " + a + "[" + c.size() + "];",
                     "for (" + i + " = 0; " + i + " < sizeof(" + a + "); " + i + "++) {",
                     "    " + a + "[" + i + "] = 0;", "}"};
      },
  };
  return t;
}

TemplateSet au_safe() {
  TemplateSet t;
  t.easy = {
      [](Ctx& c) {
        auto a = c.name(), i = c.name(), v = c.name();
        const auto n = c.size();
        return Lines{"int " + a + "[" + n + "];",
                     "for (" + i + " = 0; " + i + " < " + n + "; " + i + "++) {",
                     "    " + a + "[" + i + "] = " + v + ";", "}"};
      },
      [](Ctx& c) {
        auto a = c.name(), idx = c.name(), v = c.name();
        const auto n = c.size();
        return Lines{"int " + a + "[" + n + "];",
                     "if (" + idx + " >= 0 && " + idx + " < " + n + ") {",
                     "    " + a + "[" + idx + "] = " + v + ";", "}"};
      },
      [](Ctx& c) {
        auto b = c.name();
        const auto n = c.size();
        return Lines{"char " + b + "[" + n + "];", b + "[" + n + " - 1] = '\\0';"};
      },
  };
  t.hard = {
      [](Ctx& c) {
        auto a = c.name(), idx = c.name(), v = c.name();
        const auto n = c.size();
        return Lines{"int " + a + "[" + n + "];",
                     "if (" + idx + " < " + n + ") {",
                     "    " + a + "[" + idx + "] = " + v + ";", "}"};
      },
      [](Ctx& c) {
        auto a = c.name(), i = c.name();
        return Lines{"int " + a + "[" + c.size() + "];",
                     "for (" + i + " = 0; " + i + " < sizeof(" + a + ") / sizeof(" +
                         a + "[0]); " + i + "++) {",
                     "    " + a + "[" + i + "] = 0;", "}"};
      },
      [](Ctx& c) {
        auto a = c.name(), v = c.name();
        return Lines{"int " + a + "[" + c.size() + "];", a + "[0] = " + v + ";"};
      },
  };
  return t;
}

// ---- PU -------------------------------------------------------------------

TemplateSet pu_vulnerable() {
  TemplateSet t;
  t.easy = {
      [](Ctx& c) {  // use after free
        auto p = c.name(), v = c.name();
        return Lines{"free(" + p + ");", "*" + p + " = " + v + ";"};
      },
      [](Ctx& c) {  // unchecked allocation
        auto p = c.name(), v = c.name();
        return Lines{p + " = malloc(sizeof(*" + p + "));",
                     p + "->" + c.field() + " = " + v + ";"};
      },
      [](Ctx& c) {  // double free
        auto p = c.name();
        return Lines{"free(" + p + ");", "free(" + p + ");"};
      },
  };
  t.hard = {
      [](Ctx& c) {  // unchecked allocation, then cleared
        auto p = c.name();
        return Lines{p + " = malloc(sizeof(*" + p + "));",
                     "memset(" + p + ", 0, sizeof(*" + p + "));"};
      },
      [](Ctx& c) {  // read after free
        auto p = c.name(), v = c.name();
        return Lines{"free(" + p + ");", v + " = " + p + "->" + c.field() + ";"};
      },
  };
  return t;
}

TemplateSet pu_safe() {
  TemplateSet t;
  t.easy = {
      [](Ctx& c) {
        auto p = c.name();
        return Lines{"free(" + p + ");", p + " = NULL;"};
      },
      [](Ctx& c) {
        auto p = c.name(), v = c.name();
        return Lines{p + " = malloc(sizeof(*" + p + "));",
                     "if (" + p + " == NULL) {", "    return -1;", "}",
                     p + "->" + c.field() + " = " + v + ";"};
      },
      [](Ctx& c) {
        auto p = c.name(), v = c.name();
        return Lines{"if (" + p + " != NULL) {", "    *" + p + " = " + v + ";", "}"};
      },
  };
  t.hard = {
      [](Ctx& c) {  // use, then free
        auto p = c.name(), v = c.name();
        return Lines{p + "->" + c.field() + " = " + v + ";", "free(" + p + ");",
                     p + " = NULL;"};
      },
      [](Ctx& c) {  // points at a local
        auto p = c.name(), x = c.name(), v = c.name();
        return Lines{"int " + x + " = 0;", "int *" + p + " = &" + x + ";",
                     "*" + p + " = " + v + ";"};
      },
  };
  return t;
}

// ---- AE -------------------------------------------------------------------

TemplateSet ae_vulnerable() {
  TemplateSet t;
  t.easy = {
      [](Ctx& c) {
        auto size = c.name(), count = c.name(), elem = c.name(), buf = c.name();
        return Lines{size + " = " + count + " * " + elem + ";",
                     buf + " = malloc(" + size + ");"};
      },
      [](Ctx& c) {
        auto r = c.name(), a = c.name(), b = c.name();
        return Lines{r + " = " + a + " / " + b + ";"};
      },
      [](Ctx& c) {
        auto total = c.name(), len = c.name(), extra = c.name(), buf = c.name();
        return Lines{total + " = " + len + " + " + extra + ";",
                     buf + " = malloc(" + total + ");"};
      },
  };
  t.hard = {
      [](Ctx& c) {  // unchecked modulus
        auto r = c.name(), a = c.name(), b = c.name();
        return Lines{r + " = " + a + " % " + b + ";"};
      },
      [](Ctx& c) {  // subtraction may wrap before allocation
        auto n = c.name(), a = c.name(), b = c.name(), buf = c.name();
        return Lines{n + " = " + a + " - " + b + ";", buf + " = malloc(" + n + ");"};
      },
  };
  return t;
}

TemplateSet ae_safe() {
  TemplateSet t;
  t.easy = {
      [](Ctx& c) {
        auto size = c.name(), count = c.name(), elem = c.name(), buf = c.name();
        return Lines{"if (" + elem + " != 0 && " + count + " > SIZE_MAX / " + elem + ") {",
                     "    return -1;", "}", size + " = " + count + " * " + elem + ";",
                     buf + " = malloc(" + size + ");"};
      },
      [](Ctx& c) {
        auto r = c.name(), a = c.name(), b = c.name();
        return Lines{"if (" + b + " == 0) {", "    return -1;", "}",
                     r + " = " + a + " / " + b + ";"};
      },
      [](Ctx& c) {
        auto total = c.name(), len = c.name(), extra = c.name(), buf = c.name();
        return Lines{"if (" + len + " > SIZE_MAX - " + extra + ") {", "    return -1;",
                     "}", total + " = " + len + " + " + extra + ";",
                     buf + " = malloc(" + total + ");"};
      },
  };
  t.hard = {
      [](Ctx& c) {  // constant divisor
        auto r = c.name(), a = c.name();
        return Lines{r + " = " + a + (c.coin(0.5) ? " / " : " % ") +
                     std::to_string(c.range(2, 9)) + ";"};
      },
      [](Ctx& c) {  // constant-size allocation
        auto size = c.name(), buf = c.name();
        return Lines{size + " = " + std::to_string(c.range(2, 8)) + " * " +
                         std::to_string(c.range(2, 64)) + ";",
                     buf + " = malloc(" + size + ");"};
      },
  };
  return t;
}

const TemplateSet& templates(Kind kind, Label label) {
  static const std::array<std::array<TemplateSet, 2>, kNumKinds> kAll = {{
      {api_safe(), api_vulnerable()},
      {au_safe(), au_vulnerable()},
      {pu_safe(), pu_vulnerable()},
      {ae_safe(), ae_vulnerable()},
  }};
  return kAll[static_cast<std::size_t>(kind)][to_int(label)];
}

std::string distractor(Ctx& c) {
  switch (c.range(0, 6)) {
    case 0:
      return "int " + c.name() + " = " + std::to_string(c.range(0, 99)) + ";";
    case 1:
      return c.name() + "++;";
    case 2:
      return "printf(\"%d\\n\", " + c.name() + ");";
    case 3: {
      auto v = c.name();
      return "if (" + v + " > " + std::to_string(c.range(0, 9)) + ") " + v + " = 0;";
    }
    case 4:
      return c.helper() + "(" + c.name() + ");";
    case 5: {
      auto v = c.name();
      return v + " = " + c.helper() + "(" + v + ");";
    }
    default:
      return "/* " + c.helper() + " */";
  }
}

}  // namespace

Manifest desk_manifest(std::uint64_t total) {
  static constexpr std::array<std::array<double, 2>, kNumKinds> kBase = {{
      {350, 150}, {230, 120}, {650, 250}, {170, 80}}};
  Manifest m;
  std::uint64_t assigned = 0;
  for (Kind k : kAllKinds) {
    for (Label label : {Label::NonVulnerable, Label::Vulnerable}) {
      const double share = kBase[static_cast<std::size_t>(k)][to_int(label)] / 2000.0;
      const auto n = static_cast<std::uint64_t>(std::llround(share * static_cast<double>(total)));
      m.set(k, label, n);
      assigned += n;
    }
  }
  // Rounding slack goes to the largest cell.
  const auto pu_non = m.non_vulnerable(Kind::PU);
  m.set(Kind::PU, Label::NonVulnerable,
        static_cast<std::uint64_t>(static_cast<long long>(pu_non) +
                                   static_cast<long long>(total) -
                                   static_cast<long long>(assigned)));
  return m;
}

SampleSet generate_synthetic(const SyntheticOptions& opts) {
  if (opts.min_distractors < 0 || opts.max_distractors < opts.min_distractors) {
    throw ConfigError("synthetic: invalid distractor range");
  }
  std::vector<Sample> samples;
  samples.reserve(opts.counts.total());
  for (Kind k : kAllKinds) {
    for (Label label : {Label::Vulnerable, Label::NonVulnerable}) {
      const TemplateSet& set = templates(k, label);
      for (std::uint64_t i = 0; i < opts.counts.count(k, label); ++i) {
        Ctx c(derive_key(opts.seed, 0x5e7ULL, static_cast<int>(k), to_int(label), i));
        const bool hard = !set.hard.empty() && c.coin(opts.hard_fraction);
        const auto& pool = hard ? set.hard : set.easy;
        Lines planted = pool[c.rng().uniform_below(pool.size())](c);
        const int before = c.range(opts.min_distractors, opts.max_distractors);
        const int after = c.range(0, 1);
        Lines lines;
        for (int d = 0; d < before; ++d) lines.push_back(distractor(c));
        lines.insert(lines.end(), planted.begin(), planted.end());
        for (int d = 0; d < after; ++d) lines.push_back(distractor(c));

        Sample s;
        s.id = "syn-" + std::string(to_string(k)) + "-" +
               std::to_string(to_int(label)) + "-" + std::to_string(i);
        s.kind = k;
        s.label = label;
        for (const auto& line : lines) {
          s.code += line;
          s.code += '\n';
        }
        s.source = std::string("synthetic:") + (hard ? "hard" : "easy");
        samples.push_back(std::move(s));
      }
    }
  }
  return SampleSet(std::move(samples));
}

}  // namespace slicevuln
