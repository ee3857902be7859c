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

#include <gtest/gtest.h>

#include <map>

#include "slicevuln/slicer.hpp"
#include "slicevuln/tokenizer.hpp"

namespace slicevuln {
namespace {

TEST(DeskManifest, DefaultCounts) {
  const Manifest m = desk_manifest();
  EXPECT_EQ(m.vulnerable(Kind::API), 150u);
  EXPECT_EQ(m.non_vulnerable(Kind::API), 350u);
  EXPECT_EQ(m.vulnerable(Kind::AU), 120u);
  EXPECT_EQ(m.non_vulnerable(Kind::AU), 230u);
  EXPECT_EQ(m.vulnerable(Kind::PU), 250u);
  EXPECT_EQ(m.non_vulnerable(Kind::PU), 650u);
  EXPECT_EQ(m.vulnerable(Kind::AE), 80u);
  EXPECT_EQ(m.non_vulnerable(Kind::AE), 170u);
  EXPECT_EQ(m.total(), 2000u);
}

TEST(DeskManifest, TotalIsExactForAnySize) {
  for (std::uint64_t total : {64u, 100u, 333u, 999u, 2001u}) {
    EXPECT_EQ(desk_manifest(total).total(), total) << total;
  }
}

TEST(Synthetic, CountsMatchManifest) {
  SyntheticOptions opts;
  opts.counts = desk_manifest(500);
  const auto set = generate_synthetic(opts);
  EXPECT_EQ(set.size(), 500u);
  EXPECT_EQ(set.manifest(), opts.counts);
  EXPECT_EQ(recount(set.samples()), opts.counts);
}

TEST(Synthetic, DeterministicPerSeed) {
  SyntheticOptions opts;
  opts.counts = desk_manifest(200);
  const auto a = generate_synthetic(opts);
  const auto b = generate_synthetic(opts);
  EXPECT_EQ(a.samples(), b.samples());
  opts.seed = 43;
  const auto c = generate_synthetic(opts);
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a[i].code == c[i].code;
  EXPECT_LT(same, a.size() / 2);
}

TEST(Synthetic, HardFractionSelectsTemplates) {
  SyntheticOptions opts;
  opts.counts = desk_manifest(200);
  opts.hard_fraction = 0.0;
  for (const auto& s : generate_synthetic(opts)) EXPECT_EQ(s.source, "synthetic:easy");
  opts.hard_fraction = 1.0;
  for (const auto& s : generate_synthetic(opts)) EXPECT_EQ(s.source, "synthetic:hard");
}

TEST(Synthetic, EverySampleLexesAndRoundTrips) {
  SyntheticOptions opts;
  opts.counts = desk_manifest(400);
  opts.hard_fraction = 0.5;
  for (const auto& s : generate_synthetic(opts)) {
    const auto tokens = lex(s.code);
    std::string rebuilt;
    for (const auto& t : tokens) rebuilt += t.text;
    EXPECT_EQ(rebuilt, s.code) << s.id;
  }
}

TEST(Synthetic, NormalizedTextNeverCarriesBothLabels) {
  SyntheticOptions opts;
  opts.counts = desk_manifest(2000);
  NormalizeOptions norm;
  norm.preserved = default_api_list();
  std::map<std::string, Label> seen;
  for (const auto& s : generate_synthetic(opts)) {
    const auto text = normalize(s.code, norm);
    const auto [it, inserted] = seen.emplace(text, s.label);
    if (!inserted) EXPECT_EQ(it->second, s.label) << s.id << "\n" << s.code;
  }
}

TEST(Synthetic, InvalidDistractorRange) {
  SyntheticOptions opts;
  opts.min_distractors = 3;
  opts.max_distractors = 1;
  EXPECT_THROW(generate_synthetic(opts), ConfigError);
}

}  // namespace
}  // namespace slicevuln
