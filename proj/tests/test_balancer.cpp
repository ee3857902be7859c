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

#include "slicevuln/balancer.hpp"

#include <gtest/gtest.h>

#include <set>

#include "slicevuln/common.hpp"
#include "test_support.hpp"

namespace slicevuln {
namespace {

Manifest table_one() {
  return parse_manifest_json(
      read_file(std::string(SLICEVULN_SOURCE_DIR) + "/data/reference_manifest.json"));
}

const SampleSet& reference_corpus() {
  static const SampleSet set = synthesize_from_manifest(table_one());
  return set;
}

std::set<std::string> ids_of(const SampleSet& set) {
  std::set<std::string> out;
  for (const auto& s : set) out.insert(s.id);
  return out;
}

void expect_class_balance(const BalancedSet& b) {
  const Manifest& m = b.samples.manifest();
  for (Kind k : kAllKinds) EXPECT_EQ(m.vulnerable(k), m.non_vulnerable(k)) << to_string(k);
  EXPECT_EQ(m, recount(b.samples.samples()));
}

TEST(BalanceH1Test, ReferenceCorpusTotals) {
  const BalancedSet b = balance_h1(reference_corpus(), 42);
  const Manifest& m = b.samples.manifest();
  EXPECT_EQ(m.kind_total(Kind::API), 27206u);
  EXPECT_EQ(m.kind_total(Kind::AU), 21852u);
  EXPECT_EQ(m.kind_total(Kind::PU), 56782u);
  EXPECT_EQ(m.kind_total(Kind::AE), 6950u);
  EXPECT_EQ(m.total(), 112790u);
  expect_class_balance(b);
  EXPECT_EQ(b.hypothesis, Hypothesis::H1);
}

TEST(BalanceH2Test, ReferenceCorpusTotals) {
  const BalancedSet b = balance_h2(reference_corpus(), 42);
  const Manifest& m = b.samples.manifest();
  for (Kind k : kAllKinds) {
    EXPECT_EQ(m.vulnerable(k), 3475u);
    EXPECT_EQ(m.kind_total(k), 6950u);
  }
  EXPECT_EQ(m.total(), 27800u);
  expect_class_balance(b);
}

TEST(BalanceH2Test, RemovingOneVulnerableAeSample) {
  Manifest m = table_one();
  m.set(Kind::AE, Label::Vulnerable, m.vulnerable(Kind::AE) - 1);
  const BalancedSet b = balance_h2(synthesize_from_manifest(m), 42);
  EXPECT_EQ(b.samples.manifest().vulnerable(Kind::API), 3474u);
  EXPECT_EQ(b.samples.size(), 27792u);
}

TEST(BalanceH2Test, EqualCountsKeepEveryVulnerableSample) {
  Manifest m;
  for (Kind k : kAllKinds) {
    m.set(k, Label::Vulnerable, 7);
    m.set(k, Label::NonVulnerable, 20);
  }
  const SampleSet corpus = synthesize_from_manifest(m);
  const BalancedSet b = balance_h2(corpus, 1);
  EXPECT_EQ(b.samples.size(), 56u);
  for (const auto& s : corpus) {
    if (s.label == Label::Vulnerable) EXPECT_TRUE(b.samples.contains(s.id));
  }
}

TEST(RemainderTest, ReferenceCorpusRemainder) {
  const SampleSet& corpus = reference_corpus();
  const BalancedSet b = balance_h2(corpus, 42);
  const SampleSet rest = remainder(corpus, b.samples);
  EXPECT_EQ(rest.size(), 392827u);
  EXPECT_EQ(rest.size() + b.samples.size(), corpus.size());
  for (const auto& s : b.samples) EXPECT_FALSE(rest.contains(s.id));
}

TEST(RemainderTest, IdentityAndSelfSubtraction) {
  Manifest m;
  m.set(Kind::PU, Label::Vulnerable, 4);
  m.set(Kind::PU, Label::NonVulnerable, 6);
  const SampleSet corpus = synthesize_from_manifest(m);
  EXPECT_EQ(remainder(corpus, corpus).size(), 0u);
  EXPECT_EQ(remainder(corpus, SampleSet{}).samples(), corpus.samples());
  SampleSet stranger;
  stranger.add({"elsewhere", Kind::PU, Label::Vulnerable, "x;", std::nullopt});
  EXPECT_THROW(remainder(corpus, stranger), DataError);
}

TEST(BalanceTest, DeterministicForSeed) {
  const SampleSet& corpus = reference_corpus();
  EXPECT_EQ(ids_of(balance_h1(corpus, 42).samples), ids_of(balance_h1(corpus, 42).samples));
  EXPECT_EQ(balance_h2(corpus, 7).samples.samples(), balance_h2(corpus, 7).samples.samples());
}

TEST(BalanceTest, SeedChangesSelectionNotCounts) {
  const SampleSet& corpus = reference_corpus();
  const BalancedSet a = balance_h2(corpus, 1);
  const BalancedSet b = balance_h2(corpus, 2);
  EXPECT_EQ(a.samples.manifest(), b.samples.manifest());
  EXPECT_NE(ids_of(a.samples), ids_of(b.samples));
}

TEST(BalanceTest, InputOrderDoesNotMatter) {
  Manifest m;
  for (Kind k : kAllKinds) {
    m.set(k, Label::Vulnerable, 5 + static_cast<int>(k));
    m.set(k, Label::NonVulnerable, 30);
  }
  const SampleSet corpus = synthesize_from_manifest(m);
  std::vector<Sample> reversed(corpus.samples().rbegin(), corpus.samples().rend());
  for (Hypothesis h : {Hypothesis::H1, Hypothesis::H2}) {
    EXPECT_EQ(balance(corpus, h, 9).samples.samples(),
              balance(SampleSet(reversed), h, 9).samples.samples());
  }
}

TEST(BalanceTest, SubsetAndTotalsOnRandomCorpora) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    CounterRng rng(derive_key(seed, 77));
    Manifest m;
    std::uint64_t vul_total = 0, min_vul = ~0ULL;
    for (Kind k : kAllKinds) {
      const auto v = 1 + rng.uniform_below(30);
      m.set(k, Label::Vulnerable, v);
      m.set(k, Label::NonVulnerable, v + rng.uniform_below(40));
      vul_total += v;
      min_vul = std::min(min_vul, v);
    }
    const SampleSet corpus = synthesize_from_manifest(m);
    const BalancedSet h1 = balance_h1(corpus, seed);
    const BalancedSet h2 = balance_h2(corpus, seed);
    EXPECT_EQ(h1.samples.size(), 2 * vul_total);
    EXPECT_EQ(h2.samples.size(), 8 * min_vul);
    for (const BalancedSet* b : {&h1, &h2}) {
      expect_class_balance(*b);
      for (const auto& s : b->samples) {
        const Sample* orig = corpus.find(s.id);
        ASSERT_NE(orig, nullptr);
        EXPECT_EQ(*orig, s);
      }
    }
  }
}

TEST(BalanceTest, ZeroVulnerableKindContributesNothingUnderH1) {
  Manifest m;
  m.set(Kind::API, Label::Vulnerable, 3);
  m.set(Kind::API, Label::NonVulnerable, 5);
  m.set(Kind::AU, Label::NonVulnerable, 9);
  const BalancedSet b = balance_h1(synthesize_from_manifest(m), 42);
  EXPECT_EQ(b.samples.manifest().kind_total(Kind::AU), 0u);
  EXPECT_EQ(b.samples.size(), 6u);
}

TEST(BalanceTest, ShortPoolsAreErrorsNamingTheKind) {
  Manifest m;
  for (Kind k : kAllKinds) {
    m.set(k, Label::Vulnerable, 5);
    m.set(k, Label::NonVulnerable, 10);
  }
  m.set(Kind::PU, Label::NonVulnerable, 4);
  try {
    balance_h1(synthesize_from_manifest(m), 1);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("PU"), std::string::npos) << e.what();
  }
  m.set(Kind::PU, Label::NonVulnerable, 10);
  m.set(Kind::AE, Label::NonVulnerable, 0);
  EXPECT_THROW(balance_h2(synthesize_from_manifest(m), 1), DataError);
  m.set(Kind::AE, Label::NonVulnerable, 10);
  m.set(Kind::AE, Label::Vulnerable, 0);
  EXPECT_THROW(balance_h2(synthesize_from_manifest(m), 1), DataError);
}

TEST(BalanceTest, ManifestSidecar) {
  Manifest m;
  for (Kind k : kAllKinds) {
    m.set(k, Label::Vulnerable, 2);
    m.set(k, Label::NonVulnerable, 3);
  }
  const BalancedSet b = balance_h2(synthesize_from_manifest(m), 5);
  const std::string json = balanced_manifest_json(b);
  EXPECT_NE(json.find("\"hypothesis\": \"H2\""), std::string::npos) << json;
  EXPECT_NE(json.find("\"total\": 16"), std::string::npos) << json;
  EXPECT_NE(json.find("\"seed\": 5"), std::string::npos) << json;
  EXPECT_EQ(parse_hypothesis("h1"), Hypothesis::H1);
  EXPECT_THROW(parse_hypothesis("h3"), ConfigError);
}

}  // namespace
}  // namespace slicevuln
