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

#include "slicevuln/metrics.hpp"

#include <gtest/gtest.h>

#include <random>

#include "slicevuln/common.hpp"
#include "test_support.hpp"

namespace slicevuln {
namespace {

constexpr Label V = Label::Vulnerable;
constexpr Label N = Label::NonVulnerable;

ConfusionMatrix cm(std::uint64_t tp, std::uint64_t fp, std::uint64_t tn, std::uint64_t fn) {
  ConfusionMatrix m;
  m.tp = tp;
  m.fp = fp;
  m.tn = tn;
  m.fn = fn;
  return m;
}

ConfusionMatrix random_matrix(std::mt19937_64& gen) {
  return cm(1 + gen() % 5000, 1 + gen() % 5000, 1 + gen() % 5000, 1 + gen() % 5000);
}

TEST(ConfusionTest, AllCorrect) {
  const std::vector<Label> truth(10, V);
  EXPECT_EQ(confusion(truth, truth), cm(10, 0, 0, 0));
}

TEST(ConfusionTest, ComplementOfTruth) {
  std::vector<Label> truth, pred;
  for (int i = 0; i < 10; ++i) {
    truth.push_back(i % 2 ? V : N);
    pred.push_back(i % 2 ? N : V);
  }
  EXPECT_EQ(confusion(pred, truth), cm(0, 5, 0, 5));
}

TEST(ConfusionTest, BruteForceTally) {
  std::mt19937_64 gen(4);
  std::vector<Label> truth, pred;
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (int i = 0; i < 100; ++i) {
    const bool t = gen() % 2, p = gen() % 3 != 0;
    truth.push_back(t ? V : N);
    pred.push_back(p ? V : N);
    if (t && p) ++tp;
    if (!t && p) ++fp;
    if (!t && !p) ++tn;
    if (t && !p) ++fn;
  }
  EXPECT_EQ(confusion(pred, truth), cm(tp, fp, tn, fn));
}

TEST(ConfusionTest, InvalidInputs) {
  const std::vector<Label> a(3, V), b(4, V);
  EXPECT_THROW(confusion(a, b), ConfigError);
  EXPECT_THROW(confusion({}, {}), ConfigError);
}

TEST(ComputeTest, PerfectClassifier) {
  const MetricSet m = compute(cm(50, 0, 50, 0));
  for (const auto& v : metric_values(m)) {
    ASSERT_TRUE(v.has_value());
    EXPECT_DOUBLE_EQ(*v, 1.0);
  }
}

TEST(ComputeTest, DerivedExample) {
  const MetricSet m = compute(cm(40, 15, 35, 10));
  EXPECT_NEAR(*m.recall, 0.8, 1e-12);
  EXPECT_NEAR(*m.specificity, 0.7, 1e-12);
  EXPECT_NEAR(*m.precision, 40.0 / 55.0, 1e-12);
  EXPECT_NEAR(*m.f1, 80.0 / 105.0, 1e-12);
  EXPECT_NEAR(*m.accuracy, 0.75, 1e-12);
  EXPECT_NEAR(*m.mcc, 1250.0 / std::sqrt(55.0 * 50.0 * 50.0 * 45.0), 1e-12);
  EXPECT_NEAR(*m.precision, 0.72727, 1e-4);
  EXPECT_NEAR(*m.f1, 0.76190, 1e-4);
  EXPECT_NEAR(*m.mcc, 0.50252, 1e-4);
}

TEST(ComputeTest, ZeroDenominatorsAreUndefined) {
  const MetricSet m = compute(cm(0, 0, 7, 3));
  EXPECT_FALSE(m.precision.has_value());
  EXPECT_FALSE(m.mcc.has_value());
  EXPECT_FALSE(m.f1.has_value());
  ASSERT_TRUE(m.specificity.has_value());
  EXPECT_DOUBLE_EQ(*m.specificity, 1.0);
  EXPECT_DOUBLE_EQ(*m.recall, 0.0);
  EXPECT_THROW(compute(ConfusionMatrix{}), ConfigError);
}

TEST(ComputeTest, MatchesLongFormOracle) {
  std::mt19937_64 gen(1000);
  for (int iter = 0; iter < 1000; ++iter) {
    const ConfusionMatrix c = random_matrix(gen);
    const MetricSet m = compute(c);
    const auto o = testing::oracle_metrics(c.tp, c.fp, c.tn, c.fn);
    EXPECT_NEAR(*m.recall, o.recall, 1e-12);
    EXPECT_NEAR(*m.specificity, o.specificity, 1e-12);
    EXPECT_NEAR(*m.precision, o.precision, 1e-12);
    EXPECT_NEAR(*m.f1, o.f1, 1e-12);
    EXPECT_NEAR(*m.mcc, o.mcc, 1e-12);
    EXPECT_NEAR(*m.accuracy, o.accuracy, 1e-12);
  }
}

TEST(ComputeTest, RandomMatrixProperties) {
  std::mt19937_64 gen(17);
  for (int iter = 0; iter < 1000; ++iter) {
    const ConfusionMatrix c = random_matrix(gen);
    const MetricSet m = compute(c);
    EXPECT_GE(*m.f1, std::min(*m.precision, *m.recall) - 1e-15);
    EXPECT_LE(*m.f1, std::max(*m.precision, *m.recall) + 1e-15);
    EXPECT_GE(*m.mcc, -1.0);
    EXPECT_LE(*m.mcc, 1.0);
    // Flipping every prediction: tp<->fn, fp<->tn.
    const MetricSet flipped = compute(cm(c.fn, c.tn, c.fp, c.tp));
    EXPECT_NEAR(*flipped.mcc, -*m.mcc, 1e-12);
    EXPECT_NEAR(*flipped.recall, 1.0 - *m.recall, 1e-12);
    // Exchanging which class is positive: tp<->tn, fp<->fn.
    const MetricSet swapped = compute(cm(c.tn, c.fn, c.tp, c.fp));
    EXPECT_NEAR(*swapped.recall, *m.specificity, 1e-12);
    EXPECT_NEAR(*swapped.specificity, *m.recall, 1e-12);
    EXPECT_NEAR(*swapped.mcc, *m.mcc, 1e-12);
  }
}

TEST(AggregateTest, SingleKindIsIdentity) {
  const auto agg = aggregate({{Kind::PU, cm(3, 4, 5, 6)}});
  EXPECT_EQ(agg.overall, compute(cm(3, 4, 5, 6)));
  EXPECT_EQ(agg.per_kind.at(Kind::PU), agg.overall);
}

TEST(AggregateTest, IdenticalKinds) {
  const auto agg = aggregate({{Kind::API, cm(9, 2, 8, 1)}, {Kind::AE, cm(9, 2, 8, 1)}});
  const MetricSet one = compute(cm(9, 2, 8, 1));
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_NEAR(*metric_values(agg.overall)[i], *metric_values(one)[i], 1e-15);
  }
}

TEST(AggregateTest, PoolsBeforeComputing) {
  const std::map<Kind, ConfusionMatrix> m = {{Kind::API, cm(10, 2, 30, 4)},
                                             {Kind::AU, cm(1, 9, 3, 7)},
                                             {Kind::PU, cm(50, 5, 5, 50)},
                                             {Kind::AE, cm(2, 0, 1, 0)}};
  const auto agg = aggregate(m);
  EXPECT_EQ(agg.pooled, cm(63, 16, 39, 61));
  EXPECT_EQ(agg.overall, compute(cm(63, 16, 39, 61)));
  EXPECT_THROW(aggregate({}), ConfigError);
}

TEST(AggregateTest, InvariantToRepartitioning) {
  std::mt19937_64 gen(8);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<bool> truth, pred;
    std::vector<Kind> a_kind, b_kind;
    for (int i = 0; i < 200; ++i) {
      truth.push_back(gen() % 2);
      pred.push_back(gen() % 2);
      a_kind.push_back(kAllKinds[gen() % 4]);
      b_kind.push_back(kAllKinds[gen() % 4]);
    }
    auto tally = [&](const std::vector<Kind>& kinds) {
      std::map<Kind, ConfusionMatrix> m;
      for (int i = 0; i < 200; ++i) m[kinds[i]].add(pred[i] ? V : N, truth[i] ? V : N);
      return aggregate(m).overall;
    };
    EXPECT_EQ(tally(a_kind), tally(b_kind));
  }
}

TEST(FormatTest, PercentagesAndTable) {
  EXPECT_EQ(format_percent(0.72727272), "72.73");
  EXPECT_EQ(format_percent(std::nullopt), "n/a");
  const std::string table = format_table({{"API", compute(cm(40, 15, 35, 10))}});
  EXPECT_NE(table.find("80.00   70.00   72.73   76.19   50.25   75.00"), std::string::npos)
      << table;
  EXPECT_EQ(table.substr(0, table.find('\n')),
            "Kind  Recall   Spec.   Prec.      F1     MCC    Acc.");
}

TEST(FormatTest, CsvRoundTrip) {
  const MetricSet m = compute(cm(0, 0, 7, 3));
  const std::string row = csv_row("AU", m);
  EXPECT_EQ(row.substr(0, 3), "AU,");
  std::vector<std::optional<double>> values;
  std::stringstream ss(row.substr(3));
  std::string field;
  while (std::getline(ss, field, ',')) {
    if (!field.empty() && field.back() == '\n') field.pop_back();
    values.push_back(field.empty() ? std::nullopt : std::optional<double>(std::stod(field)));
  }
  values.resize(6);
  EXPECT_EQ(metrics_from_values(values), m);
  EXPECT_EQ(csv_header(), "name,recall,specificity,precision,f1,mcc,accuracy\n");
}

}  // namespace
}  // namespace slicevuln
