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

// Binary confusion matrices (Vulnerable is the positive class) and the six
// reported metrics: recall, specificity, precision, F1, MCC, accuracy.

#ifndef SLICEVULN_METRICS_HPP_
#define SLICEVULN_METRICS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slicevuln/corpus.hpp"

namespace slicevuln {

struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + fp + tn + fn; }
  void add(Label predicted, Label truth);

  ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
  }
  friend ConfusionMatrix operator+(ConfusionMatrix a, const ConfusionMatrix& b) {
    return a += b;
  }
  bool operator==(const ConfusionMatrix&) const = default;
};

// A metric is nullopt when its denominator is zero.
struct MetricSet {
  std::optional<double> recall;
  std::optional<double> specificity;
  std::optional<double> precision;
  std::optional<double> f1;
  std::optional<double> mcc;
  std::optional<double> accuracy;

  bool operator==(const MetricSet&) const = default;
};

// Throws ConfigError on length mismatch or empty input.
ConfusionMatrix confusion(std::span<const Label> predictions,
                          std::span<const Label> truth);

// Throws ConfigError when the matrix is empty.
MetricSet compute(const ConfusionMatrix& cm);

struct Aggregate {
  std::map<Kind, MetricSet> per_kind;
  MetricSet overall;
  ConfusionMatrix pooled;
};

// Overall metrics are computed on the summed matrix (micro-averaging).
Aggregate aggregate(const std::map<Kind, ConfusionMatrix>& per_kind);

// Column order used by every serialization.
inline constexpr const char* kMetricNames[] = {"recall", "specificity",
                                               "precision", "f1",
                                               "mcc", "accuracy"};
std::vector<std::optional<double>> metric_values(const MetricSet& m);
MetricSet metrics_from_values(const std::vector<std::optional<double>>& values);

// Two-decimal percentage, "n/a" when undefined.
std::string format_percent(const std::optional<double>& value);

// "name,recall,...,accuracy" rows with full precision; undefined is empty.
std::string csv_header();
std::string csv_row(const std::string& name, const MetricSet& m);

// Aligned text table in the layout Recall Spec. Prec. F1 MCC Acc.
std::string format_table(const std::vector<std::pair<std::string, MetricSet>>& rows);

}  // namespace slicevuln

#endif  // SLICEVULN_METRICS_HPP_
