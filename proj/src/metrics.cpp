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

#include <cmath>
#include <cstdio>
#include <sstream>

#include "slicevuln/common.hpp"

namespace slicevuln {

void ConfusionMatrix::add(Label predicted, Label truth) {
  const bool pred_pos = predicted == Label::Vulnerable;
  const bool true_pos = truth == Label::Vulnerable;
  if (pred_pos && true_pos) {
    ++tp;
  } else if (pred_pos) {
    ++fp;
  } else if (true_pos) {
    ++fn;
  } else {
    ++tn;
  }
}

ConfusionMatrix confusion(std::span<const Label> predictions,
                          std::span<const Label> truth) {
  if (predictions.size() != truth.size()) {
    throw ConfigError("confusion: " + std::to_string(predictions.size()) +
                      " predictions for " + std::to_string(truth.size()) +
                      " labels");
  }
  if (predictions.empty()) throw ConfigError("confusion: empty input");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) cm.add(predictions[i], truth[i]);
  return cm;
}

namespace {

std::optional<double> ratio(double num, double den) {
  if (den == 0.0) return std::nullopt;
  return num / den;
}

}  // namespace

MetricSet compute(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw ConfigError("compute: empty confusion matrix");
  const auto tp = static_cast<double>(cm.tp);
  const auto fp = static_cast<double>(cm.fp);
  const auto tn = static_cast<double>(cm.tn);
  const auto fn = static_cast<double>(cm.fn);

  MetricSet m;
  m.recall = ratio(tp, tp + fn);
  m.specificity = ratio(tn, tn + fp);
  m.precision = ratio(tp, tp + fp);
  m.accuracy = ratio(tp + tn, tp + tn + fp + fn);
  if (m.precision && m.recall) {
    m.f1 = ratio(2.0 * *m.precision * *m.recall, *m.precision + *m.recall);
  }
  const double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (den > 0.0) m.mcc = (tp * tn - fp * fn) / std::sqrt(den);
  return m;
}

Aggregate aggregate(const std::map<Kind, ConfusionMatrix>& per_kind) {
  if (per_kind.empty()) throw ConfigError("aggregate: no kinds given");
  Aggregate out;
  for (const auto& [kind, cm] : per_kind) {
    out.per_kind.emplace(kind, compute(cm));
    out.pooled += cm;
  }
  out.overall = compute(out.pooled);
  return out;
}

std::vector<std::optional<double>> metric_values(const MetricSet& m) {
  return {m.recall, m.specificity, m.precision, m.f1, m.mcc, m.accuracy};
}

MetricSet metrics_from_values(const std::vector<std::optional<double>>& v) {
  if (v.size() != 6) throw DataError("expected 6 metric values");
  return MetricSet{v[0], v[1], v[2], v[3], v[4], v[5]};
}

std::string format_percent(const std::optional<double>& value) {
  if (!value) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", *value * 100.0);
  return buf;
}

std::string csv_header() {
  std::string out = "name";
  for (const char* n : kMetricNames) {
    out += ',';
    out += n;
  }
  return out + "\n";
}

std::string csv_row(const std::string& name, const MetricSet& m) {
  std::string out = name;
  for (const auto& v : metric_values(m)) {
    out += ',';
    if (v) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", *v);
      out += buf;
    }
  }
  return out + "\n";
}

std::string format_table(
    const std::vector<std::pair<std::string, MetricSet>>& rows) {
  static constexpr const char* kHeaders[] = {"Recall", "Spec.", "Prec.",
                                             "F1",     "MCC",   "Acc."};
  std::size_t name_width = 4;
  for (const auto& [name, _] : rows) name_width = std::max(name_width, name.size());
  std::ostringstream out;
  auto pad = [](const std::string& s, std::size_t w, bool left) {
    if (s.size() >= w) return s;
    return left ? s + std::string(w - s.size(), ' ')
                : std::string(w - s.size(), ' ') + s;
  };
  out << pad("Kind", name_width, true);
  for (const char* h : kHeaders) out << ' ' << pad(h, 7, false);
  out << '\n';
  for (const auto& [name, m] : rows) {
    out << pad(name, name_width, true);
    for (const auto& v : metric_values(m)) out << ' ' << pad(format_percent(v), 7, false);
    out << '\n';
  }
  return out.str();
}

}  // namespace slicevuln
