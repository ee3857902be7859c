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

// Acceptance runner. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. Criterion numbers may be passed as
// arguments to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "slicevuln/balancer.hpp"
#include "slicevuln/common.hpp"
#include "slicevuln/corpus.hpp"
#include "slicevuln/experiments.hpp"
#include "slicevuln/metrics.hpp"
#include "slicevuln/model.hpp"
#include "slicevuln/slicer.hpp"
#include "slicevuln/synthetic.hpp"
#include "slicevuln/tokenizer.hpp"
#include "test_support.hpp"

namespace slicevuln {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double a) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, a);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

void progress(const std::string& line) { std::fprintf(stderr, "  %s\n", line.c_str()); }

SampleSet reference_corpus() {
  return synthesize_from_manifest(parse_manifest_json(
      read_file(std::string(SLICEVULN_SOURCE_DIR) + "/data/reference_manifest.json")));
}

Outcome balancing_exactness() {
  const SampleSet corpus = reference_corpus();
  const auto start = Clock::now();
  const auto h1 = balance_h1(corpus, 42);
  const auto h2 = balance_h2(corpus, 42);
  const double secs = seconds_since(start);

  const std::map<Kind, std::uint64_t> h1_expected{
      {Kind::API, 27206}, {Kind::AU, 21852}, {Kind::PU, 56782}, {Kind::AE, 6950}};
  bool ok = h1.samples.size() == 112790 && h2.samples.size() == 27800;
  for (const auto& [kind, total] : h1_expected) {
    ok = ok && h1.per_kind_counts().kind_total(kind) == total;
    ok = ok && h2.per_kind_counts().kind_total(kind) == 6950;
  }
  ok = ok && secs < 5.0;
  return {ok, "H1 total " + std::to_string(h1.samples.size()) + ", H2 total " +
                  std::to_string(h2.samples.size()) + ", " + fmt("%.2f s", secs)};
}

Outcome remainder_arithmetic() {
  const SampleSet corpus = reference_corpus();
  const auto h2 = balance_h2(corpus, 42);
  const auto rest = remainder(corpus, h2.samples);
  const bool ok = corpus.size() == 420627 && rest.size() == 392827 &&
                  rest.size() + h2.samples.size() == corpus.size();
  return {ok, "remainder " + std::to_string(rest.size()) + " of " +
                  std::to_string(corpus.size())};
}

Outcome metric_oracle() {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::uint64_t> cell(1, 100000);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const ConfusionMatrix cm{cell(rng), cell(rng), cell(rng), cell(rng)};
    const MetricSet m = compute(cm);
    const auto o = testing::oracle_metrics(cm.tp, cm.fp, cm.tn, cm.fn);
    if (!m.recall || !m.specificity || !m.precision || !m.f1 || !m.mcc || !m.accuracy) {
      return {false, "undefined metric on a positive matrix"};
    }
    for (const auto& [a, b] : {std::pair{*m.recall, o.recall}, {*m.specificity, o.specificity},
                               {*m.precision, o.precision}, {*m.f1, o.f1},
                               {*m.mcc, o.mcc}, {*m.accuracy, o.accuracy}}) {
      worst = std::max(worst, std::abs(a - b));
    }
  }
  const MetricSet d = compute(ConfusionMatrix{40, 15, 35, 10});
  const bool fixed = std::abs(*d.recall - 0.8000) < 1e-4 &&
                     std::abs(*d.specificity - 0.7000) < 1e-4 &&
                     std::abs(*d.precision - 0.7273) < 1e-4 &&
                     std::abs(*d.f1 - 0.7619) < 1e-4 &&
                     std::abs(*d.accuracy - 0.7500) < 1e-4 &&
                     std::abs(*d.mcc - 0.5025) < 1e-4;
  return {worst <= 1e-12 && fixed,
          "1000 matrices, max deviation " + fmt("%.3g", worst) +
              (fixed ? ", fixed case matches" : ", fixed case differs")};
}

Outcome gradient_correctness() {
  ModelConfig c;
  c.num_layers = 1;
  c.hidden_dim = 8;
  c.num_heads = 2;
  c.ff_dim = 32;
  c.max_len = 16;
  c.vocab_size = 24;
  c.dropout = 0.0;
  const auto model = TransformerClassifier<double>::init(c, 42);
  std::mt19937_64 rng(42);
  std::vector<Encoding> batch;
  std::vector<Label> labels;
  for (int i = 0; i < 4; ++i) {
    Encoding e;
    e.ids.assign(c.max_len, kPadId);
    e.attention_mask.assign(c.max_len, 0);
    const std::size_t len = 4 + rng() % (c.max_len - 4);
    for (std::size_t k = 0; k < len; ++k) {
      e.ids[k] = k == 0 ? kClsId : static_cast<std::int32_t>(kNumReserved + rng() % 21);
      e.attention_mask[k] = 1;
    }
    batch.push_back(std::move(e));
    labels.push_back(i % 2 ? Label::Vulnerable : Label::NonVulnerable);
  }
  const auto start = Clock::now();
  const auto res = grad_check(model, batch, labels, 1e-5, 256);
  const double secs = seconds_since(start);
  return {res.checked >= 200 && res.max_relative_error < 1e-4 && secs < 60.0,
          std::to_string(res.checked) + " parameters, max relative error " +
              fmt("%.3g", res.max_relative_error) + ", " + fmt("%.2f s", secs)};
}

Outcome overfit_benchmark() {
  SyntheticOptions opts;
  for (Kind k : kAllKinds) {
    opts.counts.set(k, Label::Vulnerable, 8);
    opts.counts.set(k, Label::NonVulnerable, 8);
  }
  opts.hard_fraction = 0.0;
  const SampleSet set = generate_synthetic(opts);
  NormalizeOptions norm;
  norm.preserved = default_api_list();

  const auto start = Clock::now();
  const auto encoder = TextEncoder::fit(set, norm, kDefaultVocabSize, kDefaultMaxLen, 1);
  const auto enc = encoder.encode_all(set, 1);
  const auto labels = labels_of(set);
  const Dataset data{enc, labels};
  ModelConfig c;
  c.vocab_size = static_cast<int>(encoder.vocab().size());
  auto model = TransformerClassifier<float>::init(c, 42);
  const double initial = evaluate_loss(model, data);

  TrainConfig t;
  t.epochs = 200;
  t.early_stop_patience = 200;
  int reached = 0;
  train(model, data, data, t, [&](const EpochStats& s) {
    if (s.val_accuracy == 1.0 && reached == 0) reached = s.epoch;
    return reached == 0;
  });
  const double secs = seconds_since(start);
  const bool ok = set.size() == 64 && reached > 0 && predict(model, enc) == labels &&
                  secs < 300.0;
  return {ok, std::to_string(set.size()) + " samples, 100% train accuracy at epoch " +
                  std::to_string(reached) + ", " + fmt("%.1f s", secs)};
}

// Runs of the desk configurations, shared by criteria 6 and 8.
struct DeskRuns {
  std::map<StrategyId, Report> reports;
  std::map<StrategyId, double> seconds;

  const Report& get(StrategyId id) {
    if (!reports.count(id)) {
      const std::string name(to_string(id));
      std::string lower = name;
      lower[0] = 's';
      const auto rc = parse_run_config(read_file(std::string(SLICEVULN_SOURCE_DIR) +
                                                 "/configs/desk_" + lower + ".cfg"));
      SyntheticOptions opts;
      opts.counts = desk_manifest(2000);
      opts.seed = rc.spec.seed;
      const SampleSet corpus = generate_synthetic(opts);
      progress("running " + name + " on " + std::to_string(corpus.size()) + " samples");
      const auto start = Clock::now();
      reports.emplace(id, run(rc.spec, corpus));
      seconds[id] = seconds_since(start);
    }
    return reports.at(id);
  }
};

DeskRuns& desk_runs() {
  static DeskRuns runs;
  return runs;
}

Outcome desk_end_to_end() {
  auto& runs = desk_runs();
  const double f1_s1 = runs.get(StrategyId::S1).overall.f1.value_or(0);
  const double f1_s2 = runs.get(StrategyId::S2).overall.f1.value_or(0);
  const double f1_s3 = runs.get(StrategyId::S3).overall.f1.value_or(0);
  const double secs = runs.seconds[StrategyId::S2];
  const bool ok = f1_s2 >= 0.90 && f1_s1 > f1_s2 && f1_s2 > f1_s3 && secs < 900.0;
  return {ok, "F1 S1 " + fmt("%.4f", f1_s1) + " > S2 " + fmt("%.4f", f1_s2) + " > S3 " +
                  fmt("%.4f", f1_s3) + ", S2 " + fmt("%.1f s", secs)};
}

Outcome slicer_golden() {
  const auto cases = testing::load_golden();
  const SliceConfig cfg = testing::golden_config();
  std::size_t missing = 0, spurious = 0, round_trip_failures = 0;
  std::set<Kind> kinds;
  for (const auto& gc : cases) {
    const auto got = testing::as_labels(extract_candidates(gc.source, cfg));
    for (const auto& l : gc.labels) {
      kinds.insert(l.kind);
      missing += std::find(got.begin(), got.end(), l) == got.end();
    }
    for (const auto& l : got) {
      spurious += std::find(gc.labels.begin(), gc.labels.end(), l) == gc.labels.end();
    }
    std::string rebuilt;
    for (const auto& t : lex(gc.source)) rebuilt += t.text;
    round_trip_failures += rebuilt != gc.source;
  }
  const bool ok = cases.size() == 20 && kinds.size() == 4 && missing == 0 &&
                  spurious == 0 && round_trip_failures == 0;
  return {ok, std::to_string(cases.size()) + " snippets, " + std::to_string(missing) +
                  " missing, " + std::to_string(spurious) + " spurious, " +
                  std::to_string(round_trip_failures) + " round-trip failures"};
}

Outcome determinism() {
  auto& runs = desk_runs();
  const Report& first = runs.get(StrategyId::S2);
  const auto rc = parse_run_config(
      read_file(std::string(SLICEVULN_SOURCE_DIR) + "/configs/desk_s2.cfg"));
  SyntheticOptions opts;
  opts.counts = desk_manifest(2000);
  opts.seed = rc.spec.seed;
  progress("running S2 again");
  const Report second = run(rc.spec, generate_synthetic(opts));

  const auto dir = std::filesystem::temp_directory_path() / "slicevuln_acceptance";
  std::filesystem::create_directories(dir);
  bool identical = true;
  for (const auto& [format, name] : {std::pair{ReportFormat::Csv, "metrics.csv"},
                                     {ReportFormat::Table, "metrics.txt"}}) {
    const auto a = (dir / (std::string("a_") + name)).string();
    const auto b = (dir / (std::string("b_") + name)).string();
    emit(first, format, a);
    emit(second, format, b);
    identical = identical && read_file(a) == read_file(b);
  }
  std::filesystem::remove_all(dir);
  identical = identical && first.history == second.history &&
              first.fingerprint == second.fingerprint;
  return {identical, identical ? "two S2 runs, metric files byte-identical"
                               : "two S2 runs differ"};
}

Outcome tokenizer_properties() {
  constexpr int kCases = 600;
  int alpha_ok = 0, length_ok = 0, idem_ok = 0;
  NormalizeOptions opts;
  opts.preserved = {"strcpy", "memcpy"};

  testing::SliceGenerator g1(1);
  for (int i = 0; i < kCases; ++i) {
    const std::string a = g1.next();
    const std::string na = normalize(a, opts);
    const Vocab v = build_vocab(std::vector<std::string>{na}, 64);
    const std::size_t max_len = 8 + static_cast<std::size_t>(g1.pick(60));
    alpha_ok += encode(na, v, max_len) ==
                encode(normalize(testing::rename_all(a, opts), opts), v, max_len);
  }

  testing::SliceGenerator g2(2);
  std::vector<std::string> texts;
  for (int i = 0; i < 50; ++i) texts.push_back(normalize(g2.next(), opts));
  const Vocab shared = build_vocab(texts, 40);
  for (int i = 0; i < kCases; ++i) {
    const std::size_t max_len = 2 + static_cast<std::size_t>(g2.pick(600));
    const Encoding e = encode(normalize(g2.next(), opts), shared, max_len);
    length_ok += e.ids.size() == max_len && e.attention_mask.size() == max_len;
  }

  testing::SliceGenerator g3(3);
  for (int i = 0; i < kCases; ++i) {
    NormalizeOptions o = opts;
    o.rename_symbols = i % 5 != 0;
    const std::string once = normalize(g3.next(), o);
    idem_ok += normalize(once, o) == once;
  }
  const bool ok = alpha_ok == kCases && length_ok == kCases && idem_ok == kCases;
  return {ok, "alpha-equivalence " + std::to_string(alpha_ok) + "/" +
                  std::to_string(kCases) + ", length " + std::to_string(length_ok) + "/" +
                  std::to_string(kCases) + ", idempotence " + std::to_string(idem_ok) +
                  "/" + std::to_string(kCases)};
}

struct Criterion {
  int number;
  const char* name;
  std::function<Outcome()> check;
};

}  // namespace
}  // namespace slicevuln

int main(int argc, char** argv) {
  using namespace slicevuln;
  const std::vector<Criterion> criteria{
      {1, "balancing exactness", balancing_exactness},
      {2, "remainder arithmetic", remainder_arithmetic},
      {3, "metric oracle", metric_oracle},
      {4, "gradient correctness", gradient_correctness},
      {5, "overfit benchmark", overfit_benchmark},
      {6, "desk-scale end-to-end", desk_end_to_end},
      {7, "slicer golden corpus", slicer_golden},
      {8, "determinism", determinism},
      {9, "tokenizer properties", tokenizer_properties},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.number)) continue;
    Outcome out;
    try {
      out = c.check();
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    failures += !out.pass;
    std::printf("%s criterion %d (%s): %s\n", out.pass ? "PASS" : "FAIL", c.number, c.name,
                out.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
