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

// End-to-end strategy runs and their reports.
//
//   S1  H1-balanced set, 80/20 stratified split, test on the 20%.
//   S2  H2-balanced set, 80/20 stratified split, test on the 20%.
//   S3  trains exactly like S2, tests on every corpus sample outside the
//       H2-balanced set.
//
// For S1/S2 the held-out 20% also drives early stopping; there is no third
// split.

#ifndef SLICEVULN_EXPERIMENTS_HPP_
#define SLICEVULN_EXPERIMENTS_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "slicevuln/balancer.hpp"
#include "slicevuln/corpus.hpp"
#include "slicevuln/metrics.hpp"
#include "slicevuln/model.hpp"
#include "slicevuln/tokenizer.hpp"

namespace slicevuln {

enum class StrategyId { S1, S2, S3 };

std::string_view to_string(StrategyId id);
StrategyId parse_strategy(std::string_view name);  // "S1".."S3", "s1".."s3"

struct StrategySpec {
  StrategyId id = StrategyId::S2;
  std::uint64_t seed = 42;
  double train_fraction = 0.8;
  bool normalize = true;
  std::size_t vocab_size = kDefaultVocabSize;
  int jobs = 1;  // tokenization workers; never changes results
  ModelConfig model;  // vocab_size is replaced by the fitted vocabulary size
  TrainConfig train;
  std::set<std::string, std::less<>> api_list;  // empty: default list

  Hypothesis hypothesis() const {
    return id == StrategyId::S1 ? Hypothesis::H1 : Hypothesis::H2;
  }
};

// Desk-scale defaults: 2 layers, 64 hidden, 4 heads, ff 256.
StrategySpec default_spec(StrategyId id);

// Parses "key = value" lines ('#' comments). Keys: strategy, seed,
// train_fraction, normalize, vocab_size, jobs, model.{num_layers,
// hidden_dim, num_heads, ff_dim, max_len, dropout}, train.{learning_rate,
// batch_size, epochs, weight_decay, early_stop_patience, dynamic_padding},
// paths.{corpus, out, api_list}. Unknown keys are a ConfigError.
struct RunConfig {
  StrategySpec spec;
  std::optional<std::string> corpus_path;
  std::optional<std::string> out_dir;
  std::optional<std::string> api_list_path;
  bool seed_set = false;
};
RunConfig parse_run_config(std::string_view text);

// Normalization + vocabulary + fixed-length encoding, fitted on a training
// set and applied unchanged to everything else.
class TextEncoder {
 public:
  TextEncoder(NormalizeOptions norm, Vocab vocab, std::size_t max_len)
      : norm_(std::move(norm)), vocab_(std::move(vocab)), max_len_(max_len) {}

  static TextEncoder fit(const SampleSet& train, NormalizeOptions norm,
                         std::size_t vocab_size, std::size_t max_len, int jobs);

  Encoding encode(std::string_view code) const;
  std::vector<Encoding> encode_all(const SampleSet& set, int jobs) const;

  const Vocab& vocab() const { return vocab_; }
  const NormalizeOptions& normalize_options() const { return norm_; }
  std::size_t max_len() const { return max_len_; }

 private:
  NormalizeOptions norm_;
  Vocab vocab_;
  std::size_t max_len_;
};

std::vector<Label> labels_of(const SampleSet& set);

struct ResourceUsage {
  double wall_time_s = 0;
  std::uint64_t peak_resident_bytes = 0;
};

// Process peak resident set size, best effort (0 when unavailable).
std::uint64_t peak_resident_bytes();

struct DatasetFingerprint {
  std::uint64_t corpus_size = 0;
  std::uint64_t balanced_size = 0;
  std::uint64_t train_size = 0;
  std::uint64_t validation_size = 0;
  std::uint64_t test_size = 0;
  std::string corpus_hash;
  std::string balanced_hash;
  std::string train_hash;
  std::string test_hash;
  std::string vocab_hash;
  Manifest balanced_counts;
  Manifest test_counts;

  bool operator==(const DatasetFingerprint&) const = default;
};

struct Report {
  StrategyId strategy = StrategyId::S2;
  Hypothesis hypothesis = Hypothesis::H2;
  std::uint64_t seed = 42;
  std::map<Kind, ConfusionMatrix> confusion;
  std::map<Kind, MetricSet> per_kind;
  MetricSet overall;
  ResourceUsage resources;
  DatasetFingerprint fingerprint;
  TrainHistory history;
};

// Receives one human-readable progress line per pipeline stage.
using ProgressFn = std::function<void(const std::string&)>;

// Split `pool` (stratified, spec.train_fraction), fit the encoder on the
// training part and train a fresh model, early-stopping on the held-out part.
struct FitResult {
  SplitResult split;
  TextEncoder encoder;
  TransformerClassifier<float> model;
  TrainHistory history;
  ResourceUsage resources;  // training phase only
};
FitResult fit(const StrategySpec& spec, const SampleSet& pool,
              const ProgressFn& progress = {});

struct Evaluation {
  std::vector<double> probabilities;  // P(Vulnerable), in input order
  std::vector<Label> predictions;
  std::map<Kind, ConfusionMatrix> confusion;  // kinds present in the input
};
Evaluation evaluate(const TransformerClassifier<float>& model,
                    const TextEncoder& encoder, const SampleSet& test, int jobs = 1);

// Trained state kept for checkpointing, filled when requested.
struct RunArtifacts {
  std::optional<TransformerClassifier<float>> model;
  std::optional<TextEncoder> encoder;
};

// Errors from any stage are rethrown with the same type, prefixed by the
// stage name.
Report run(const StrategySpec& spec, const SampleSet& corpus,
           const ProgressFn& progress = {}, RunArtifacts* artifacts = nullptr);

// Encoder settings (normalization flag, max_len, preserved names) as JSON;
// the vocabulary is stored separately.
std::string encoder_settings_json(const TextEncoder& encoder);
TextEncoder encoder_from_settings(std::string_view json_text, Vocab vocab);

enum class ReportFormat { Table, Csv, Json };
ReportFormat parse_report_format(std::string_view name);

std::string render(const Report& report, ReportFormat format);
void emit(const Report& report, ReportFormat format, const std::string& path);

// Per-row metrics read back from the CSV rendering.
std::vector<std::pair<std::string, MetricSet>> parse_metrics_csv(std::string_view csv);
Report report_from_json(std::string_view json_text);

// Side-by-side overall F1, accuracy, wall time and peak memory, with an F1
// delta against the first report. Requires at least two reports.
std::string compare(const std::vector<Report>& reports);

// Deterministic sub-directory name for a run.
std::string run_id(const StrategySpec& spec);

}  // namespace slicevuln

#endif  // SLICEVULN_EXPERIMENTS_HPP_
