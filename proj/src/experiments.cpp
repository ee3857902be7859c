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

#include "slicevuln/experiments.hpp"

#include <sys/resource.h>

#include <chrono>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "slicevuln/common.hpp"
#include "slicevuln/slicer.hpp"

namespace slicevuln {

using nlohmann::ordered_json;

std::string_view to_string(StrategyId id) {
  switch (id) {
    case StrategyId::S1: return "S1";
    case StrategyId::S2: return "S2";
    case StrategyId::S3: return "S3";
  }
  return "?";
}

StrategyId parse_strategy(std::string_view name) {
  if (name == "S1" || name == "s1") return StrategyId::S1;
  if (name == "S2" || name == "s2") return StrategyId::S2;
  if (name == "S3" || name == "s3") return StrategyId::S3;
  throw ConfigError("unknown strategy '" + std::string(name) +
                    "' (expected S1, S2 or S3)");
}

StrategySpec default_spec(StrategyId id) {
  StrategySpec spec;
  spec.id = id;
  return spec;
}

namespace {

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + std::string(key) + "': expected a boolean");
}

template <typename N>
N parse_number(std::string_view key, std::string_view v) {
  try {
    std::size_t used = 0;
    const std::string s(v);
    N out;
    if constexpr (std::is_floating_point_v<N>) {
      out = static_cast<N>(std::stod(s, &used));
    } else if constexpr (std::is_unsigned_v<N>) {
      if (!s.empty() && s[0] == '-') throw std::invalid_argument("negative");
      out = static_cast<N>(std::stoull(s, &used));
    } else {
      out = static_cast<N>(std::stoll(s, &used));
    }
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + std::string(key) + "': invalid number '" +
                      std::string(v) + "'");
  }
}

}  // namespace

RunConfig parse_run_config(std::string_view text) {
  RunConfig rc;
  StrategySpec& s = rc.spec;
  std::size_t line_no = 0;
  for (const auto& raw : split_lines(text)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view v = trim(line.substr(eq + 1));
    if (key == "strategy") {
      s.id = parse_strategy(v);
    } else if (key == "seed") {
      s.seed = parse_number<std::uint64_t>(key, v);
      s.train.seed = s.seed;
      rc.seed_set = true;
    } else if (key == "train_fraction") {
      s.train_fraction = parse_number<double>(key, v);
    } else if (key == "normalize") {
      s.normalize = parse_bool(key, v);
    } else if (key == "vocab_size") {
      s.vocab_size = parse_number<std::size_t>(key, v);
    } else if (key == "jobs") {
      s.jobs = parse_number<int>(key, v);
    } else if (key == "model.num_layers") {
      s.model.num_layers = parse_number<int>(key, v);
    } else if (key == "model.hidden_dim") {
      s.model.hidden_dim = parse_number<int>(key, v);
    } else if (key == "model.num_heads") {
      s.model.num_heads = parse_number<int>(key, v);
    } else if (key == "model.ff_dim") {
      s.model.ff_dim = parse_number<int>(key, v);
    } else if (key == "model.max_len") {
      s.model.max_len = parse_number<int>(key, v);
    } else if (key == "model.dropout") {
      s.model.dropout = parse_number<double>(key, v);
    } else if (key == "train.learning_rate") {
      s.train.learning_rate = parse_number<double>(key, v);
    } else if (key == "train.batch_size") {
      s.train.batch_size = parse_number<int>(key, v);
    } else if (key == "train.epochs") {
      s.train.epochs = parse_number<int>(key, v);
    } else if (key == "train.weight_decay") {
      s.train.weight_decay = parse_number<double>(key, v);
    } else if (key == "train.early_stop_patience") {
      s.train.early_stop_patience = parse_number<int>(key, v);
    } else if (key == "train.dynamic_padding") {
      s.train.dynamic_padding = parse_bool(key, v);
    } else if (key == "paths.corpus") {
      rc.corpus_path = std::string(v);
    } else if (key == "paths.out") {
      rc.out_dir = std::string(v);
    } else if (key == "paths.api_list") {
      rc.api_list_path = std::string(v);
    } else {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": unknown key '" + std::string(key) + "'");
    }
  }
  return rc;
}

TextEncoder TextEncoder::fit(const SampleSet& train, NormalizeOptions norm,
                             std::size_t vocab_size, std::size_t max_len,
                             int jobs) {
  std::vector<std::string> texts(train.size());
  parallel_for(train.size(), jobs,
               [&](std::size_t i) { texts[i] = normalize(train[i].code, norm); });
  Vocab vocab = build_vocab(texts, vocab_size);
  return TextEncoder(std::move(norm), std::move(vocab), max_len);
}

Encoding TextEncoder::encode(std::string_view code) const {
  return slicevuln::encode(normalize(code, norm_), vocab_, max_len_);
}

std::vector<Encoding> TextEncoder::encode_all(const SampleSet& set, int jobs) const {
  std::vector<Encoding> out(set.size());
  parallel_for(set.size(), jobs, [&](std::size_t i) { out[i] = encode(set[i].code); });
  return out;
}

std::vector<Label> labels_of(const SampleSet& set) {
  std::vector<Label> out;
  out.reserve(set.size());
  for (const auto& s : set) out.push_back(s.label);
  return out;
}

std::uint64_t peak_resident_bytes() {
  rusage usage{};
  if (getrusage(RUSAGE_SELF, &usage) != 0) return 0;
  return static_cast<std::uint64_t>(usage.ru_maxrss) * 1024;  // KiB on Linux
}

namespace {

template <typename F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  const std::string prefix = std::string("stage '") + name + "': ";
  try {
    return body();
  } catch (const NumericError& e) {
    throw NumericError(prefix + e.what());
  } catch (const DataError& e) {
    throw DataError(prefix + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  }
}

}  // namespace

FitResult fit(const StrategySpec& spec, const SampleSet& pool,
              const ProgressFn& progress) {
  auto say = [&](const std::string& msg) {
    if (progress) progress(msg);
  };
  SplitResult parts = stage("split", [&] {
    return split(pool, spec.train_fraction, spec.seed, true);
  });
  say("train " + std::to_string(parts.train.size()) + ", validation " +
      std::to_string(parts.test.size()));

  NormalizeOptions norm;
  norm.preserved = spec.api_list.empty() ? default_api_list() : spec.api_list;
  norm.rename_symbols = spec.normalize;
  TextEncoder encoder = stage("tokenize", [&] {
    return TextEncoder::fit(parts.train, norm, spec.vocab_size,
                            static_cast<std::size_t>(spec.model.max_len), spec.jobs);
  });
  const auto train_enc =
      stage("tokenize", [&] { return encoder.encode_all(parts.train, spec.jobs); });
  const auto val_enc =
      stage("tokenize", [&] { return encoder.encode_all(parts.test, spec.jobs); });
  const auto train_lab = labels_of(parts.train);
  const auto val_lab = labels_of(parts.test);
  say("vocabulary " + std::to_string(encoder.vocab().size()) + " tokens");

  ModelConfig mcfg = spec.model;
  mcfg.vocab_size = static_cast<int>(encoder.vocab().size());
  TrainConfig tcfg = spec.train;
  tcfg.seed = spec.seed;

  const auto t0 = std::chrono::steady_clock::now();
  auto model = stage("train", [&] {
    return TransformerClassifier<float>::init(mcfg, spec.seed);
  });
  TrainHistory history = stage("train", [&] {
    return train(model, Dataset{train_enc, train_lab}, Dataset{val_enc, val_lab}, tcfg,
                 [&](const EpochStats& e) {
                   char buf[160];
                   std::snprintf(buf, sizeof(buf),
                                 "epoch %d: train loss %.4f, val loss %.4f, val acc %.4f",
                                 e.epoch, e.train_loss, e.val_loss, e.val_accuracy);
                   say(buf);
                   return true;
                 });
  });
  ResourceUsage res;
  res.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.peak_resident_bytes = peak_resident_bytes();
  return FitResult{std::move(parts), std::move(encoder), std::move(model),
                   std::move(history), res};
}

Evaluation evaluate(const TransformerClassifier<float>& model,
                    const TextEncoder& encoder, const SampleSet& test, int jobs) {
  const auto enc = stage("tokenize", [&] { return encoder.encode_all(test, jobs); });
  Evaluation ev;
  ev.probabilities = stage("predict", [&] { return vulnerable_probabilities(model, enc); });
  ev.predictions.reserve(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    const Label p = ev.probabilities[i] >= 0.5 ? Label::Vulnerable : Label::NonVulnerable;
    ev.predictions.push_back(p);
    ev.confusion[test[i].kind].add(p, test[i].label);
  }
  return ev;
}

Report run(const StrategySpec& spec, const SampleSet& corpus,
           const ProgressFn& progress, RunArtifacts* artifacts) {
  Report report;
  report.strategy = spec.id;
  report.hypothesis = spec.hypothesis();
  report.seed = spec.seed;

  const BalancedSet balanced = stage("balance", [&] {
    return balance(corpus, spec.hypothesis(), spec.seed);
  });
  if (progress) {
    progress("balanced " + std::to_string(corpus.size()) + " -> " +
             std::to_string(balanced.samples.size()) + " samples (" +
             std::string(to_string(spec.hypothesis())) + ")");
  }
  FitResult fitted = fit(spec, balanced.samples, progress);
  const SampleSet test =
      spec.id == StrategyId::S3
          ? stage("remainder", [&] { return remainder(corpus, balanced.samples); })
          : fitted.split.test;
  if (progress) progress("test " + std::to_string(test.size()) + " samples");
  const Evaluation ev = evaluate(fitted.model, fitted.encoder, test, spec.jobs);

  report.confusion = ev.confusion;
  const Aggregate agg = stage("metrics", [&] { return aggregate(report.confusion); });
  report.per_kind = agg.per_kind;
  report.overall = agg.overall;
  report.resources = fitted.resources;
  report.history = fitted.history;

  DatasetFingerprint& fp = report.fingerprint;
  fp.corpus_size = corpus.size();
  fp.balanced_size = balanced.samples.size();
  fp.train_size = fitted.split.train.size();
  fp.validation_size = fitted.split.test.size();
  fp.test_size = test.size();
  fp.corpus_hash = hex64(corpus.fingerprint());
  fp.balanced_hash = hex64(balanced.samples.fingerprint());
  fp.train_hash = hex64(fitted.split.train.fingerprint());
  fp.test_hash = hex64(test.fingerprint());
  fp.vocab_hash = hex64(fitted.encoder.vocab().hash());
  fp.balanced_counts = balanced.samples.manifest();
  fp.test_counts = test.manifest();
  if (artifacts != nullptr) {
    artifacts->model.emplace(std::move(fitted.model));
    artifacts->encoder.emplace(std::move(fitted.encoder));
  }
  return report;
}

std::string encoder_settings_json(const TextEncoder& encoder) {
  ordered_json j;
  j["rename_symbols"] = encoder.normalize_options().rename_symbols;
  j["max_len"] = encoder.max_len();
  j["preserved"] = std::vector<std::string>(encoder.normalize_options().preserved.begin(),
                                            encoder.normalize_options().preserved.end());
  j["vocab_hash"] = hex64(encoder.vocab().hash());
  return j.dump(2) + "\n";
}

TextEncoder encoder_from_settings(std::string_view json_text, Vocab vocab) {
  try {
    const auto j = nlohmann::json::parse(json_text);
    NormalizeOptions norm;
    norm.rename_symbols = j.at("rename_symbols").get<bool>();
    for (const auto& name : j.at("preserved")) norm.preserved.insert(name.get<std::string>());
    const auto max_len = j.at("max_len").get<std::size_t>();
    if (j.contains("vocab_hash") &&
        j.at("vocab_hash").get<std::string>() != hex64(vocab.hash())) {
      throw DataError("encoder settings belong to a different vocabulary");
    }
    return TextEncoder(std::move(norm), std::move(vocab), max_len);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("encoder settings: ") + e.what());
  }
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "table") return ReportFormat::Table;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  throw ConfigError("unknown report format '" + std::string(name) + "'");
}

namespace {

ordered_json metrics_json(const MetricSet& m) {
  ordered_json j;
  const auto values = metric_values(m);
  for (std::size_t i = 0; i < values.size(); ++i) {
    j[kMetricNames[i]] = values[i] ? ordered_json(*values[i]) : ordered_json(nullptr);
  }
  return j;
}

MetricSet metrics_from_json(const nlohmann::json& j) {
  std::vector<std::optional<double>> values;
  for (const char* name : kMetricNames) {
    const auto& v = j.at(name);
    values.push_back(v.is_null() ? std::nullopt : std::optional<double>(v.get<double>()));
  }
  return metrics_from_values(values);
}

ordered_json manifest_json(const Manifest& m) {
  ordered_json j;
  for (Kind k : kAllKinds) {
    j[std::string(to_string(k))] = {{"vulnerable", m.vulnerable(k)},
                                    {"non_vulnerable", m.non_vulnerable(k)}};
  }
  return j;
}

std::vector<std::pair<std::string, MetricSet>> table_rows(const Report& r) {
  std::vector<std::pair<std::string, MetricSet>> rows;
  for (const auto& [kind, m] : r.per_kind) rows.emplace_back(std::string(to_string(kind)), m);
  rows.emplace_back("Overall", r.overall);
  return rows;
}

}  // namespace

std::string render(const Report& r, ReportFormat format) {
  switch (format) {
    case ReportFormat::Table: {
      std::string out = "Strategy " + std::string(to_string(r.strategy)) + " (" +
                        std::string(to_string(r.hypothesis)) + "), seed " +
                        std::to_string(r.seed) + ", test samples " +
                        std::to_string(r.fingerprint.test_size) + "\n";
      return out + format_table(table_rows(r));
    }
    case ReportFormat::Csv: {
      std::string out = csv_header();
      for (const auto& [name, m] : table_rows(r)) out += csv_row(name, m);
      return out;
    }
    case ReportFormat::Json: {
      ordered_json j;
      j["strategy"] = std::string(to_string(r.strategy));
      j["hypothesis"] = std::string(to_string(r.hypothesis));
      j["seed"] = r.seed;
      ordered_json kinds;
      for (const auto& [kind, cm] : r.confusion) {
        ordered_json entry;
        entry["tp"] = cm.tp;
        entry["fp"] = cm.fp;
        entry["tn"] = cm.tn;
        entry["fn"] = cm.fn;
        entry["metrics"] = metrics_json(r.per_kind.at(kind));
        kinds[std::string(to_string(kind))] = entry;
      }
      j["per_kind"] = kinds;
      j["overall"] = metrics_json(r.overall);
      j["resources"] = {{"wall_time_s", r.resources.wall_time_s},
                        {"peak_resident_bytes", r.resources.peak_resident_bytes}};
      const auto& fp = r.fingerprint;
      j["fingerprint"] = {{"corpus_size", fp.corpus_size},
                          {"balanced_size", fp.balanced_size},
                          {"train_size", fp.train_size},
                          {"validation_size", fp.validation_size},
                          {"test_size", fp.test_size},
                          {"corpus_hash", fp.corpus_hash},
                          {"balanced_hash", fp.balanced_hash},
                          {"train_hash", fp.train_hash},
                          {"test_hash", fp.test_hash},
                          {"vocab_hash", fp.vocab_hash},
                          {"balanced_counts", manifest_json(fp.balanced_counts)},
                          {"test_counts", manifest_json(fp.test_counts)}};
      j["history"] = {{"train_loss", r.history.train_loss},
                      {"val_loss", r.history.val_loss},
                      {"val_accuracy", r.history.val_accuracy},
                      {"stopped_epoch", r.history.stopped_epoch},
                      {"best_epoch", r.history.best_epoch}};
      return j.dump(2) + "\n";
    }
  }
  return {};
}

void emit(const Report& report, ReportFormat format, const std::string& path) {
  write_file(path, render(report, format));
}

std::vector<std::pair<std::string, MetricSet>> parse_metrics_csv(std::string_view csv) {
  const auto lines = split_lines(csv);
  if (lines.empty() || lines[0] + "\n" != csv_header()) {
    throw DataError("metrics csv: unexpected header");
  }
  std::vector<std::pair<std::string, MetricSet>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(lines[i]);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (!lines[i].empty() && lines[i].back() == ',') fields.emplace_back();
    if (fields.size() != 7) {
      throw DataError("metrics csv line " + std::to_string(i + 1) + ": expected 7 fields");
    }
    std::vector<std::optional<double>> values;
    for (std::size_t k = 1; k < fields.size(); ++k) {
      values.push_back(fields[k].empty() ? std::nullopt
                                         : std::optional<double>(std::stod(fields[k])));
    }
    rows.emplace_back(fields[0], metrics_from_values(values));
  }
  return rows;
}

Report report_from_json(std::string_view json_text) {
  Report r;
  try {
    const auto j = nlohmann::json::parse(json_text);
    r.strategy = parse_strategy(j.at("strategy").get<std::string>());
    r.hypothesis = parse_hypothesis(j.at("hypothesis").get<std::string>());
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& [name, entry] : j.at("per_kind").items()) {
      const Kind k = parse_kind(name);
      ConfusionMatrix cm;
      cm.tp = entry.at("tp").get<std::uint64_t>();
      cm.fp = entry.at("fp").get<std::uint64_t>();
      cm.tn = entry.at("tn").get<std::uint64_t>();
      cm.fn = entry.at("fn").get<std::uint64_t>();
      r.confusion[k] = cm;
      r.per_kind[k] = metrics_from_json(entry.at("metrics"));
    }
    r.overall = metrics_from_json(j.at("overall"));
    r.resources.wall_time_s = j.at("resources").at("wall_time_s").get<double>();
    r.resources.peak_resident_bytes =
        j.at("resources").at("peak_resident_bytes").get<std::uint64_t>();
    const auto& fp = j.at("fingerprint");
    auto& f = r.fingerprint;
    f.corpus_size = fp.at("corpus_size").get<std::uint64_t>();
    f.balanced_size = fp.at("balanced_size").get<std::uint64_t>();
    f.train_size = fp.at("train_size").get<std::uint64_t>();
    f.validation_size = fp.at("validation_size").get<std::uint64_t>();
    f.test_size = fp.at("test_size").get<std::uint64_t>();
    f.corpus_hash = fp.at("corpus_hash").get<std::string>();
    f.balanced_hash = fp.at("balanced_hash").get<std::string>();
    f.train_hash = fp.at("train_hash").get<std::string>();
    f.test_hash = fp.at("test_hash").get<std::string>();
    f.vocab_hash = fp.at("vocab_hash").get<std::string>();
    f.balanced_counts = parse_manifest_json(fp.at("balanced_counts").dump());
    f.test_counts = parse_manifest_json(fp.at("test_counts").dump());
    const auto& h = j.at("history");
    r.history.train_loss = h.at("train_loss").get<std::vector<double>>();
    r.history.val_loss = h.at("val_loss").get<std::vector<double>>();
    r.history.val_accuracy = h.at("val_accuracy").get<std::vector<double>>();
    r.history.stopped_epoch = h.at("stopped_epoch").get<int>();
    r.history.best_epoch = h.at("best_epoch").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("report json: ") + e.what());
  }
  return r;
}

std::string compare(const std::vector<Report>& reports) {
  if (reports.size() < 2) throw ConfigError("compare: need at least two reports");
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-10s %8s %8s %8s %10s %12s\n", "Strategy", "F1",
                "Acc.", "dF1", "Wall(s)", "PeakMem(MB)");
  out << buf;
  const auto base_f1 = reports.front().overall.f1;
  for (const auto& r : reports) {
    std::string delta = "n/a";
    if (r.overall.f1 && base_f1) {
      std::snprintf(buf, sizeof(buf), "%.2f", (*r.overall.f1 - *base_f1) * 100.0);
      delta = buf;
    }
    std::snprintf(buf, sizeof(buf), "%-10s %8s %8s %8s %10.2f %12.1f\n",
                  std::string(to_string(r.strategy)).c_str(),
                  format_percent(r.overall.f1).c_str(),
                  format_percent(r.overall.accuracy).c_str(), delta.c_str(),
                  r.resources.wall_time_s,
                  static_cast<double>(r.resources.peak_resident_bytes) / (1024.0 * 1024.0));
    out << buf;
  }
  return out.str();
}

std::string run_id(const StrategySpec& spec) {
  Fnv1a h;
  const ModelConfig& m = spec.model;
  const TrainConfig& t = spec.train;
  for (std::uint64_t v :
       {std::uint64_t(m.num_layers), std::uint64_t(m.hidden_dim), std::uint64_t(m.num_heads),
        std::uint64_t(m.ff_dim), std::uint64_t(m.max_len), std::uint64_t(t.batch_size),
        std::uint64_t(t.epochs), std::uint64_t(t.early_stop_patience),
        std::uint64_t(spec.vocab_size), std::uint64_t(spec.normalize),
        std::uint64_t(t.dynamic_padding)}) {
    h.update_u64(v);
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g|%.17g|%.17g|%.17g", m.dropout, t.learning_rate,
                t.weight_decay, spec.train_fraction);
  h.update(buf);
  return std::string(to_string(spec.id)) + "-seed" + std::to_string(spec.seed) + "-" +
         hex64(h.digest()).substr(0, 8);
}

}  // namespace slicevuln
