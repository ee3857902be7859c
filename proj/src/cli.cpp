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

#include "slicevuln/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "slicevuln/balancer.hpp"
#include "slicevuln/common.hpp"
#include "slicevuln/corpus.hpp"
#include "slicevuln/experiments.hpp"
#include "slicevuln/metrics.hpp"
#include "slicevuln/model.hpp"
#include "slicevuln/slicer.hpp"
#include "slicevuln/synthetic.hpp"
#include "slicevuln/tokenizer.hpp"

namespace slicevuln {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr std::uint64_t kFallbackSeed = 42;

bool g_quiet = false;

void progress(const std::string& msg) {
  if (!g_quiet) std::cerr << "[slicevuln] " << msg << "\n";
}

// Flags shared by every subcommand.
struct CommonFlags {
  std::uint64_t seed = 0;
  std::string out;
  int jobs = 1;
  CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonFlags& f, std::string default_out) {
  f.out = std::move(default_out);
  f.seed_opt = cmd->add_option("--seed", f.seed, "Random seed (default: config, "
                                                 "then $SLICEVULN_SEED, then 42)");
  cmd->add_option("--out", f.out, "Output directory")->capture_default_str();
  cmd->add_option("--jobs", f.jobs, "Worker threads for slicing/tokenizing")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

// Flag value, then config value, then the environment, then 42.
std::uint64_t resolve_seed(const CommonFlags& f, std::optional<std::uint64_t> config) {
  if (f.seed_opt->count() > 0) return f.seed;
  if (config) return *config;
  if (const char* env = std::getenv("SLICEVULN_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == nullptr || *end != '\0' || env[0] == '-') {
      throw ConfigError("SLICEVULN_SEED must be a non-negative integer");
    }
    return v;
  }
  return kFallbackSeed;
}

fs::path ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create directory '" + dir + "': " + ec.message());
  return fs::path(dir);
}

std::string out_file(const fs::path& dir, const std::string& name) {
  return (dir / name).string();
}

// Model and training overrides accepted by train and run-strategy.
struct SpecFlags {
  std::string spec_path;
  std::string api_list;
  int layers = 0, hidden = 0, heads = 0, ff = 0, max_len = 0, epochs = 0,
      batch_size = 0, patience = 0;
  double dropout = 0, lr = 0, weight_decay = 0, train_fraction = 0;
  std::size_t vocab_size = 0;
  bool no_normalize = false;
  std::vector<CLI::Option*> opts;
};

void add_spec_flags(CLI::App* cmd, SpecFlags& f) {
  cmd->add_option("--spec", f.spec_path, "Run-config file (key = value)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--api-list", f.api_list, "Risky API names, one per line")
      ->check(CLI::ExistingFile);
  cmd->add_option("--layers", f.layers, "Encoder layers")->check(CLI::PositiveNumber);
  cmd->add_option("--hidden", f.hidden, "Hidden size")->check(CLI::PositiveNumber);
  cmd->add_option("--heads", f.heads, "Attention heads")->check(CLI::PositiveNumber);
  cmd->add_option("--ff", f.ff, "Feed-forward size")->check(CLI::PositiveNumber);
  cmd->add_option("--max-len", f.max_len, "Encoding length in tokens")->check(CLI::PositiveNumber);
  cmd->add_option("--dropout", f.dropout, "Dropout probability")->check(CLI::Range(0.0, 0.99));
  cmd->add_option("--epochs", f.epochs, "Maximum training epochs")->check(CLI::PositiveNumber);
  cmd->add_option("--batch-size", f.batch_size, "Mini-batch size")->check(CLI::PositiveNumber);
  cmd->add_option("--lr", f.lr, "AdamW learning rate")->check(CLI::PositiveNumber);
  cmd->add_option("--weight-decay", f.weight_decay, "Decoupled weight decay")->check(CLI::NonNegativeNumber);
  cmd->add_option("--patience", f.patience, "Early-stopping patience in epochs")->check(CLI::PositiveNumber);
  cmd->add_option("--train-fraction", f.train_fraction, "Training share of the balanced set")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--vocab-size", f.vocab_size, "Vocabulary size including reserved tokens")->check(CLI::PositiveNumber);
  cmd->add_flag("--no-normalize", f.no_normalize, "Keep identifiers verbatim");
}

template <typename V>
void override_if(CLI::App* cmd, const char* name, V value, V& target) {
  if (cmd->count(name) > 0) target = value;
}

// Config file first, then explicit flags on top.
RunConfig load_spec(CLI::App* cmd, const SpecFlags& f, const CommonFlags& common) {
  RunConfig rc;
  if (!f.spec_path.empty()) rc = parse_run_config(read_file(f.spec_path));
  StrategySpec& s = rc.spec;
  override_if(cmd, "--layers", f.layers, s.model.num_layers);
  override_if(cmd, "--hidden", f.hidden, s.model.hidden_dim);
  override_if(cmd, "--heads", f.heads, s.model.num_heads);
  override_if(cmd, "--ff", f.ff, s.model.ff_dim);
  override_if(cmd, "--max-len", f.max_len, s.model.max_len);
  override_if(cmd, "--dropout", f.dropout, s.model.dropout);
  override_if(cmd, "--epochs", f.epochs, s.train.epochs);
  override_if(cmd, "--batch-size", f.batch_size, s.train.batch_size);
  override_if(cmd, "--lr", f.lr, s.train.learning_rate);
  override_if(cmd, "--weight-decay", f.weight_decay, s.train.weight_decay);
  override_if(cmd, "--patience", f.patience, s.train.early_stop_patience);
  override_if(cmd, "--train-fraction", f.train_fraction, s.train_fraction);
  override_if(cmd, "--vocab-size", f.vocab_size, s.vocab_size);
  if (f.no_normalize) s.normalize = false;
  if (!f.api_list.empty()) rc.api_list_path = f.api_list;
  if (rc.api_list_path) s.api_list = load_api_list(*rc.api_list_path);
  if (cmd->count("--jobs") > 0) s.jobs = common.jobs;
  s.seed = resolve_seed(common, rc.seed_set ? std::optional(s.seed) : std::nullopt);
  s.train.seed = s.seed;
  s.model.validate();
  s.train.validate();
  if (!(s.train_fraction > 0 && s.train_fraction < 1)) {
    throw ConfigError("train_fraction must lie in (0, 1)");
  }
  return rc;
}

std::string history_csv(const TrainHistory& h) {
  std::string out = "epoch,train_loss,val_loss,val_accuracy\n";
  char buf[128];
  for (std::size_t i = 0; i < h.train_loss.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g\n", i + 1, h.train_loss[i],
                  h.val_loss[i], h.val_accuracy[i]);
    out += buf;
  }
  return out;
}

void save_model(const fs::path& dir, const TransformerClassifier<float>& model,
                const TextEncoder& encoder) {
  encoder.vocab().save(out_file(dir, "vocab.tsv"));
  write_file(out_file(dir, "encoder.json"), encoder_settings_json(encoder));
  save_checkpoint(model, encoder.vocab().hash(), out_file(dir, "model.ckpt"));
}

// ---- slice ----

struct SliceFlags {
  std::vector<std::string> inputs;
  std::string api_list;
  std::vector<std::string> kinds;
  int max_lines = 30;
  int hops = 2;
  int label = -1;
};

void cmd_slice(const SliceFlags& f, const CommonFlags& common) {
  SliceConfig cfg = default_slice_config();
  if (!f.api_list.empty()) cfg.api_list = load_api_list(f.api_list);
  cfg.max_slice_lines = f.max_lines;
  cfg.def_use_hops = f.hops;
  cfg.validate();
  std::set<Kind> wanted;
  for (const auto& k : f.kinds) wanted.insert(parse_kind(k));
  (void)resolve_seed(common, std::nullopt);  // slicing is deterministic

  struct FileResult {
    std::vector<Candidate> candidates;
    std::vector<std::string> slices;
  };
  std::vector<FileResult> results(f.inputs.size());
  parallel_for(f.inputs.size(), common.jobs, [&](std::size_t i) {
    const std::string source = read_file(f.inputs[i]);
    try {
      for (auto& c : extract_candidates(source, cfg)) {
        if (!wanted.empty() && wanted.count(c.kind) == 0) continue;
        results[i].slices.push_back(build_slice(source, c, cfg));
        results[i].candidates.push_back(std::move(c));
      }
    } catch (const DataError& e) {
      throw DataError(f.inputs[i] + ": " + e.what());
    }
  });

  std::string candidates_jsonl;
  SampleSet samples;
  std::size_t total = 0;
  for (std::size_t i = 0; i < f.inputs.size(); ++i) {
    const std::string stem = fs::path(f.inputs[i]).filename().string();
    for (std::size_t k = 0; k < results[i].candidates.size(); ++k) {
      const Candidate& c = results[i].candidates[k];
      const std::string id = stem + ":" + std::to_string(c.line) + ":" +
                             std::to_string(c.column) + ":" + std::string(to_string(c.kind));
      ordered_json j;
      j["id"] = id;
      j["kind"] = std::string(to_string(c.kind));
      j["file"] = f.inputs[i];
      j["line"] = c.line;
      j["column"] = c.column;
      j["focus"] = c.focus;
      j["code"] = results[i].slices[k];
      candidates_jsonl += j.dump() + "\n";
      if (f.label >= 0) {
        samples.add(Sample{id, c.kind, label_from_int(f.label), results[i].slices[k],
                           f.inputs[i]});
      }
      ++total;
    }
  }
  const fs::path dir = ensure_dir(common.out);
  write_file(out_file(dir, "candidates.jsonl"), candidates_jsonl);
  if (f.label >= 0) save(samples, out_file(dir, "samples.jsonl"));
  progress("sliced " + std::to_string(f.inputs.size()) + " file(s): " +
           std::to_string(total) + " candidate(s)");
}

// ---- build-dataset ----

struct BuildFlags {
  std::uint64_t synthetic = 0;
  double hard_fraction = 0.2;
  std::string reference;
  std::string gadget;
  std::string kind;
  std::vector<std::string> jsonl;
};

void cmd_build(CLI::App* cmd, const BuildFlags& f, const CommonFlags& common) {
  const int modes = (cmd->count("--synthetic") > 0) + !f.reference.empty() +
                    !f.gadget.empty() + !f.jsonl.empty();
  if (modes != 1) {
    throw ConfigError(
        "build-dataset needs exactly one of --synthetic, --reference, --gadget, --jsonl");
  }
  const std::uint64_t seed = resolve_seed(common, std::nullopt);
  SampleSet corpus;
  if (cmd->count("--synthetic") > 0) {
    SyntheticOptions opts;
    opts.counts = desk_manifest(f.synthetic);
    opts.seed = seed;
    opts.hard_fraction = f.hard_fraction;
    corpus = generate_synthetic(opts);
  } else if (!f.reference.empty()) {
    corpus = synthesize_from_manifest(parse_manifest_json(read_file(f.reference)));
  } else if (!f.gadget.empty()) {
    if (f.kind.empty()) throw ConfigError("--gadget requires --kind");
    corpus = load(f.gadget, Format::GadgetText, parse_kind(f.kind));
  } else {
    for (const auto& path : f.jsonl) {
      for (const auto& s : load(path, Format::JsonLines)) corpus.add(s);
    }
  }
  const fs::path dir = ensure_dir(common.out);
  save(corpus, out_file(dir, "corpus.jsonl"));
  write_file(out_file(dir, "manifest.json"), manifest_to_json(corpus.manifest()));
  progress("wrote " + std::to_string(corpus.size()) + " samples");
}

// ---- balance ----

struct BalanceFlags {
  std::string input;
  std::string hypothesis;
  bool remainder = false;
};

void cmd_balance(const BalanceFlags& f, const CommonFlags& common) {
  const Hypothesis h = parse_hypothesis(f.hypothesis);
  const std::uint64_t seed = resolve_seed(common, std::nullopt);
  const SampleSet corpus = load(f.input, Format::JsonLines);
  progress("loaded " + std::to_string(corpus.size()) + " samples");
  const BalancedSet balanced = balance(corpus, h, seed);
  const fs::path dir = ensure_dir(common.out);
  save(balanced.samples, out_file(dir, "balanced.jsonl"));
  write_file(out_file(dir, "manifest.json"), balanced_manifest_json(balanced));
  if (f.remainder) {
    save(slicevuln::remainder(corpus, balanced.samples), out_file(dir, "remainder.jsonl"));
  }
  progress("balanced to " + std::to_string(balanced.samples.size()) + " samples (" +
           std::string(to_string(h)) + ")");
}

// ---- train ----

void cmd_train(CLI::App* cmd, const std::string& input, const SpecFlags& sf,
               const CommonFlags& common) {
  const RunConfig rc = load_spec(cmd, sf, common);
  const std::string path = !input.empty() ? input : rc.corpus_path.value_or("");
  if (path.empty()) throw ConfigError("train needs --in or paths.corpus");
  const SampleSet pool = load(path, Format::JsonLines);
  FitResult fitted = fit(rc.spec, pool, progress);
  const fs::path dir = ensure_dir(common.out);
  save_model(dir, fitted.model, fitted.encoder);
  write_file(out_file(dir, "history.csv"), history_csv(fitted.history));
  ordered_json j;
  j["seed"] = rc.spec.seed;
  j["train_size"] = fitted.split.train.size();
  j["validation_size"] = fitted.split.test.size();
  j["train_hash"] = hex64(fitted.split.train.fingerprint());
  j["validation_hash"] = hex64(fitted.split.test.fingerprint());
  j["best_epoch"] = fitted.history.best_epoch;
  j["stopped_epoch"] = fitted.history.stopped_epoch;
  write_file(out_file(dir, "train.json"), j.dump(2) + "\n");
  save(fitted.split.test, out_file(dir, "validation.jsonl"));
  progress("trained model written to " + dir.string());
}

// ---- evaluate ----

void cmd_evaluate(const std::string& model_dir, const std::string& input,
                  const CommonFlags& common) {
  (void)resolve_seed(common, std::nullopt);  // inference is deterministic
  const fs::path mdir(model_dir);
  Vocab vocab = Vocab::load(out_file(mdir, "vocab.tsv"));
  const std::uint64_t vhash = vocab.hash();
  const TextEncoder encoder =
      encoder_from_settings(read_file(out_file(mdir, "encoder.json")), std::move(vocab));
  const auto model = load_checkpoint<float>(out_file(mdir, "model.ckpt"), vhash);
  const SampleSet test = load(input, Format::JsonLines);
  const Evaluation ev = evaluate(model, encoder, test, common.jobs);
  const Aggregate agg = aggregate(ev.confusion);

  std::vector<std::pair<std::string, MetricSet>> rows;
  for (const auto& [k, m] : agg.per_kind) rows.emplace_back(std::string(to_string(k)), m);
  rows.emplace_back("Overall", agg.overall);
  std::string csv = csv_header();
  for (const auto& [name, m] : rows) csv += csv_row(name, m);
  std::string predictions = "id,kind,label,prediction,probability\n";
  char buf[64];
  for (std::size_t i = 0; i < test.size(); ++i) {
    std::snprintf(buf, sizeof(buf), ",%d,%d,%.17g\n", to_int(test[i].label),
                  to_int(ev.predictions[i]), ev.probabilities[i]);
    predictions += test[i].id + "," + std::string(to_string(test[i].kind)) + buf;
  }
  const fs::path dir = ensure_dir(common.out);
  write_file(out_file(dir, "metrics.csv"), csv);
  write_file(out_file(dir, "metrics.txt"), format_table(rows));
  write_file(out_file(dir, "predictions.csv"), predictions);
  progress("evaluated " + std::to_string(test.size()) + " samples");
}

// ---- run-strategy ----

struct StrategyFlags {
  std::string strategy;
  std::string corpus;
  std::uint64_t synthetic = 0;
  bool no_checkpoint = false;
};

std::string resources_json(const ResourceUsage& r) {
  ordered_json j;
  j["wall_time_s"] = r.wall_time_s;
  j["peak_resident_bytes"] = r.peak_resident_bytes;
  return j.dump(2) + "\n";
}

void cmd_run_strategy(CLI::App* cmd, const StrategyFlags& f, const SpecFlags& sf,
                      const CommonFlags& common) {
  RunConfig rc = load_spec(cmd, sf, common);
  if (!f.strategy.empty()) rc.spec.id = parse_strategy(f.strategy);
  std::string out = common.out;
  if (cmd->count("--out") == 0 && rc.out_dir) out = *rc.out_dir;

  SampleSet corpus;
  const std::string corpus_path = !f.corpus.empty() ? f.corpus : rc.corpus_path.value_or("");
  if (cmd->count("--synthetic") > 0) {
    if (!f.corpus.empty()) throw ConfigError("--corpus and --synthetic are exclusive");
    SyntheticOptions opts;
    opts.counts = desk_manifest(f.synthetic);
    opts.seed = rc.spec.seed;
    corpus = generate_synthetic(opts);
  } else if (!corpus_path.empty()) {
    corpus = load(corpus_path, Format::JsonLines);
  } else {
    throw ConfigError("run-strategy needs --corpus, --synthetic or paths.corpus");
  }
  progress("strategy " + std::string(to_string(rc.spec.id)) + " on " +
           std::to_string(corpus.size()) + " samples, seed " + std::to_string(rc.spec.seed));

  RunArtifacts artifacts;
  const Report report = run(rc.spec, corpus, progress, f.no_checkpoint ? nullptr : &artifacts);
  const fs::path dir = ensure_dir((fs::path(out) / run_id(rc.spec)).string());
  emit(report, ReportFormat::Csv, out_file(dir, "metrics.csv"));
  emit(report, ReportFormat::Table, out_file(dir, "metrics.txt"));
  emit(report, ReportFormat::Json, out_file(dir, "report.json"));
  write_file(out_file(dir, "resources.json"), resources_json(report.resources));
  write_file(out_file(dir, "history.csv"), history_csv(report.history));
  if (artifacts.model) save_model(dir, *artifacts.model, *artifacts.encoder);
  progress("overall F1 " + format_percent(report.overall.f1) + ", results in " +
           dir.string());
}

// ---- report ----

void cmd_report(const std::vector<std::string>& inputs, const std::string& format,
                const CommonFlags& common) {
  (void)resolve_seed(common, std::nullopt);
  const ReportFormat fmt = parse_report_format(format);
  const char* ext = fmt == ReportFormat::Csv ? "csv" : fmt == ReportFormat::Json ? "json" : "txt";
  std::vector<Report> reports;
  for (const auto& path : inputs) reports.push_back(report_from_json(read_file(path)));
  const fs::path dir = ensure_dir(common.out);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const std::string name = std::to_string(i + 1) + "-" +
                             std::string(to_string(reports[i].strategy)) + "." + ext;
    emit(reports[i], fmt, out_file(dir, name));
  }
  if (reports.size() >= 2) write_file(out_file(dir, "compare.txt"), compare(reports));
  progress("rendered " + std::to_string(reports.size()) + " report(s)");
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"slicevuln: slice-based vulnerability detection pipeline", "slicevuln"};
  app.require_subcommand(1);
  app.add_flag("-q,--quiet", g_quiet, "Suppress progress messages");

  CommonFlags c_slice, c_build, c_balance, c_train, c_eval, c_run, c_report;

  SliceFlags slice_f;
  auto* slice = app.add_subcommand("slice", "Extract candidate slices from C/C++ files");
  add_common(slice, c_slice, "slices");
  slice->add_option("--in", slice_f.inputs, "Source files")->required()->check(CLI::ExistingFile);
  slice->add_option("--api-list", slice_f.api_list)->check(CLI::ExistingFile);
  slice->add_option("--kind", slice_f.kinds, "Keep only these kinds (API, AU, PU, AE)");
  slice->add_option("--max-lines", slice_f.max_lines)->capture_default_str();
  slice->add_option("--hops", slice_f.hops)->capture_default_str();
  slice->add_option("--label", slice_f.label, "Also write samples.jsonl with this label")
      ->check(CLI::Range(0, 1));

  BuildFlags build_f;
  auto* build = app.add_subcommand("build-dataset", "Assemble a canonical JSON-lines corpus");
  add_common(build, c_build, "dataset");
  build->add_option("--synthetic", build_f.synthetic, "Generate N planted-pattern samples")
      ->check(CLI::PositiveNumber);
  build->add_option("--hard-fraction", build_f.hard_fraction,
                    "Share of synthetic samples using hard templates")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  build->add_option("--reference", build_f.reference, "Placeholder corpus from a count manifest")
      ->check(CLI::ExistingFile);
  build->add_option("--gadget", build_f.gadget, "Gadget-text file")->check(CLI::ExistingFile);
  build->add_option("--kind", build_f.kind, "Kind of the gadget-text records");
  build->add_option("--jsonl", build_f.jsonl, "Merge JSON-lines files")->check(CLI::ExistingFile);

  BalanceFlags balance_f;
  auto* bal = app.add_subcommand("balance", "Down-sample a corpus under H1 or H2");
  add_common(bal, c_balance, "balanced");
  bal->add_option("--in", balance_f.input)->required()->check(CLI::ExistingFile);
  bal->add_option("--hypothesis", balance_f.hypothesis, "h1 or h2")->required();
  bal->add_flag("--remainder", balance_f.remainder, "Also write remainder.jsonl");

  std::string train_in;
  SpecFlags train_spec;
  auto* tr = app.add_subcommand("train", "Split, tokenize and train a classifier");
  add_common(tr, c_train, "model");
  tr->add_option("--in", train_in, "Training pool (JSON lines)")->check(CLI::ExistingFile);
  add_spec_flags(tr, train_spec);

  std::string eval_model, eval_in;
  auto* ev = app.add_subcommand("evaluate", "Score a trained model on a labeled set");
  add_common(ev, c_eval, "evaluation");
  ev->add_option("--model", eval_model, "Directory written by train")
      ->required()
      ->check(CLI::ExistingDirectory);
  ev->add_option("--in", eval_in)->required()->check(CLI::ExistingFile);

  StrategyFlags run_f;
  SpecFlags run_spec;
  auto* rs = app.add_subcommand("run-strategy", "Run S1, S2 or S3 end to end");
  add_common(rs, c_run, "runs");
  add_spec_flags(rs, run_spec);
  rs->add_option("--strategy", run_f.strategy, "S1, S2 or S3");
  rs->add_option("--corpus", run_f.corpus, "Corpus in JSON-lines form")->check(CLI::ExistingFile);
  rs->add_option("--synthetic", run_f.synthetic, "Use an N-sample synthetic corpus")
      ->check(CLI::PositiveNumber);
  rs->add_flag("--no-checkpoint", run_f.no_checkpoint, "Skip writing model files");

  std::vector<std::string> report_in;
  std::string report_format = "table";
  auto* rep = app.add_subcommand("report", "Render and compare report.json files");
  add_common(rep, c_report, "reports");
  rep->add_option("--in", report_in, "report.json files")->required()->check(CLI::ExistingFile);
  rep->add_option("--format", report_format, "table, csv or json")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (slice->parsed()) {
      cmd_slice(slice_f, c_slice);
    } else if (build->parsed()) {
      cmd_build(build, build_f, c_build);
    } else if (bal->parsed()) {
      cmd_balance(balance_f, c_balance);
    } else if (tr->parsed()) {
      cmd_train(tr, train_in, train_spec, c_train);
    } else if (ev->parsed()) {
      cmd_evaluate(eval_model, eval_in, c_eval);
    } else if (rs->parsed()) {
      cmd_run_strategy(rs, run_f, run_spec, c_run);
    } else if (rep->parsed()) {
      cmd_report(report_in, report_format, c_report);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace slicevuln
