// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#include <fmt/format.h>

#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "laser/error.hpp"

namespace {

using laser::cli::RunConfig;

struct Overrides {
  std::optional<std::string> config;
  std::optional<std::string> lang;
  std::optional<std::string> backend;
  std::optional<double> minor;
  std::optional<double> major;
  std::optional<double> wer_threshold;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> pack_dir;
  std::optional<std::string> annotations;
  std::optional<std::string> predictions;
  std::optional<std::string> endpoint;
  std::optional<std::string> model;
  std::optional<std::string> cache_dir;
  std::optional<std::size_t> batch_size;
  std::optional<std::string> example_language;
  std::optional<double> rate;
  std::vector<std::string> names;
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "Run configuration file (JSON)");
  app->add_option("--lang", o.lang, "Language code of the pack to use");
  app->add_option("--pack-dir", o.pack_dir, "Directory holding <lang>.json packs");
  app->add_option("--backend", o.backend, "rules | llm | human-import | pairs");
  app->add_option("--weights-minor", o.minor, "Weight of a minor error");
  app->add_option("--weights-major", o.major, "Weight of a major error");
  app->add_option("--wer-threshold", o.wer_threshold, "WER above which a sentence enters the report");
  app->add_option("--seed", o.seed, "Seed for sampling");
  app->add_option("--out", o.out, "Output directory");
}

RunConfig effective(const Overrides& o) {
  RunConfig c = laser::cli::load_config(o.config ? std::optional<std::filesystem::path>(*o.config) : std::nullopt);
  if (o.lang) c.lang = *o.lang;
  if (o.pack_dir) c.pack_dir = *o.pack_dir;
  if (o.backend) c.backend = *o.backend;
  if (o.minor) c.weights.minor = *o.minor;
  if (o.major) c.weights.major = *o.major;
  if (o.wer_threshold) c.wer_threshold = *o.wer_threshold;
  if (o.seed) c.seed = *o.seed;
  if (o.out) c.out = *o.out;
  if (o.annotations) c.annotations = *o.annotations;
  if (o.predictions) c.predictions = *o.predictions;
  if (o.endpoint) c.judge.endpoint = *o.endpoint;
  if (o.model) c.judge.model = *o.model;
  if (o.cache_dir) c.judge.cache_dir = *o.cache_dir;
  if (o.batch_size) c.judge.batch_size = *o.batch_size;
  if (o.example_language) c.example_language = *o.example_language;
  if (o.rate) c.identical_sample_rate = *o.rate;
  if (!o.names.empty()) c.proper_nouns.insert(c.proper_nouns.end(), o.names.begin(), o.names.end());
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LASER: meaning-aware scoring of ASR transcripts"};
  app.require_subcommand(1);
  Overrides o;

  std::string corpus;
  auto* score = app.add_subcommand("score", "Score a corpus of reference/hypothesis pairs");
  add_common(score, o);
  score->add_option("corpus", corpus, "Corpus (.jsonl or .tsv)")->required();
  score->add_option("--annotations", o.annotations, "Annotation TSV for the human-import backend");
  score->add_option("--predictions", o.predictions, "Pair predictions JSONL for the pairs backend");
  score->add_option("--endpoint", o.endpoint, "Chat-completion endpoint URL for the llm backend");
  score->add_option("--model", o.model, "Model id for the llm backend");
  score->add_option("--cache-dir", o.cache_dir, "Response cache directory for the llm backend");
  score->add_option("--batch-size", o.batch_size, "Sentence pairs per judge request");
  score->add_option("--example-language", o.example_language, "Language of the prompt's worked example");
  score->add_option("--name", o.names, "Extra proper noun (repeatable)");

  std::string ref, hyp;
  auto* align = app.add_subcommand("align", "Show the word alignment of two sentences");
  add_common(align, o);
  align->add_option("ref", ref, "Reference text")->required();
  align->add_option("hyp", hyp, "Hypothesis text")->required();
  align->add_option("--name", o.names, "Extra proper noun (repeatable)");

  std::vector<std::string> inputs, columns, score_files;
  bool raw = false;
  auto* correlate = app.add_subcommand("correlate", "Pearson correlation matrix across score columns");
  add_common(correlate, o);
  correlate->add_option("evaluations", inputs, "Evaluation JSONL files, optionally name=path")->required();
  correlate->add_option("--scores", score_files, "External score CSV (id,<metric>,...)");
  correlate->add_option("--columns", columns, "Columns to correlate")->delimiter(',');
  correlate->add_flag("--raw", raw, "Use unclamped LASER");

  std::string evals;
  std::optional<double> split;
  auto* report = app.add_subcommand("report", "High-WER qualitative report");
  add_common(report, o);
  report->add_option("evaluations", evals, "Evaluation JSONL")->required();
  report->add_option("--laser-split", split, "LASER split between buckets (default: median)");

  std::optional<std::string> heldout;
  auto* export_pairs = app.add_subcommand("export-pairs", "Export word-pair training data");
  add_common(export_pairs, o);
  export_pairs->add_option("evaluations", evals, "Evaluation JSONL")->required();
  export_pairs->add_option("--rate", o.rate, "Sampling rate of identical pairs");
  export_pairs->add_option("--heldout", heldout, "File of held-out sentence ids");

  std::string pred, gold;
  auto* eval_classifier = app.add_subcommand("eval-classifier", "Per-class accuracy of pair predictions");
  add_common(eval_classifier, o);
  eval_classifier->add_option("predicted", pred, "Predicted labels")->required();
  eval_classifier->add_option("gold", gold, "Gold labels")->required();
  std::vector<std::size_t> train_val;
  eval_classifier->add_option("--train-val-counts", train_val, "Per-class train+val sizes, for the table")
      ->delimiter(',')
      ->expected(4);

  std::string log = "annotations.log.jsonl", host = "127.0.0.1", ui;
  int port = 8080;
  auto* annotate = app.add_subcommand("annotate", "Serve the annotation API");
  add_common(annotate, o);
  annotate->add_option("corpus", corpus, "Corpus to enqueue");
  annotate->add_option("--log", log, "Append-only annotation log");
  annotate->add_option("--host", host, "Bind address");
  annotate->add_option("--port", port, "Port");
  annotate->add_option("--ui", ui, "Static UI bundle directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : laser::cli::kUsage;
  }

  try {
    const RunConfig config = effective(o);
    if (score->parsed()) return laser::cli::cmd_score(config, corpus);
    if (align->parsed()) return laser::cli::cmd_align(config, ref, hyp);
    if (correlate->parsed()) {
      std::vector<std::filesystem::path> files(score_files.begin(), score_files.end());
      return laser::cli::cmd_correlate(config, inputs, files, columns, raw);
    }
    if (report->parsed()) return laser::cli::cmd_report(config, evals, split);
    if (export_pairs->parsed()) {
      return laser::cli::cmd_export_pairs(
          config, evals, heldout ? std::optional<std::filesystem::path>(*heldout) : std::nullopt);
    }
    if (eval_classifier->parsed()) return laser::cli::cmd_eval_classifier(config, pred, gold, o.out.has_value(), train_val);
    if (annotate->parsed()) return laser::cli::cmd_annotate(config, corpus, log, host, port, ui);
  } catch (const laser::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return laser::cli::kUsage;
  } catch (const laser::TransportError& e) {
    std::cerr << "transport error: " << e.what() << "\n";
    return laser::cli::kTransport;
  } catch (const laser::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return laser::cli::kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return laser::cli::kData;
  }
  return laser::cli::kUsage;
}
