// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include "json.hpp"
#include "laser/annotate.hpp"
#include "laser/classify_rules.hpp"
#include "laser/error.hpp"
#include "laser/ingest.hpp"
#include "laser/serialize.hpp"
#include "laser/stats.hpp"
#include "laser/table_classifier.hpp"

#ifndef LASER_DEFAULT_DATA_DIR
#define LASER_DEFAULT_DATA_DIR "."
#endif

namespace laser::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Runs fn(i) for i in [0, n) on a few threads; fn must only touch slot i.
template <typename Fn>
void parallel_for(std::size_t n, Fn fn) {
  const std::size_t workers = std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) fn(i);
    });
  }
  for (auto& t : threads) t.join();
}

// Stand-in when no endpoint is configured: cache hits work, misses fail.
class OfflineClient final : public ChatClient {
 public:
  std::string send(const std::string&) override {
    throw TransportError("no judge endpoint configured and the response cache has no entry");
  }
};

fs::path resolve(const fs::path& base, const std::string& value) {
  fs::path p(value);
  return p.is_absolute() || base.empty() ? p : base / p;
}

LanguagePack load_pack(const RunConfig& c) {
  LanguagePack pack = LanguagePack::load(c.pack_dir, c.lang);
  return c.proper_nouns.empty() ? pack : pack.with_proper_nouns(c.proper_nouns);
}

RunMeta meta_for(const RunConfig& c, const std::string& command, const LanguagePack* pack) {
  RunMeta m;
  m.command = command;
  m.config_hash = sha256_hex(c.canonical()).substr(0, 16);
  m.lang = c.lang;
  m.pack_version = pack ? pack->version() : "";
  m.backend = c.backend;
  m.weights = c.weights;
  return m;
}

std::string summary_json(std::span<const SentenceEvaluation> evals, const FilterResult& filter,
                         const std::vector<PairFailure>& failures, const RunMeta& meta) {
  ojson s;
  s["meta"] = json::parse(meta_line(meta))["meta"];
  s["sentences"] = evals.size();
  s["removed_zero_wer"] = filter.removed_ids.size();
  s["removed_ids"] = filter.removed_ids;
  if (!evals.empty()) {
    const CorpusSummary cs = aggregate_corpus(evals);
    s["mean_laser"] = cs.mean_laser;
    s["mean_wer"] = cs.mean_wer;
    ojson levels = ojson::object();
    for (auto l : kAllLevels) levels[std::string(to_string(l))] = cs.level_counts.count(l) ? cs.level_counts.at(l) : 0;
    s["levels"] = std::move(levels);
    ojson cats = ojson::object();
    for (const auto& [c, n] : cs.category_counts) cats[std::string(to_string(c))] = n;
    s["categories"] = std::move(cats);
  }
  ojson f = ojson::array();
  for (const auto& x : failures) f.push_back({{"id", x.id}, {"reason", x.reason}});
  s["failures"] = std::move(f);
  return s.dump(2) + "\n";
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] != '#') out.push_back(line);
  }
  return out;
}

std::string column_name_for(const std::string& classifier) {
  std::string out = "laser_";
  for (char c : classifier) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

}  // namespace

fs::path default_data_dir() {
  if (const char* env = std::getenv("LASER_DATA_DIR")) return env;
  return LASER_DEFAULT_DATA_DIR;
}

RunConfig load_config(const std::optional<fs::path>& path) {
  RunConfig c;
  c.pack_dir = default_data_dir() / "packs";
  c.prompt_dir = default_data_dir() / "prompts";
  if (!path) return c;
  std::ifstream in(*path);
  if (!in) throw ConfigError(fmt::format("cannot open config {}", path->string()));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", path->string(), e.what()));
  }
  const fs::path base = path->parent_path();
  try {
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      const std::string& k = it.key();
      const json& v = it.value();
      if (k == "lang") c.lang = v.get<std::string>();
      else if (k == "pack_dir") c.pack_dir = resolve(base, v.get<std::string>());
      else if (k == "prompt_dir") c.prompt_dir = resolve(base, v.get<std::string>());
      else if (k == "example_language") c.example_language = v.get<std::string>();
      else if (k == "backend") c.backend = v.get<std::string>();
      else if (k == "out") c.out = resolve(base, v.get<std::string>());
      else if (k == "seed") c.seed = v.get<std::uint64_t>();
      else if (k == "wer_threshold") c.wer_threshold = v.get<double>();
      else if (k == "identical_sample_rate") c.identical_sample_rate = v.get<double>();
      else if (k == "annotations") c.annotations = resolve(base, v.get<std::string>());
      else if (k == "predictions") c.predictions = resolve(base, v.get<std::string>());
      else if (k == "proper_nouns") c.proper_nouns = v.get<std::vector<std::string>>();
      else if (k == "weights") {
        c.weights.minor = v.value("minor", c.weights.minor);
        c.weights.major = v.value("major", c.weights.major);
      } else if (k == "judge") {
        for (auto jt = v.begin(); jt != v.end(); ++jt) {
          const std::string& jk = jt.key();
          const json& jv = jt.value();
          if (jk == "endpoint") c.judge.endpoint = jv.get<std::string>();
          else if (jk == "model") c.judge.model = jv.get<std::string>();
          else if (jk == "batch_size") c.judge.batch_size = jv.get<std::size_t>();
          else if (jk == "max_retries") c.judge.max_retries = jv.get<std::size_t>();
          else if (jk == "timeout_seconds") c.judge.timeout_seconds = jv.get<double>();
          else if (jk == "temperature") c.judge.temperature = jv.get<double>();
          else if (jk == "cache_dir") c.judge.cache_dir = resolve(base, jv.get<std::string>());
          else if (jk == "max_in_flight") c.judge.max_in_flight = jv.get<std::size_t>();
          else if (jk == "api_key_env") c.judge.api_key_env = jv.get<std::string>();
          else throw ConfigError(fmt::format("{}: unknown judge key '{}'", path->string(), jk));
        }
      } else {
        throw ConfigError(fmt::format("{}: unknown key '{}'", path->string(), k));
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", path->string(), e.what()));
  }
  return c;
}

void RunConfig::validate() const {
  static const std::vector<std::string> kBackends = {"rules", "llm", "human-import", "pairs"};
  if (std::find(kBackends.begin(), kBackends.end(), backend) == kBackends.end()) {
    throw ConfigError(fmt::format("unknown backend '{}' (rules, llm, human-import, pairs)", backend));
  }
  weights.validate();
  if (!fs::is_directory(pack_dir)) throw ConfigError(fmt::format("pack directory {} not found", pack_dir.string()));
  if (!(wer_threshold >= 0.0)) throw ConfigError("wer threshold must be non-negative");
  if (!(identical_sample_rate >= 0.0 && identical_sample_rate <= 1.0)) {
    throw ConfigError("identical sample rate must lie in [0, 1]");
  }
  if (backend == "llm") {
    judge.validate();
    if (!fs::is_directory(prompt_dir)) {
      throw ConfigError(fmt::format("prompt directory {} not found", prompt_dir.string()));
    }
  }
  if (backend == "human-import" && !fs::is_regular_file(annotations)) {
    throw ConfigError("human-import backend needs an existing --annotations file");
  }
  if (backend == "pairs" && !fs::is_regular_file(predictions)) {
    throw ConfigError("pairs backend needs an existing --predictions file");
  }
}

std::string RunConfig::canonical() const {
  ojson j;
  j["lang"] = lang;
  j["pack_dir"] = pack_dir.string();
  j["backend"] = backend;
  j["weights"] = {{"minor", weights.minor}, {"major", weights.major}};
  j["seed"] = seed;
  j["wer_threshold"] = wer_threshold;
  j["identical_sample_rate"] = identical_sample_rate;
  j["proper_nouns"] = proper_nouns;
  if (backend == "llm") {
    j["prompt_dir"] = prompt_dir.string();
    j["example_language"] = example_language;
    j["judge"] = {{"endpoint", judge.endpoint},       {"model", judge.model},
                  {"batch_size", judge.batch_size}, {"max_retries", judge.max_retries},
                  {"temperature", judge.temperature}};
  }
  if (backend == "human-import") j["annotations"] = annotations.string();
  if (backend == "pairs") j["predictions"] = predictions.string();
  return j.dump();
}

int cmd_score(const RunConfig& config, const fs::path& corpus_path) {
  config.validate();
  const auto corpus = load_corpus(corpus_path);
  // Records carry their own language; the configured one fills the gaps.
  std::map<std::string, LanguagePack> packs;
  packs.emplace(config.lang, load_pack(config));
  auto lang_of = [&](const CorpusRecord& r) { return r.lang.empty() ? config.lang : r.lang; };
  for (const auto& r : corpus) {
    if (packs.count(lang_of(r))) continue;
    RunConfig other = config;
    other.lang = lang_of(r);
    packs.emplace(other.lang, load_pack(other));
  }
  auto pack_of = [&](const CorpusRecord& r) -> const LanguagePack& { return packs.at(lang_of(r)); };
  const LanguagePack& pack = packs.at(config.lang);

  FilterResult filter;
  for (const auto& r : corpus) {
    auto one = filter_zero_wer(std::span<const CorpusRecord>(&r, 1), pack_of(r));
    filter.kept.insert(filter.kept.end(), one.kept.begin(), one.kept.end());
    filter.removed_ids.insert(filter.removed_ids.end(), one.removed_ids.begin(), one.removed_ids.end());
  }
  for (const auto& id : filter.removed_ids) std::cerr << fmt::format("removed zero-WER pair {}\n", id);

  RunMeta meta = meta_for(config, "score", &pack);
  meta.extra["corpus_records"] = corpus.size();
  meta.extra["removed_zero_wer"] = filter.removed_ids.size();
  if (packs.size() > 1) {
    auto langs = ojson::array();
    for (const auto& [lang, p] : packs) langs.push_back(lang);
    meta.extra["languages"] = langs;
  }

  std::vector<SentenceEvaluation> evals;
  std::vector<PairFailure> failures;
  int exit_code = kOk;

  if (config.backend == "rules" || config.backend == "pairs") {
    const RuleClassifier rules;
    std::optional<LookupClassifier> lookup;
    if (config.backend == "pairs") lookup.emplace(LookupClassifier::load(config.predictions));
    const PairClassifier& classifier = lookup ? static_cast<const PairClassifier&>(*lookup) : rules;
    EvaluateOptions options;
    options.weights = config.weights;
    std::vector<std::optional<SentenceEvaluation>> slots(filter.kept.size());
    std::vector<std::string> errors(filter.kept.size());
    parallel_for(filter.kept.size(), [&](std::size_t i) {
      const auto& r = filter.kept[i];
      try {
        slots[i] = evaluate_sentence(r.id, r.ref, r.hyp, classifier, pack_of(r), options);
      } catch (const DataError& e) {
        errors[i] = e.what();
      }
    });
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (slots[i]) {
        evals.push_back(std::move(*slots[i]));
      } else {
        failures.push_back({filter.kept[i].id, errors[i]});
      }
    }
  } else if (config.backend == "llm") {
    const PromptTemplate tmpl = PromptTemplate::load(config.prompt_dir, config.example_language);
    const char* key = std::getenv(config.judge.api_key_env.c_str());
    std::unique_ptr<ChatClient> client;
    if (config.judge.endpoint.empty()) {
      client = std::make_unique<OfflineClient>();
    } else {
      client = std::make_unique<HttpChatClient>(
          config.judge.endpoint, key ? key : "",
          std::chrono::milliseconds(static_cast<long long>(config.judge.timeout_seconds * 1000)));
    }
    // One judge run per language so every pair is checked against its own pack.
    JudgeReport report;
    for (const auto& [lang, lang_pack] : packs) {
      std::vector<JudgeInput> inputs;
      for (const auto& r : filter.kept) {
        if (lang_of(r) == lang) inputs.push_back({r.id, r.ref, r.hyp});
      }
      if (inputs.empty()) continue;
      JudgeResult result = judge_corpus(inputs, tmpl, config.judge, *client, lang_pack, config.weights);
      std::move(result.evaluations.begin(), result.evaluations.end(), std::back_inserter(evals));
      std::move(result.report.failures.begin(), result.report.failures.end(), std::back_inserter(failures));
      report.batches += result.report.batches;
      report.requests += result.report.requests;
      report.cache_hits += result.report.cache_hits;
      report.inconsistent += result.report.inconsistent;
    }
    meta.extra["model"] = config.judge.model;
    meta.extra["batch_size"] = config.judge.batch_size;
    meta.extra["prompt_per_request"] = "full";
    meta.extra["example_language"] = config.example_language;
    std::cerr << fmt::format("judge: {} batches, {} requests, {} cache hits, {} inconsistent judgments\n",
                             report.batches, report.requests, report.cache_hits, report.inconsistent);
  } else {
    std::map<std::string, std::size_t> sizes;
    std::map<std::string, const CorpusRecord*> kept;
    for (const auto& r : corpus) sizes[r.id] = tokenize(r.ref, pack_of(r), r.id).size();
    for (const auto& r : filter.kept) kept[r.id] = &r;
    std::ifstream in(config.annotations);
    const auto annotations = import_human_annotations(in, sizes, config.weights, config.annotations.string());
    for (const auto& a : annotations) {
      for (const auto& w : a.warnings) std::cerr << "warning: " << w << "\n";
      auto it = kept.find(a.id);
      if (it == kept.end()) continue;
      SentenceEvaluation e;
      e.id = a.id;
      e.ref_text = it->second->ref;
      e.hyp_text = it->second->hyp;
      e.classifier_id = "human";
      e.ref_word_count = a.reference_words;
      e.total_penalty = a.score.total_penalty;
      e.laser_raw = a.score.laser_raw;
      e.laser = a.score.laser;
      const LanguagePack& p = pack_of(*it->second);
      e.word_errors = wer(tokenize(e.ref_text, p), tokenize(e.hyp_text, p));
      e.warnings = a.warnings;
      evals.push_back(std::move(e));
    }
  }
  if (!failures.empty()) exit_code = kData;

  std::stable_sort(evals.begin(), evals.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  write_file(config.out / "evaluations.jsonl", evaluations_jsonl(evals, meta));
  const std::string summary = summary_json(evals, filter, failures, meta);
  write_file(config.out / "summary.json", summary);
  std::cout << summary;
  for (const auto& f : failures) std::cerr << fmt::format("failed {}: {}\n", f.id, f.reason);
  return exit_code;
}

int cmd_align(const RunConfig& config, const std::string& ref_text, const std::string& hyp_text) {
  config.weights.validate();
  if (!fs::is_directory(config.pack_dir)) {
    throw ConfigError(fmt::format("pack directory {} not found", config.pack_dir.string()));
  }
  const LanguagePack pack = load_pack(config);
  const TokenizedSentence ref = tokenize(ref_text, pack);
  const TokenizedSentence hyp = tokenize(hyp_text, pack);
  const Alignment base = levenshtein_align(ref, hyp, pack_aware_cost(pack));
  const Alignment merged = merge_pass(base, ref, hyp, pack);
  auto words = [](const TokenizedSentence& s, const Span& span) {
    std::string out;
    for (std::size_t i = span.begin; i < span.end; ++i) out += (out.empty() ? "" : " ") + s.tokens[i].normalized;
    return out.empty() ? std::string("-") : out;
  };
  auto folds = [&](const TokenizedSentence& s, const Span& span) {
    std::string out;
    for (std::size_t i = span.begin; i < span.end; ++i) out += (out.empty() ? "" : " ") + fold(s.tokens[i], pack);
    return out.empty() ? std::string("-") : out;
  };
  std::cout << fmt::format("{:>3}  {:<10} {:<22} {:<22} {:<22} {}\n", "#", "op", "ref", "hyp", "fold(ref)",
                           "fold(hyp)");
  for (std::size_t i = 0; i < merged.pairs.size(); ++i) {
    const auto& p = merged.pairs[i];
    std::cout << fmt::format("{:>3}  {:<10} {:<22} {:<22} {:<22} {}\n", i, to_string(p.op), words(ref, p.ref),
                             words(hyp, p.hyp), folds(ref, p.ref), folds(hyp, p.hyp));
  }
  const auto& c = base.counts;
  const ErrorRate e = wer_from_alignment(base);
  std::cout << fmt::format(
      "word alignment: {} match, {} substitute, {} delete, {} insert; distance {}; WER {:.4f}\n", c.matches,
      c.substitutions, c.deletions, c.insertions, base.distance, e.rate);
  std::cout << fmt::format("hyp->ref reading: {} insertions, {} deletions\n", c.deletions, c.insertions);
  if (merged.counts.joins || merged.counts.splits) {
    std::cout << fmt::format("after merging: {} join, {} split\n", merged.counts.joins, merged.counts.splits);
  }
  return kOk;
}

int cmd_correlate(const RunConfig& config, const std::vector<std::string>& inputs,
                  const std::vector<fs::path>& score_files, const std::vector<std::string>& columns, bool use_raw) {
  if (inputs.empty()) throw ConfigError("correlate needs at least one evaluation file");
  std::optional<ScoreTable> table;
  for (const auto& input : inputs) {
    std::string name;
    fs::path path = input;
    if (const auto eq = input.find('='); eq != std::string::npos) {
      name = input.substr(0, eq);
      path = input.substr(eq + 1);
    }
    const auto evals = load_evaluations(path);
    if (evals.empty()) throw DataError(fmt::format("{} holds no evaluations", path.string()));
    if (name.empty()) name = column_name_for(evals.front().classifier_id);
    if (!table) {
      std::vector<std::string> ids;
      for (const auto& e : evals) ids.push_back(e.id);
      table.emplace(std::move(ids));
      Column w, one_minus;
      for (const auto& e : evals) {
        w.push_back(e.word_errors.rate);
        one_minus.push_back(1.0 - e.word_errors.rate);
      }
      table->set_column("wer", std::move(w));
      table->set_column("one_minus_wer", std::move(one_minus));
    }
    if (table->has(name)) name += "_" + path.stem().string();
    Column col(table->rows());
    for (const auto& e : evals) {
      if (auto row = table->row_of(e.id)) {
        col[*row] = use_raw ? e.laser_raw : e.laser;
      } else {
        std::cerr << fmt::format("warning: {}: id '{}' not in the first file, skipped\n", path.string(), e.id);
      }
    }
    table->set_column(name, std::move(col));
  }
  for (const auto& f : score_files) {
    std::ifstream in(f);
    if (!in) throw DataError(fmt::format("cannot open {}", f.string()));
    for (const auto& w : merge_score_columns(*table, in, f.string())) std::cerr << "warning: " << w << "\n";
  }
  const std::vector<std::string> wanted = columns.empty() ? table->names() : columns;
  if (wanted.size() < 2) throw ConfigError("correlate needs at least two columns");
  const CorrelationMatrix m = correlation_matrix(*table, wanted);
  for (const auto& w : m.warnings) std::cerr << "warning: undefined correlation " << w << "\n";
  std::string meta = meta_line(meta_for(config, "correlate", nullptr));
  write_file(config.out / "correlation.csv", "# " + meta + m.to_csv(false));
  write_file(config.out / "correlation_percent.csv", "# " + meta + m.to_csv(true));
  write_file(config.out / "correlation.json", m.to_json());
  std::cout << m.to_csv(false);
  return kOk;
}

int cmd_report(const RunConfig& config, const fs::path& evals_path, std::optional<double> laser_split) {
  const auto evals = load_evaluations(evals_path);
  const QualitativeReport report = qualitative_report(evals, config.wer_threshold, laser_split);
  RunMeta meta = meta_for(config, "report", nullptr);
  meta.extra["wer_threshold"] = report.wer_threshold;
  meta.extra["laser_split"] = report.laser_split;
  write_file(config.out / "report.md", report.to_markdown());
  write_file(config.out / "report.jsonl", meta_line(meta) + report.to_jsonl());
  std::cout << report.to_markdown();
  return kOk;
}

int cmd_export_pairs(const RunConfig& config, const fs::path& evals_path, const std::optional<fs::path>& heldout) {
  const auto evals = load_evaluations(evals_path);
  ExportOptions options;
  options.identical_sample_rate = config.identical_sample_rate;
  options.seed = config.seed;
  if (heldout) {
    for (const auto& id : read_lines(*heldout)) options.heldout_ids.insert(id);
  }
  const TrainingExport exported = export_training_pairs(evals, options);
  RunMeta meta = meta_for(config, "export-pairs", nullptr);
  meta.extra["identical_sample_rate"] = options.identical_sample_rate;
  meta.extra["seed"] = options.seed;
  meta.extra["heldout_sentences"] = options.heldout_ids.size();
  write_file(config.out / "training_pairs.jsonl", meta_line(meta) + training_jsonl(exported));
  std::cout << fmt::format("exported {} pairs\n", exported.pairs.size());
  for (int k = 0; k < 4; ++k) {
    std::cout << fmt::format("  class {} ({}): {}\n", k, to_string(static_cast<PenaltyLevel>(k)),
                             exported.label_histogram[static_cast<std::size_t>(k)]);
  }
  return kOk;
}

int cmd_eval_classifier(const RunConfig& config, const fs::path& predicted, const fs::path& gold, bool write_csv,
                        const std::vector<std::size_t>& train_val_counts) {
  const auto p = load_labels(predicted);
  const auto g = load_labels(gold);
  std::array<std::size_t, kNumClasses> counts{};
  std::copy(train_val_counts.begin(), train_val_counts.end(), counts.begin());
  const AccuracyTable table = classifier_accuracy(p, g, counts);
  std::cout << table.to_text();
  if (write_csv) write_file(config.out / "accuracy.csv", table.to_csv());
  return kOk;
}

int cmd_annotate(const RunConfig& config, const fs::path& corpus_path, const fs::path& log, const std::string& host,
                 int port, const fs::path& ui_dir) {
  config.weights.validate();
  AnnotationStore store(log, config.weights);
  if (!corpus_path.empty()) {
    const auto corpus = load_corpus(corpus_path);
    std::map<std::string, std::vector<CorpusRecord>> by_lang;
    for (const auto& r : corpus) by_lang[r.lang.empty() ? config.lang : r.lang].push_back(r);
    std::size_t added = 0, skipped = 0;
    for (const auto& [lang, records] : by_lang) {
      RunConfig c = config;
      c.lang = lang;
      const LanguagePack pack = load_pack(c);
      const FilterResult filter = filter_zero_wer(records, pack);
      added += store.add_tasks(filter.kept, pack);
      skipped += filter.removed_ids.size();
    }
    std::cerr << fmt::format("queued {} new tasks ({} zero-WER pairs skipped)\n", added, skipped);
  }
  AnnotateServer server(store, ui_dir);
  std::cerr << fmt::format("serving annotation API on http://{}:{}/\n", host, port);
  if (!server.listen(host, port)) throw ConfigError(fmt::format("cannot listen on {}:{}", host, port));
  return kOk;
}

}  // namespace laser::cli
