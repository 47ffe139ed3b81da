// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#include "laser/judge.hpp"

#include <fmt/format.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <variant>

#include "json.hpp"
#include "laser/align.hpp"
#include "laser/error.hpp"
#include "laser/serialize.hpp"

namespace laser {
namespace {

std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  for (std::string w; ss >> w;) out.push_back(w);
  return out;
}

EditKind op_for(const JudgedPair& p) {
  if (p.original.empty()) return EditKind::kInsert;
  if (p.predicted.empty()) return EditKind::kDelete;
  return EditKind::kSubstitute;
}

struct BatchFailure {
  std::string reason;
};

using BatchOutcome = std::variant<std::monostate, std::vector<LlmJudgment>, BatchFailure>;

}  // namespace

void JudgeConfig::validate() const {
  if (batch_size < 1) throw ConfigError("judge batch size must be at least 1");
  if (!(temperature >= 0.0)) throw ConfigError("judge temperature must be non-negative");
  if (model.empty()) throw ConfigError("judge model id is empty (set --model or judge.model)");
  if (max_in_flight < 1) throw ConfigError("judge max_in_flight must be at least 1");
  if (!(timeout_seconds > 0.0)) throw ConfigError("judge timeout must be positive");
}

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

std::string ResponseCache::key_for(const std::string& model, const std::string& prompt) {
  return sha256_hex(model + '\n' + prompt);
}

std::optional<std::string> ResponseCache::get(const std::string& key) const {
  if (dir_.empty()) return std::nullopt;
  std::ifstream in(dir_ / (key + ".json"), std::ios::binary);
  if (!in) return std::nullopt;
  try {
    const auto doc = nlohmann::json::parse(in);
    return doc.at("response").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

void ResponseCache::put(const std::string& key, const std::string& request, const std::string& response) const {
  if (dir_.empty()) return;
  nlohmann::ordered_json doc;
  doc["request"] = request;
  doc["response"] = response;
  doc["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count();
  const auto final_path = dir_ / (key + ".json");
  auto tmp = final_path;
  tmp += fmt::format(".tmp{}", std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(fmt::format("cannot write cache entry {}", tmp.string()));
    out << doc.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, final_path);
}

SentenceEvaluation judgment_to_evaluation(const LlmJudgment& judgment, const JudgeInput& input,
                                          const LanguagePack& pack, const std::string& model,
                                          const PenaltyWeights& weights) {
  const JudgmentCheck check = validate_judgment(judgment, weights);
  const TokenizedSentence ref = tokenize(input.ref, pack, input.id);
  const TokenizedSentence hyp = tokenize(input.hyp, pack, input.id);

  SentenceEvaluation eval;
  eval.id = input.id;
  eval.ref_text = input.ref;
  eval.hyp_text = input.hyp;
  eval.ref_word_count = judgment.token_count;
  eval.classifier_id = model;
  eval.word_errors = wer(ref, hyp);

  auto add = [&](const std::vector<JudgedPair>& list, PenaltyLevel level) {
    for (const auto& p : list) {
      PenaltyClass cls{level, category_from_reason(level, p.reason), p.reason};
      eval.classified_pairs.push_back({split_words(p.original), split_words(p.predicted), op_for(p), std::move(cls)});
    }
  };
  add(judgment.non_penalizable, PenaltyLevel::kNonPenalizable);
  add(judgment.major, PenaltyLevel::kMajor);
  add(judgment.minor, PenaltyLevel::kMinor);

  eval.total_penalty = check.recomputed_penalty;
  eval.laser_raw = check.recomputed_score;
  eval.laser = std::max(0.0, check.recomputed_score);

  if (!check.consistent) {
    eval.warnings.push_back(fmt::format("inconsistent judgment: reported score {:.4f}, recomputed {:.4f} used",
                                        judgment.score, check.recomputed_score));
  }
  if (!std::isnan(judgment.total_penalty) &&
      std::abs(judgment.total_penalty - check.recomputed_penalty) > kScoreTolerance) {
    eval.warnings.push_back(fmt::format("reported total penalty {} differs from recomputed {}",
                                        judgment.total_penalty, check.recomputed_penalty));
  }
  if (judgment.token_count != ref.size()) {
    eval.warnings.push_back(
        fmt::format("judge counted {} reference tokens, toolkit counted {}", judgment.token_count, ref.size()));
  }
  const Alignment alignment = merge_pass(levenshtein_align(ref, hyp, pack_aware_cost(pack)), ref, hyp, pack);
  std::size_t mismatched = 0;
  for (const auto& p : alignment.pairs) mismatched += p.op != EditKind::kMatch;
  if (eval.classified_pairs.size() > mismatched) {
    eval.warnings.push_back(fmt::format("judge listed {} error pairs but the alignment has {} mismatches",
                                        eval.classified_pairs.size(), mismatched));
  }
  return eval;
}

JudgeResult judge_corpus(std::span<const JudgeInput> corpus, const PromptTemplate& tmpl, const JudgeConfig& config,
                         ChatClient& client, const LanguagePack& pack, const PenaltyWeights& weights) {
  config.validate();
  const ResponseCache cache(config.cache_dir);
  const std::size_t n_batches = (corpus.size() + config.batch_size - 1) / config.batch_size;
  std::vector<BatchOutcome> outcomes(n_batches);
  JudgeResult result;
  result.report.batches = n_batches;

  std::mutex report_mutex;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::exception_ptr fatal;

  auto run_batch = [&](std::size_t b) {
    const auto batch = corpus.subspan(b * config.batch_size,
                                      std::min(config.batch_size, corpus.size() - b * config.batch_size));
    std::vector<SentencePair> pairs;
    for (const auto& in : batch) pairs.push_back({in.hyp, in.ref});
    const std::string prompt = build_prompt(pairs, tmpl);
    const std::string key = ResponseCache::key_for(config.model, prompt);

    if (auto cached = cache.get(key)) {
      try {
        outcomes[b] = parse_response(chat_response_content(*cached), batch.size());
        std::lock_guard lock(report_mutex);
        ++result.report.cache_hits;
        return;
      } catch (const Error&) {
        // Unusable entry; fall through to the network.
      }
    }

    const std::string request = chat_request_body(config.model, prompt, config.temperature);
    std::string last_error;
    for (std::size_t attempt = 0; attempt <= config.max_retries && !abort; ++attempt) {
      std::string body;
      {
        std::lock_guard lock(report_mutex);
        ++result.report.requests;
      }
      try {
        body = client.send(request);
        const std::string content = chat_response_content(body);
        outcomes[b] = parse_response(content, batch.size());
        cache.put(key, request, body);
        return;
      } catch (const TransportError& e) {
        if (attempt == config.max_retries) throw;
        last_error = e.what();
      } catch (const ResponseError& e) {
        last_error = e.what();
      }
    }
    outcomes[b] = BatchFailure{last_error};
  };

  auto worker = [&] {
    for (std::size_t b; !abort && (b = next++) < n_batches;) {
      try {
        run_batch(b);
      } catch (...) {
        std::lock_guard lock(report_mutex);
        if (!fatal) fatal = std::current_exception();
        abort = true;
      }
    }
  };

  const std::size_t n_workers = std::min(config.max_in_flight, n_batches);
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < n_workers; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (fatal) std::rethrow_exception(fatal);

  for (std::size_t b = 0; b < n_batches; ++b) {
    const std::size_t begin = b * config.batch_size;
    const std::size_t size = std::min(config.batch_size, corpus.size() - begin);
    if (const auto* failure = std::get_if<BatchFailure>(&outcomes[b])) {
      for (std::size_t i = 0; i < size; ++i) result.report.failures.push_back({corpus[begin + i].id, failure->reason});
      continue;
    }
    const auto& judgments = std::get<std::vector<LlmJudgment>>(outcomes[b]);
    for (std::size_t i = 0; i < size; ++i) {
      try {
        auto eval = judgment_to_evaluation(judgments[i], corpus[begin + i], pack, config.model, weights);
        if (!validate_judgment(judgments[i], weights).consistent) ++result.report.inconsistent;
        result.evaluations.push_back(std::move(eval));
      } catch (const DataError& e) {
        result.report.failures.push_back({corpus[begin + i].id, e.what()});
      }
    }
  }
  return result;
}

}  // namespace laser
