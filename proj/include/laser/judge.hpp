// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "laser/chat_client.hpp"
#include "laser/judgment.hpp"
#include "laser/language_pack.hpp"
#include "laser/prompt.hpp"
#include "laser/rubric.hpp"

namespace laser {

struct JudgeConfig {
  std::string endpoint;
  std::string model;
  std::size_t batch_size = 10;
  std::size_t max_retries = 2;
  double timeout_seconds = 120.0;
  double temperature = 0.0;
  std::filesystem::path cache_dir;  // empty disables caching
  std::size_t max_in_flight = 4;
  std::string api_key_env = "LASER_API_KEY";

  void validate() const;
};

// Content-addressed store of successful exchanges. Each entry is
// <sha256>.json holding {request, response, timestamp}.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);
  static std::string key_for(const std::string& model, const std::string& prompt);
  std::optional<std::string> get(const std::string& key) const;
  // Write to a temporary file, then rename into place.
  void put(const std::string& key, const std::string& request, const std::string& response) const;
  bool enabled() const { return !dir_.empty(); }

 private:
  std::filesystem::path dir_;
};

struct JudgeInput {
  std::string id;
  std::string ref;
  std::string hyp;
};

struct PairFailure {
  std::string id;
  std::string reason;
};

struct JudgeReport {
  std::size_t batches = 0;
  std::size_t requests = 0;  // network calls, retries included
  std::size_t cache_hits = 0;
  std::size_t inconsistent = 0;
  std::vector<PairFailure> failures;
};

struct JudgeResult {
  std::vector<SentenceEvaluation> evaluations;  // input order, failures omitted
  JudgeReport report;
};

// Judgment of one sentence turned into an evaluation. The judge's token
// count is N; a disagreement with the toolkit's count becomes a warning.
SentenceEvaluation judgment_to_evaluation(const LlmJudgment& judgment, const JudgeInput& input,
                                          const LanguagePack& pack, const std::string& model,
                                          const PenaltyWeights& weights = {});

// Batches the corpus, consults the cache, calls the client for misses and
// converts judgments. A batch that still fails to parse after the retries is
// reported per pair; transport failures after the retries throw
// TransportError.
JudgeResult judge_corpus(std::span<const JudgeInput> corpus, const PromptTemplate& tmpl, const JudgeConfig& config,
                         ChatClient& client, const LanguagePack& pack, const PenaltyWeights& weights = {});

}  // namespace laser
