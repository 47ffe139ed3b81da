// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "laser/error.hpp"
#include "laser/rubric.hpp"

namespace laser {

struct JudgedPair {
  std::string predicted;
  std::string original;
  std::string reason;
};

struct LlmJudgment {
  int pair_id = 0;
  std::size_t token_count = 0;
  std::vector<JudgedPair> non_penalizable;
  std::vector<JudgedPair> major;
  std::vector<JudgedPair> minor;
  double total_penalty = 0.0;
  double score = 0.0;
};

// Parse failures keep the offending text for the audit trail.
class ResponseError : public DataError {
 public:
  ResponseError(const std::string& what, std::string raw) : DataError(what), raw_(std::move(raw)) {}
  const std::string& raw() const { return raw_; }

 private:
  std::string raw_;
};

class MalformedResponse : public ResponseError {
 public:
  using ResponseError::ResponseError;
};

class CountMismatch : public ResponseError {
 public:
  using ResponseError::ResponseError;
};

class SchemaError : public ResponseError {
 public:
  using ResponseError::ResponseError;
};

// Extracts the first complete JSON value from `text`, skipping code fences
// and surrounding prose. Empty when there is none.
std::string extract_json(std::string_view text);

// Judgments ordered by pair number 1..expected_count.
std::vector<LlmJudgment> parse_response(std::string_view text, std::size_t expected_count);

inline constexpr double kScoreTolerance = 5e-4;

struct JudgmentCheck {
  double recomputed_penalty = 0.0;
  double recomputed_score = 1.0;
  bool consistent = true;
};

// Recomputes penalty and score from the list sizes. Throws
// DegenerateReference when token_count is 0.
JudgmentCheck validate_judgment(const LlmJudgment& judgment, const PenaltyWeights& weights = {});

// Category guessed from the judge's free-text reason, constrained to `level`.
Category category_from_reason(PenaltyLevel level, std::string_view reason);

}  // namespace laser
