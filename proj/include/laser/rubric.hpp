// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "laser/align.hpp"
#include "laser/language_pack.hpp"
#include "laser/textnorm.hpp"

namespace laser {

enum class PenaltyLevel : int {
  kIdentical = 0,
  kNonPenalizable = 1,
  kMinor = 2,
  kMajor = 3,
};

inline constexpr std::array<PenaltyLevel, 4> kAllLevels = {PenaltyLevel::kIdentical, PenaltyLevel::kNonPenalizable,
                                                           PenaltyLevel::kMinor, PenaltyLevel::kMajor};

std::string_view to_string(PenaltyLevel level);
std::optional<PenaltyLevel> level_from_int(int value);
std::optional<PenaltyLevel> level_from_string(std::string_view name);

// Error categories of the rubric. kExactMatch only accompanies Identical;
// kOther is accepted at any penalized or forgiven level.
enum class Category {
  kExactMatch,
  kNumerical,
  kAbbreviation,
  kCompound,
  kTransliterationNative,
  kTransliterationActual,
  kAlternateSpelling,
  kProperNoun,
  kColloquial,
  kSmallSpelling,
  kSmallGrammar,
  kMeaningAlteringSpelling,
  kSubstitution,
  kOmissionAddition,
  kReordering,
  kOther,
};

std::string_view to_string(Category category);
std::optional<Category> category_from_string(std::string_view name);
// Level a category belongs to; empty for kOther.
std::optional<PenaltyLevel> level_of(Category category);
bool consistent(PenaltyLevel level, Category category);
// Categories selectable for a level, in menu order.
std::vector<Category> categories_for(PenaltyLevel level);

struct PenaltyClass {
  PenaltyLevel level = PenaltyLevel::kIdentical;
  Category category = Category::kExactMatch;
  std::string rationale;
};

struct PenaltyWeights {
  double minor = 0.5;
  double major = 1.0;

  // Throws ConfigError unless 0 <= minor <= major.
  void validate() const;
  double weight(PenaltyLevel level) const;
};

struct SentenceScore {
  double total_penalty = 0.0;
  double laser_raw = 1.0;
  double laser = 1.0;
};

// 1 - weighted penalty / reference word count, clamped below at 0 in
// `laser`. Throws DegenerateReference when `reference_words` is 0.
SentenceScore score_sentence(std::size_t reference_words, std::span<const PenaltyLevel> levels,
                             const PenaltyWeights& weights = {});
SentenceScore score_sentence(std::size_t reference_words, std::span<const PenaltyClass> classes,
                             const PenaltyWeights& weights = {});
// Same formula from per-level counts (used by human annotation paths).
SentenceScore score_counts(std::size_t reference_words, std::size_t majors, std::size_t minors,
                           const PenaltyWeights& weights = {});

struct ClassifiedPair {
  std::vector<std::string> ref;
  std::vector<std::string> hyp;
  EditKind op = EditKind::kMatch;
  PenaltyClass cls;
};

struct SentenceEvaluation {
  std::string id;
  std::string ref_text;
  std::string hyp_text;
  std::size_t ref_word_count = 0;
  std::vector<ClassifiedPair> classified_pairs;
  double total_penalty = 0.0;
  double laser_raw = 1.0;
  double laser = 1.0;
  ErrorRate word_errors;
  std::string classifier_id;
  std::vector<std::string> warnings;
};

// View of one aligned pair handed to a classifier.
struct PairView {
  std::span<const Token> ref;
  std::span<const Token> hyp;
  EditKind op = EditKind::kMatch;
};

PairView view_of(const AlignedPair& pair, const TokenizedSentence& ref, const TokenizedSentence& hyp);

// Common interface of pair-level classifiers (rules, lookup tables of an
// external model's predictions, ...). Implementations must be safe to call
// concurrently.
class PairClassifier {
 public:
  virtual ~PairClassifier() = default;
  virtual std::string id() const = 0;
  virtual PenaltyClass classify(const PairView& pair, const LanguagePack& pack) const = 0;
};

struct EvaluateOptions {
  PenaltyWeights weights;
  MergeOptions merge;
  bool merge_compounds = true;
};

// tokenize -> align -> merge -> classify every pair -> score.
SentenceEvaluation evaluate_sentence(const std::string& id, std::string_view ref_text, std::string_view hyp_text,
                                     const PairClassifier& classifier, const LanguagePack& pack,
                                     const EvaluateOptions& options = {});

// Classifies a precomputed alignment and scores it.
SentenceEvaluation evaluate_alignment(const std::string& id, const TokenizedSentence& ref,
                                      const TokenizedSentence& hyp, const Alignment& alignment,
                                      const PairClassifier& classifier, const LanguagePack& pack,
                                      const PenaltyWeights& weights = {});

struct CorpusSummary {
  double mean_laser = 0.0;
  double mean_wer = 0.0;
  std::size_t count = 0;
  std::map<PenaltyLevel, std::size_t> level_counts;
  std::map<Category, std::size_t> category_counts;
  std::size_t classified_pairs = 0;
};

// Throws DataError on an empty list.
CorpusSummary aggregate_corpus(std::span<const SentenceEvaluation> evals);

}  // namespace laser
