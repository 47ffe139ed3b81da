// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#include "laser/rubric.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "laser/error.hpp"

namespace laser {
namespace {

struct CategoryInfo {
  Category category;
  std::string_view name;
  std::optional<PenaltyLevel> level;
};

constexpr std::array<CategoryInfo, 16> kCategories = {{
    {Category::kExactMatch, "exact-match", PenaltyLevel::kIdentical},
    {Category::kNumerical, "numerical", PenaltyLevel::kNonPenalizable},
    {Category::kAbbreviation, "abbreviation", PenaltyLevel::kNonPenalizable},
    {Category::kCompound, "compound", PenaltyLevel::kNonPenalizable},
    {Category::kTransliterationNative, "transliteration-native", PenaltyLevel::kNonPenalizable},
    {Category::kTransliterationActual, "transliteration-actual", PenaltyLevel::kNonPenalizable},
    {Category::kAlternateSpelling, "alternate-spelling", PenaltyLevel::kNonPenalizable},
    {Category::kProperNoun, "proper-noun", PenaltyLevel::kNonPenalizable},
    {Category::kColloquial, "colloquial", PenaltyLevel::kNonPenalizable},
    {Category::kSmallSpelling, "small-spelling", PenaltyLevel::kMinor},
    {Category::kSmallGrammar, "small-grammar", PenaltyLevel::kMinor},
    {Category::kMeaningAlteringSpelling, "meaning-altering-spelling", PenaltyLevel::kMajor},
    {Category::kSubstitution, "substitution", PenaltyLevel::kMajor},
    {Category::kOmissionAddition, "omission-addition", PenaltyLevel::kMajor},
    {Category::kReordering, "reordering", PenaltyLevel::kMajor},
    {Category::kOther, "other", std::nullopt},
}};

std::vector<std::string> words_of(std::span<const Token> tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.normalized);
  return out;
}

}  // namespace

std::string_view to_string(PenaltyLevel level) {
  switch (level) {
    case PenaltyLevel::kIdentical: return "identical";
    case PenaltyLevel::kNonPenalizable: return "non-penalizable";
    case PenaltyLevel::kMinor: return "minor";
    case PenaltyLevel::kMajor: return "major";
  }
  return "identical";
}

std::optional<PenaltyLevel> level_from_int(int value) {
  if (value < 0 || value > 3) return std::nullopt;
  return static_cast<PenaltyLevel>(value);
}

std::optional<PenaltyLevel> level_from_string(std::string_view name) {
  for (auto l : kAllLevels) {
    if (to_string(l) == name) return l;
  }
  if (name.size() == 1 && name[0] >= '0' && name[0] <= '3') return level_from_int(name[0] - '0');
  return std::nullopt;
}

std::string_view to_string(Category category) {
  for (const auto& info : kCategories) {
    if (info.category == category) return info.name;
  }
  return "other";
}

std::optional<Category> category_from_string(std::string_view name) {
  for (const auto& info : kCategories) {
    if (info.name == name) return info.category;
  }
  return std::nullopt;
}

std::optional<PenaltyLevel> level_of(Category category) {
  for (const auto& info : kCategories) {
    if (info.category == category) return info.level;
  }
  return std::nullopt;
}

bool consistent(PenaltyLevel level, Category category) {
  if (category == Category::kOther) return level != PenaltyLevel::kIdentical;
  return level_of(category) == level;
}

std::vector<Category> categories_for(PenaltyLevel level) {
  std::vector<Category> out;
  for (const auto& info : kCategories) {
    if (consistent(level, info.category)) out.push_back(info.category);
  }
  return out;
}

void PenaltyWeights::validate() const {
  if (!(minor >= 0.0 && minor <= major)) {
    throw ConfigError(fmt::format("penalty weights must satisfy 0 <= minor <= major (got minor={}, major={})",
                                  minor, major));
  }
}

double PenaltyWeights::weight(PenaltyLevel level) const {
  switch (level) {
    case PenaltyLevel::kMinor: return minor;
    case PenaltyLevel::kMajor: return major;
    default: return 0.0;
  }
}

SentenceScore score_sentence(std::size_t reference_words, std::span<const PenaltyLevel> levels,
                             const PenaltyWeights& weights) {
  if (reference_words == 0) throw DegenerateReference("cannot score a sentence with an empty reference");
  SentenceScore s;
  for (auto l : levels) s.total_penalty += weights.weight(l);
  s.laser_raw = 1.0 - s.total_penalty / static_cast<double>(reference_words);
  s.laser = std::max(0.0, s.laser_raw);
  return s;
}

SentenceScore score_sentence(std::size_t reference_words, std::span<const PenaltyClass> classes,
                             const PenaltyWeights& weights) {
  std::vector<PenaltyLevel> levels;
  levels.reserve(classes.size());
  for (const auto& c : classes) levels.push_back(c.level);
  return score_sentence(reference_words, std::span<const PenaltyLevel>(levels), weights);
}

SentenceScore score_counts(std::size_t reference_words, std::size_t majors, std::size_t minors,
                           const PenaltyWeights& weights) {
  std::vector<PenaltyLevel> levels(majors, PenaltyLevel::kMajor);
  levels.insert(levels.end(), minors, PenaltyLevel::kMinor);
  return score_sentence(reference_words, std::span<const PenaltyLevel>(levels), weights);
}

PairView view_of(const AlignedPair& pair, const TokenizedSentence& ref, const TokenizedSentence& hyp) {
  PairView v;
  v.ref = std::span<const Token>(ref.tokens).subspan(pair.ref.begin, pair.ref.size());
  v.hyp = std::span<const Token>(hyp.tokens).subspan(pair.hyp.begin, pair.hyp.size());
  v.op = pair.op;
  return v;
}

SentenceEvaluation evaluate_alignment(const std::string& id, const TokenizedSentence& ref,
                                      const TokenizedSentence& hyp, const Alignment& alignment,
                                      const PairClassifier& classifier, const LanguagePack& pack,
                                      const PenaltyWeights& weights) {
  SentenceEvaluation eval;
  eval.id = id;
  eval.ref_text = ref.raw;
  eval.hyp_text = hyp.raw;
  eval.ref_word_count = ref.size();
  eval.classifier_id = classifier.id();
  eval.word_errors = wer_from_alignment(alignment);
  std::vector<PenaltyClass> classes;
  for (const auto& pair : alignment.pairs) {
    const PairView view = view_of(pair, ref, hyp);
    PenaltyClass cls;
    try {
      cls = classifier.classify(view, pack);
    } catch (const std::exception& e) {
      throw DataError(fmt::format("sentence '{}': classifier '{}' failed: {}", id, classifier.id(), e.what()));
    }
    classes.push_back(cls);
    eval.classified_pairs.push_back({words_of(view.ref), words_of(view.hyp), pair.op, std::move(cls)});
  }
  SentenceScore score;
  try {
    score = score_sentence(ref.size(), std::span<const PenaltyClass>(classes), weights);
  } catch (const DegenerateReference& e) {
    throw DegenerateReference(fmt::format("sentence '{}': {}", id, e.what()));
  }
  eval.total_penalty = score.total_penalty;
  eval.laser_raw = score.laser_raw;
  eval.laser = score.laser;
  return eval;
}

SentenceEvaluation evaluate_sentence(const std::string& id, std::string_view ref_text, std::string_view hyp_text,
                                     const PairClassifier& classifier, const LanguagePack& pack,
                                     const EvaluateOptions& options) {
  const TokenizedSentence ref = tokenize(ref_text, pack, id);
  const TokenizedSentence hyp = tokenize(hyp_text, pack, id);
  Alignment alignment = levenshtein_align(ref, hyp, pack_aware_cost(pack));
  if (options.merge_compounds) alignment = merge_pass(alignment, ref, hyp, pack, options.merge);
  return evaluate_alignment(id, ref, hyp, alignment, classifier, pack, options.weights);
}

CorpusSummary aggregate_corpus(std::span<const SentenceEvaluation> evals) {
  if (evals.empty()) throw DataError("cannot aggregate an empty corpus");
  CorpusSummary s;
  double laser_sum = 0.0, wer_sum = 0.0;
  for (const auto& e : evals) {
    laser_sum += e.laser;
    wer_sum += e.word_errors.rate;
    for (const auto& p : e.classified_pairs) {
      ++s.level_counts[p.cls.level];
      ++s.category_counts[p.cls.category];
      ++s.classified_pairs;
    }
  }
  s.count = evals.size();
  s.mean_laser = laser_sum / static_cast<double>(s.count);
  s.mean_wer = wer_sum / static_cast<double>(s.count);
  return s;
}

}  // namespace laser
