// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "laser/classify_rules.hpp"
#include "laser/error.hpp"
#include "laser/rubric.hpp"
#include "test_support.hpp"

namespace laser {
namespace {

using testing::pack;

// Penalizes every mismatch as major, the reading under which the score
// collapses to 1 - WER.
class AllMajor final : public PairClassifier {
 public:
  std::string id() const override { return "all-major"; }
  PenaltyClass classify(const PairView& p, const LanguagePack&) const override {
    if (p.op == EditKind::kMatch) return {PenaltyLevel::kIdentical, Category::kExactMatch, ""};
    return {PenaltyLevel::kMajor, Category::kSubstitution, ""};
  }
};

TEST(Score, WorkedExampleCounts) {
  const auto s = score_counts(12, 2, 1);
  EXPECT_DOUBLE_EQ(s.total_penalty, 2.5);
  EXPECT_NEAR(s.laser, 0.7917, 5e-5);
  EXPECT_NEAR(s.laser, 1.0 - 2.5 / 12.0, 1e-15);
}

TEST(Score, ClampsAtZeroButKeepsRaw) {
  const auto s = score_counts(2, 3, 0);
  EXPECT_DOUBLE_EQ(s.laser_raw, -0.5);
  EXPECT_DOUBLE_EQ(s.laser, 0.0);
}

TEST(Score, EmptyReferenceThrows) {
  EXPECT_THROW(score_counts(0, 0, 0), DegenerateReference);
}

TEST(Score, WeightsAreValidated) {
  EXPECT_THROW((PenaltyWeights{1.5, 1.0}.validate()), ConfigError);
  EXPECT_THROW((PenaltyWeights{-0.1, 1.0}.validate()), ConfigError);
  EXPECT_NO_THROW((PenaltyWeights{0.5, 1.0}.validate()));
  EXPECT_NO_THROW((PenaltyWeights{1.0, 1.0}.validate()));
}

TEST(ScoreProperty, BoundedMonotoneAndBlindToForgivenErrors) {
  std::mt19937_64 rng(3);
  for (int iter = 0; iter < 2000; ++iter) {
    const std::size_t n = 1 + rng() % 30;
    std::vector<PenaltyLevel> levels(rng() % 20);
    for (auto& l : levels) l = static_cast<PenaltyLevel>(rng() % 4);
    const PenaltyWeights w{0.5, 1.0};
    const auto base = score_sentence(n, std::span<const PenaltyLevel>(levels), w);
    ASSERT_LE(base.laser, 1.0);
    ASSERT_GE(base.laser, 0.0);
    ASSERT_LE(base.laser, base.laser_raw < 0 ? 0.0 : base.laser_raw);

    auto more = levels;
    more.push_back(PenaltyLevel::kMajor);
    ASSERT_LE(score_sentence(n, std::span<const PenaltyLevel>(more), w).laser_raw, base.laser_raw);

    auto forgiven = levels;
    forgiven.push_back(PenaltyLevel::kNonPenalizable);
    forgiven.push_back(PenaltyLevel::kIdentical);
    ASSERT_DOUBLE_EQ(score_sentence(n, std::span<const PenaltyLevel>(forgiven), w).laser_raw, base.laser_raw);

    // Upgrading any minor to major never helps.
    for (auto& l : levels) {
      if (l != PenaltyLevel::kMinor) continue;
      auto upgraded = levels;
      upgraded[&l - levels.data()] = PenaltyLevel::kMajor;
      ASSERT_LE(score_sentence(n, std::span<const PenaltyLevel>(upgraded), w).laser_raw, base.laser_raw);
      break;
    }
  }
}

TEST(ScoreProperty, ReducesToOneMinusWer) {
  std::mt19937_64 rng(5);
  const std::vector<std::string> vocab = {"ek", "do", "teen", "char", "paanch"};
  const AllMajor all_major;
  EvaluateOptions opts;
  opts.weights = {1.0, 1.0};
  opts.merge_compounds = false;
  for (int iter = 0; iter < 500; ++iter) {
    std::string ref, hyp;
    const std::size_t n = 1 + rng() % 8, m = rng() % 8;
    for (std::size_t i = 0; i < n; ++i) ref += vocab[rng() % vocab.size()] + " ";
    for (std::size_t i = 0; i < m; ++i) hyp += vocab[rng() % vocab.size()] + " ";
    const auto e = evaluate_sentence("r", ref, hyp, all_major, pack("hi"), opts);
    ASSERT_NEAR(e.laser_raw, 1.0 - e.word_errors.rate, 1e-12) << ref << " | " << hyp;
  }
}

TEST(Categories, LevelsAndNamesAgree) {
  for (auto level : kAllLevels) {
    EXPECT_EQ(level_from_string(to_string(level)), level);
    EXPECT_EQ(level_from_int(static_cast<int>(level)), level);
    for (auto c : categories_for(level)) {
      EXPECT_TRUE(consistent(level, c));
      EXPECT_EQ(category_from_string(to_string(c)), c);
    }
  }
  EXPECT_FALSE(level_from_int(4));
  EXPECT_FALSE(consistent(PenaltyLevel::kMinor, Category::kCompound));
  EXPECT_TRUE(consistent(PenaltyLevel::kMajor, Category::kOther));
  EXPECT_FALSE(consistent(PenaltyLevel::kIdentical, Category::kOther));
}

TEST(Evaluate, HindiExampleWithRules) {
  const RuleClassifier rules;
  const auto e = evaluate_sentence("a", testing::kHindiRef, testing::kHindiHyp, rules, pack("hi"));
  EXPECT_EQ(e.ref_word_count, 12u);
  EXPECT_DOUBLE_EQ(e.total_penalty, 2.5);
  EXPECT_NEAR(e.laser, 0.7917, 5e-5);
  EXPECT_EQ(e.ref_text, testing::kHindiRef);
}

TEST(Evaluate, EnglishExampleWithRules) {
  const RuleClassifier rules;
  const auto e = evaluate_sentence("d", testing::kEnglishRef, testing::kEnglishHyp, rules, pack("en"));
  EXPECT_DOUBLE_EQ(e.total_penalty, 2.5);
  EXPECT_NEAR(e.laser, 0.7917, 5e-5);
  EXPECT_NEAR(e.word_errors.rate, 0.6667, 5e-5);
}

TEST(Evaluate, AggregateMeans) {
  const RuleClassifier rules;
  std::vector<SentenceEvaluation> evals = {
      evaluate_sentence("a", "ek do", "ek do", rules, pack("hi")),
      evaluate_sentence("b", "ek do", "ek", rules, pack("hi")),
  };
  const auto s = aggregate_corpus(evals);
  EXPECT_EQ(s.count, 2u);
  EXPECT_DOUBLE_EQ(s.mean_laser, 0.75);
  EXPECT_DOUBLE_EQ(s.mean_wer, 0.25);
  EXPECT_THROW(aggregate_corpus({}), DataError);
}

}  // namespace
}  // namespace laser
