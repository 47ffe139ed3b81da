// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <random>

#include "laser/classify_rules.hpp"
#include "laser/stats.hpp"
#include "test_support.hpp"

namespace laser {
namespace {

// Textbook single-pass sums formula in long double; deliberately a
// different computation from the library's two-pass version.
double oracle_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  long double n = x.size(), sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    syy += static_cast<long double>(y[i]) * y[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  const long double num = n * sxy - sx * sy;
  const long double den = std::sqrt(n * sxx - sx * sx) * std::sqrt(n * syy - sy * sy);
  return static_cast<double>(num / den);
}

TEST(Pearson, ExactCases) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<double> x(2 + rng() % 50), lin, neg;
    for (auto& v : x) v = u(rng);
    for (double v : x) {
      lin.push_back(2 * v + 3);
      neg.push_back(-v);
    }
    ASSERT_NEAR(pearson(x, x), 1.0, 1e-12);
    ASSERT_NEAR(pearson(x, lin), 1.0, 1e-12);
    ASSERT_NEAR(pearson(x, neg), -1.0, 1e-12);
  }
}

TEST(Pearson, FrozenValue) {
  const std::vector<double> x = {1, 2, 3, 4}, y = {1.2, 2.1, 2.9, 4.3};
  // Independent reference value (Python statistics.correlation).
  EXPECT_NEAR(pearson(x, y), 0.9915790012211083, 1e-12);
  EXPECT_NEAR(oracle_pearson(x, y), 0.9915790012211083, 1e-12);
}

TEST(Pearson, SymmetricBoundedAndAffineInvariant) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<double> x(3 + rng() % 20), y(x.size()), ys(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = g(rng);
      y[i] = g(rng);
      ys[i] = 0.25 * y[i] - 7.0;
    }
    const double r = pearson(x, y);
    ASSERT_LE(std::abs(r), 1.0);
    ASSERT_NEAR(r, pearson(y, x), 1e-12);
    ASSERT_NEAR(r, pearson(x, ys), 1e-9);
    ASSERT_NEAR(r, oracle_pearson(x, y), 1e-9);
  }
}

TEST(Pearson, UndefinedCases) {
  const std::vector<double> c = {1, 1, 1}, x = {1, 2, 3}, one = {1};
  EXPECT_THROW(pearson(c, x), UndefinedCorrelation);
  EXPECT_THROW(pearson(one, one), UndefinedCorrelation);
  const std::vector<double> shorter = {1, 2};
  EXPECT_THROW(pearson(x, shorter), DataError);
}

TEST(Pearson, SkipsMissingPairwise) {
  const Column x = {1.0, 2.0, std::nullopt, 4.0, 5.0};
  const Column y = {2.0, 4.1, 9.0, std::nullopt, 9.8};
  EXPECT_NEAR(pearson(x, y), oracle_pearson({1, 2, 5}, {2.0, 4.1, 9.8}), 1e-12);
}

TEST(CorrelationMatrix, MatchesOracle) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::string> ids;
  for (int i = 0; i < 10; ++i) ids.push_back("r" + std::to_string(i));
  ScoreTable t(ids);
  std::vector<std::vector<double>> cols(3, std::vector<double>(10));
  const std::vector<std::string> names = {"human", "laser", "wer"};
  for (std::size_t c = 0; c < 3; ++c) {
    Column col;
    for (auto& v : cols[c]) {
      v = u(rng);
      col.push_back(v);
    }
    t.set_column(names[c], col);
  }
  const auto m = correlation_matrix(t, names);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      ASSERT_TRUE(m.r[i][j]);
      EXPECT_NEAR(*m.r[i][j], i == j ? 1.0 : oracle_pearson(cols[i], cols[j]), 1e-9);
      EXPECT_DOUBLE_EQ(*m.r[i][j], *m.r[j][i]);
    }
  }
  const auto csv = m.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "metric,human,laser,wer");
  const auto pct = m.to_csv(true);
  EXPECT_NE(pct.find("human,100.0000"), std::string::npos);
  EXPECT_EQ(nlohmann::json::parse(m.to_json())["columns"].size(), 3u);
  EXPECT_THROW(correlation_matrix(t, {"human", "nope"}), DataError);
}

TEST(CorrelationMatrix, ConstantColumnLeavesCellsEmpty) {
  ScoreTable t({"a", "b", "c"});
  t.set_column("x", {1.0, 2.0, 3.0});
  t.set_column("k", {0.5, 0.5, 0.5});
  const auto m = correlation_matrix(t, {"x", "k"});
  EXPECT_FALSE(m.r[0][1]);
  EXPECT_FALSE(m.warnings.empty());
}

TEST(Accuracy, ReproducesPublishedTable) {
  std::vector<int> pred, gold;
  const int tests[4] = {34, 35, 9, 28}, correct[4] = {32, 31, 6, 25};
  for (int c = 0; c < 4; ++c) {
    for (int i = 0; i < tests[c]; ++i) {
      gold.push_back(c);
      pred.push_back(i < correct[c] ? c : (c + 1) % 4);
    }
  }
  const auto t = classifier_accuracy(pred, gold, {310, 312, 77, 251});
  EXPECT_EQ(format_percent(t.classes[0].correct_count, t.classes[0].test_count), "94.12");
  EXPECT_EQ(format_percent(t.classes[1].correct_count, t.classes[1].test_count), "88.57");
  EXPECT_EQ(format_percent(t.classes[2].correct_count, t.classes[2].test_count), "66.67");
  EXPECT_EQ(format_percent(t.classes[3].correct_count, t.classes[3].test_count), "89.29");
  EXPECT_EQ(t.overall.correct_count, 94u);
  EXPECT_EQ(t.overall.test_count, 106u);
  EXPECT_EQ(t.overall.train_val_count, 950u);
  EXPECT_EQ(format_percent(94, 106), "88.68");
  EXPECT_NEAR(*t.overall.accuracy() * 100.0, 88.69, 0.02);
  const auto text = t.to_text();
  for (const char* s : {"94.12%", "88.57%", "66.67%", "89.29%", "88.68%"}) EXPECT_NE(text.find(s), std::string::npos);
}

TEST(Accuracy, IdentityAndEmptyClass) {
  const std::vector<int> labels = {0, 1, 3, 3, 0};
  const auto t = classifier_accuracy(labels, labels);
  EXPECT_DOUBLE_EQ(*t.overall.accuracy(), 1.0);
  EXPECT_FALSE(t.classes[2].accuracy());
  EXPECT_NE(t.to_text().find("n/a"), std::string::npos);
  const std::vector<int> bad = {0, 5};
  EXPECT_THROW(classifier_accuracy(bad, bad), DataError);
  const std::vector<int> shorter = {0};
  EXPECT_THROW(classifier_accuracy(labels, shorter), DataError);
}

TEST(FormatPercent, RoundsHalfUp) {
  EXPECT_EQ(format_percent(1, 8), "12.50");
  EXPECT_EQ(format_percent(1, 3), "33.33");
  EXPECT_EQ(format_percent(2, 3), "66.67");
  EXPECT_EQ(format_percent(1, 1), "100.00");
}

SentenceEvaluation eval(const std::string& id, double laser, double wer) {
  SentenceEvaluation e;
  e.id = id;
  e.laser = e.laser_raw = laser;
  e.word_errors.rate = wer;
  e.ref_word_count = 10;
  return e;
}

TEST(Qualitative, BucketsPartitionHighWerRows) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<SentenceEvaluation> evals;
  for (int i = 0; i < 200; ++i) evals.push_back(eval("s" + std::to_string(i), u(rng), u(rng)));
  const auto r = qualitative_report(evals);
  std::size_t high_wer = 0;
  for (const auto& e : evals) high_wer += e.word_errors.rate > 0.35;
  EXPECT_EQ(r.high_laser.size() + r.low_laser.size(), high_wer);
  std::set<std::string> seen;
  for (const auto& row : r.high_laser) {
    EXPECT_GE(row.laser, r.laser_split);
    EXPECT_TRUE(seen.insert(row.id).second);
  }
  for (const auto& row : r.low_laser) {
    EXPECT_LT(row.laser, r.laser_split);
    EXPECT_TRUE(seen.insert(row.id).second);
  }
}

TEST(Qualitative, EnglishExampleIsHighLaser) {
  const RuleClassifier rules;
  const auto d = evaluate_sentence("appD", testing::kEnglishRef, testing::kEnglishHyp, rules, testing::pack("en"));
  std::vector<SentenceEvaluation> evals = {d, eval("low", 0.1, 0.9), eval("clean", 1.0, 0.1)};
  for (double split : {0.0, 0.5, 0.79}) {
    const auto r = qualitative_report(evals, 0.35, split);
    ASSERT_FALSE(r.high_laser.empty());
    EXPECT_EQ(r.high_laser.front().id, "appD");
  }
  const auto md = qualitative_report(evals, 0.35, 0.5).to_markdown();
  EXPECT_NE(md.find("appD"), std::string::npos);
}

TEST(Median, EvenAndOdd) {
  EXPECT_DOUBLE_EQ(median({3, 1, 2}), 2.0);
  EXPECT_DOUBLE_EQ(median({4, 1, 2, 3}), 2.5);
}

TEST(ScoreTable, FromEvaluations) {
  std::vector<SentenceEvaluation> evals = {eval("a", 0.5, 0.25), eval("b", 1.0, 0.0)};
  const auto t = table_from_evaluations(evals, "laser");
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_DOUBLE_EQ(*t.column("one_minus_wer")[0], 0.75);
  EXPECT_DOUBLE_EQ(*t.column("laser")[1], 1.0);
  EXPECT_THROW(t.column("missing"), DataError);
  EXPECT_EQ(t.row_of("b"), 1u);
}

}  // namespace
}  // namespace laser
