// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

// One PASS/FAIL line per acceptance criterion; exits non-zero if any fail.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <nlohmann/json.hpp>
#include <random>
#include <set>

#include "laser/classify_rules.hpp"
#include "laser/ingest.hpp"
#include "laser/judge.hpp"
#include "laser/judgment.hpp"
#include "laser/serialize.hpp"
#include "laser/stats.hpp"
#include "taxonomy.hpp"
#include "test_support.hpp"

namespace {

using namespace laser;
using Clock = std::chrono::steady_clock;
using nlohmann::json;

constexpr double kScoreTol = 5e-4;
constexpr double kExactTol = 1e-12;
constexpr double kOracleTol = 1e-9;
constexpr double kPercentTol = 0.02;
constexpr double kWorkedLaser = 1.0 - 2.5 / 12.0;
constexpr int kOraclePairs = 1000;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

const char* kHindiGold = R"({"1": {"token_count": 12,
  "non_penalizable": [["vaha", "vo", "colloquial"], ["bhajan sangraha", "bhajansangraha", "compound"],
    ["paaswala", "paas walaa", "compound"], ["aytiem", "A.T.M.", "abbreviation"], ["10", "das", "number"],
    ["taims", "times", "transliteration"], ["सुंदर", "सुन्दर", "alternate spelling"], ["skul", "skool", "transliteration"]],
  "major": [["komal", "ke", "wrong substitution"], ["par", "", "addition"]],
  "minor": [["hain", "hai", "singular vs plural"]],
  "total_penalty": 2.5, "score": 0.7917}})";

Outcome hindi_worked_example() {
  const auto t0 = Clock::now();
  const auto& hi = testing::pack("hi");
  const auto gold = parse_response(kHindiGold, 1).at(0);
  const auto from_gold = judgment_to_evaluation(gold, {"appA", testing::kHindiRef, testing::kHindiHyp}, hi, "gold");
  const RuleClassifier rules;
  const auto from_rules = evaluate_sentence("appA", testing::kHindiRef, testing::kHindiHyp, rules, hi);
  const double elapsed = seconds_since(t0);
  const bool ok = std::abs(from_gold.total_penalty - 2.5) < kScoreTol &&
                  std::abs(from_gold.laser - kWorkedLaser) < kScoreTol &&
                  std::abs(from_rules.total_penalty - 2.5) < kScoreTol &&
                  std::abs(from_rules.laser - kWorkedLaser) < kScoreTol && elapsed < 1.0;
  return {ok, fmt::format("gold penalty {} laser {:.4f}; rules penalty {} laser {:.4f}; {:.3f}s",
                          from_gold.total_penalty, from_gold.laser, from_rules.total_penalty, from_rules.laser,
                          elapsed)};
}

Outcome english_worked_example() {
  const auto& en = testing::pack("en");
  const auto rate = wer(tokenize(testing::kEnglishRef, en), tokenize(testing::kEnglishHyp, en));
  LlmJudgment j;
  j.pair_id = 1;
  j.token_count = 12;
  j.non_penalizable.resize(5);
  j.minor.resize(1);
  j.major.resize(2);
  j.total_penalty = 2.5;
  j.score = 0.7917;
  const auto check = validate_judgment(j);
  const bool ok = std::abs(rate.rate - 0.6667) < kScoreTol && std::abs(check.recomputed_score - kWorkedLaser) < kScoreTol &&
                  check.consistent;
  return {ok, fmt::format("WER {:.4f} ({} edits / {}); LASER {:.4f}", rate.rate, rate.errors(),
                          rate.reference_length, check.recomputed_score)};
}

Outcome alignment_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2026);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e"};
  int mismatches = 0;
  for (int i = 0; i < kOraclePairs; ++i) {
    std::vector<std::string> a(rng() % 9), b(rng() % 9);
    for (auto& w : a) w = vocab[rng() % vocab.size()];
    for (auto& w : b) w = vocab[rng() % vocab.size()];
    std::string ra, rb;
    for (const auto& w : a) ra += w + " ";
    for (const auto& w : b) rb += w + " ";
    if (levenshtein_align(tokenize_plain(ra), tokenize_plain(rb)).distance != brute_force_distance(a, b)) ++mismatches;
  }
  const double elapsed = seconds_since(t0);
  return {mismatches == 0 && elapsed < 30.0,
          fmt::format("{} pairs, {} mismatches, {:.2f}s", kOraclePairs, mismatches, elapsed)};
}

Outcome taxonomy_fixture() {
  const auto rows = testing::load_taxonomy(testing::fixture("taxonomy_hi.tsv").string());
  const auto p = testing::pack("hi").with_proper_nouns({"priya"});
  std::size_t ok = 0;
  std::string failed;
  for (const auto& row : rows) {
    if (testing::check_taxonomy_row(row, p).ok) {
      ++ok;
    } else {
      failed += fmt::format(" [{} vs {}]", row.ref, row.hyp);
    }
  }
  return {ok == rows.size() && !rows.empty(), fmt::format("{}/{} rows{}", ok, rows.size(), failed)};
}

Outcome accuracy_table() {
  testing::TempDir dir;
  std::string pred, gold;
  const int tests[4] = {34, 35, 9, 28}, correct[4] = {32, 31, 6, 25};
  for (int c = 0; c < 4; ++c) {
    for (int i = 0; i < tests[c]; ++i) {
      gold += fmt::format("{}\n", c);
      pred += fmt::format("{}\n", i < correct[c] ? c : (c + 1) % 4);
    }
  }
  testing::write_text(dir / "pred.txt", pred);
  testing::write_text(dir / "gold.txt", gold);
  const std::string cmd = fmt::format("'{}' eval-classifier '{}' '{}' 2>&1", LASER_CLI_PATH, (dir / "pred.txt").string(),
                                      (dir / "gold.txt").string());
  std::string out;
  if (FILE* f = popen(cmd.c_str(), "r")) {
    char buf[512];
    while (std::fgets(buf, sizeof buf, f)) out += buf;
    pclose(f);
  }
  bool ok = true;
  for (const char* s : {"94.12%", "88.57%", "66.67%", "89.29%"}) ok = ok && out.find(s) != std::string::npos;
  const auto at = out.find("88.68%");
  const double overall = at == std::string::npos ? 0.0 : std::stod(out.substr(at, 5));
  ok = ok && std::abs(overall - 88.69) <= kPercentTol + 1e-9;
  return {ok, fmt::format("per-class 94.12/88.57/66.67/89.29 printed={}; overall {:.2f}% (published 88.69%)", ok,
                          overall)};
}

double textbook_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  long double n = x.size(), sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    syy += static_cast<long double>(y[i]) * y[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  return static_cast<double>((n * sxy - sx * sy) / (std::sqrt(n * sxx - sx * sx) * std::sqrt(n * syy - sy * sy)));
}

Outcome pearson_properties() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_exact = 0.0, worst_oracle = 0.0;
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<double> x(10), lin, neg;
    for (auto& v : x) v = u(rng);
    for (double v : x) {
      lin.push_back(2 * v + 3);
      neg.push_back(-v);
    }
    worst_exact = std::max({worst_exact, std::abs(pearson(x, x) - 1.0), std::abs(pearson(x, lin) - 1.0),
                            std::abs(pearson(x, neg) + 1.0)});
  }
  std::vector<std::string> ids;
  for (int i = 0; i < 10; ++i) ids.push_back(std::to_string(i));
  ScoreTable t(ids);
  std::vector<std::vector<double>> cols(3, std::vector<double>(10));
  const std::vector<std::string> names = {"a", "b", "c"};
  for (std::size_t c = 0; c < 3; ++c) {
    Column col;
    for (auto& v : cols[c]) col.push_back(v = u(rng));
    t.set_column(names[c], col);
  }
  const auto m = correlation_matrix(t, names);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const double want = i == j ? 1.0 : textbook_pearson(cols[i], cols[j]);
      worst_oracle = std::max(worst_oracle, m.r[i][j] ? std::abs(*m.r[i][j] - want) : 1.0);
    }
  }
  return {worst_exact <= kExactTol && worst_oracle <= kOracleTol,
          fmt::format("max exact-case error {:.1e}; max oracle error {:.1e}", worst_exact, worst_oracle)};
}

// Canned judge: the gold Hindi worked-example judgment for the first pair of every
// batch, and an arithmetically inconsistent one (score 1.0 despite a major
// error) for any other pair.
class CannedJudge final : public ChatClient {
 public:
  std::string send(const std::string& request_body) override {
    const std::string prompt = json::parse(request_body)["messages"][0]["content"];
    std::size_t n = 0;
    for (auto at = prompt.find("Sentence 1 (predicted):", prompt.find("SENTENCE PAIRS")); at != std::string::npos;
         at = prompt.find("Sentence 1 (predicted):", at + 1)) {
      ++n;
    }
    json out = json::object();
    const json gold = json::parse(kHindiGold)["1"];
    for (std::size_t i = 1; i <= n; ++i) {
      out[std::to_string(i)] = i == 1 ? gold
                                      : json{{"token_count", 3},
                                             {"non_penalizable", json::array()},
                                             {"major", json::array({json::array({"", "teen", "omission"})})},
                                             {"minor", json::array()},
                                             {"total_penalty", 1},
                                             {"score", 1.0}};
    }
    return json{{"choices", json::array({{{"message", {{"content", out.dump()}}}}})}}.dump();
  }
};

Outcome judge_determinism() {
  const auto tmpl = PromptTemplate::load(testing::prompt_dir(), "hi");
  const std::vector<JudgeInput> corpus = {{"appA", testing::kHindiRef, testing::kHindiHyp},
                                          {"short", "ek do teen", "ek do"}};
  JudgeConfig cfg;
  cfg.model = "canned";
  const RunMeta meta{"score", "-", "hi", testing::pack("hi").version(), "llm", {}, ojson::object()};
  std::string files[2];
  JudgeResult last;
  for (auto& f : files) {
    CannedJudge judge;
    last = judge_corpus(corpus, tmpl, cfg, judge, testing::pack("hi"));
    f = evaluations_jsonl(last.evaluations, meta);
  }
  const bool identical = files[0] == files[1];
  bool flagged = false;
  double recomputed = -1.0;
  if (last.evaluations.size() == 2) {
    const auto& e = last.evaluations[1];
    for (const auto& w : e.warnings) flagged = flagged || w.find("inconsistent") != std::string::npos;
    recomputed = e.laser;
  }
  const bool appA = !last.evaluations.empty() && std::abs(last.evaluations[0].laser - kWorkedLaser) < kScoreTol;
  const bool ok = identical && flagged && appA && last.report.inconsistent == 1 &&
                  std::abs(recomputed - (1.0 - 1.0 / 3.0)) < kScoreTol;
  return {ok, fmt::format("byte-identical={}; inconsistent flagged={} (recomputed {:.4f} used)", identical, flagged,
                          recomputed)};
}

Outcome zero_wer_filter() {
  const auto corpus = load_corpus(testing::fixture("worked_examples.jsonl"));
  const auto once = filter_zero_wer(corpus, testing::pack("hi"));
  const auto twice = filter_zero_wer(once.kept, testing::pack("hi"));
  const bool ok = once.removed_ids == std::vector<std::string>{"same"} && once.kept.size() == corpus.size() - 1 &&
                  twice.kept == once.kept && twice.removed_ids.empty();
  return {ok, fmt::format("{} in, {} removed, second pass removed {}", corpus.size(), once.removed_ids.size(),
                          twice.removed_ids.size())};
}

Outcome qualitative_buckets() {
  const RuleClassifier rules;
  std::vector<SentenceEvaluation> evals;
  evals.push_back(evaluate_sentence("appD", testing::kEnglishRef, testing::kEnglishHyp, rules, testing::pack("en")));
  evals.push_back(evaluate_sentence("appA", testing::kHindiRef, testing::kHindiHyp, rules, testing::pack("hi")));
  evals.push_back(evaluate_sentence("bad", "mera naam kumar hai", "tera kaam bhadda tha", rules, testing::pack("hi")));
  evals.push_back(evaluate_sentence("fine", "ek do teen char paanch", "ek do teen char", rules, testing::pack("hi")));
  bool ok = true;
  for (double split : {0.0, 0.25, 0.5, 0.79}) {
    const auto r = qualitative_report(evals, 0.35, split);
    std::set<std::string> ids;
    for (const auto& row : r.high_laser) ids.insert(row.id);
    for (const auto& row : r.low_laser) ok = ok && ids.insert(row.id).second;
    std::set<std::string> want;
    for (const auto& e : evals) {
      if (e.word_errors.rate > 0.35) want.insert(e.id);
    }
    ok = ok && ids == want;
    ok = ok && std::any_of(r.high_laser.begin(), r.high_laser.end(), [](const auto& row) { return row.id == "appD"; });
  }
  return {ok, "splits 0, 0.25, 0.5, 0.79: partition holds, appD in high bucket"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"hindi worked example", hindi_worked_example},
      {"english worked example", english_worked_example},
      {"alignment oracle equivalence", alignment_oracle},
      {"error taxonomy fixture", taxonomy_fixture},
      {"classifier accuracy table", accuracy_table},
      {"pearson properties", pearson_properties},
      {"llm judge determinism", judge_determinism},
      {"zero-wer filtering", zero_wer_filter},
      {"qualitative report", qualitative_buckets},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s  %-30s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}
