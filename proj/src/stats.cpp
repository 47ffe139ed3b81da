// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#include "laser/stats.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace laser {
namespace {

std::string md_escape(std::string s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out;
}

std::string cell(const std::optional<double>& v, bool percent) {
  if (!v) return {};
  return percent ? fmt::format("{:.4f}", 100.0 * *v) : fmt::format("{:.6f}", *v);
}

QualitativeRow row_of(const SentenceEvaluation& e) {
  QualitativeRow row;
  row.id = e.id;
  row.ref = e.ref_text;
  row.hyp = e.hyp_text;
  row.laser = e.laser;
  row.wer = e.word_errors.rate;
  for (const auto& p : e.classified_pairs) {
    if (p.cls.level == PenaltyLevel::kIdentical) continue;
    auto join = [](const std::vector<std::string>& w) {
      std::string s;
      for (const auto& x : w) s += (s.empty() ? "" : " ") + x;
      return s.empty() ? std::string("-") : s;
    };
    row.mismatches.push_back(fmt::format("{} vs {}", join(p.ref), join(p.hyp)));
    ++row.categories[p.cls.category];
  }
  return row;
}

}  // namespace

ScoreTable::ScoreTable(std::vector<std::string> ids) : ids_(std::move(ids)) {
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!row_index_.emplace(ids_[i], i).second) throw DataError(fmt::format("duplicate sentence id '{}'", ids_[i]));
  }
}

bool ScoreTable::has(const std::string& name) const { return columns_.count(name) > 0; }

const Column& ScoreTable::column(const std::string& name) const {
  auto it = columns_.find(name);
  if (it == columns_.end()) throw DataError(fmt::format("unknown column '{}'", name));
  return it->second;
}

void ScoreTable::set_column(const std::string& name, Column values) {
  if (values.size() != ids_.size()) {
    throw DataError(fmt::format("column '{}' has {} values for {} rows", name, values.size(), ids_.size()));
  }
  if (!has(name)) names_.push_back(name);
  columns_[name] = std::move(values);
}

std::optional<std::size_t> ScoreTable::row_of(const std::string& id) const {
  auto it = row_index_.find(id);
  if (it == row_index_.end()) return std::nullopt;
  return it->second;
}

ScoreTable table_from_evaluations(std::span<const SentenceEvaluation> evals, const std::string& laser_name) {
  std::vector<std::string> ids;
  Column laser, raw, w, one_minus;
  for (const auto& e : evals) {
    ids.push_back(e.id);
    laser.push_back(e.laser);
    raw.push_back(e.laser_raw);
    w.push_back(e.word_errors.rate);
    one_minus.push_back(1.0 - e.word_errors.rate);
  }
  ScoreTable t(std::move(ids));
  t.set_column(laser_name, std::move(laser));
  t.set_column(laser_name + "_raw", std::move(raw));
  t.set_column("wer", std::move(w));
  t.set_column("one_minus_wer", std::move(one_minus));
  return t;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("pearson: columns differ in length");
  const std::size_t n = x.size();
  if (n < 2) throw UndefinedCorrelation("pearson: fewer than 2 paired values");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelation("pearson: constant column");
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

double pearson(const Column& x, const Column& y) {
  if (x.size() != y.size()) throw DataError("pearson: columns differ in length");
  std::vector<double> a, b;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] && y[i]) {
      a.push_back(*x[i]);
      b.push_back(*y[i]);
    }
  }
  return pearson(std::span<const double>(a), std::span<const double>(b));
}

CorrelationMatrix correlation_matrix(const ScoreTable& table, const std::vector<std::string>& columns) {
  std::vector<std::string> missing;
  for (const auto& c : columns) {
    if (!table.has(c)) missing.push_back(c);
  }
  if (!missing.empty()) throw DataError(fmt::format("unknown columns: {}", fmt::join(missing, ", ")));
  CorrelationMatrix m;
  m.names = columns;
  const std::size_t k = columns.size();
  m.r.assign(k, std::vector<std::optional<double>>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      try {
        const double r = pearson(table.column(columns[i]), table.column(columns[j]));
        m.r[i][j] = m.r[j][i] = (i == j) ? 1.0 : r;
      } catch (const UndefinedCorrelation& e) {
        m.warnings.push_back(fmt::format("{} vs {}: {}", columns[i], columns[j], e.what()));
      }
    }
  }
  return m;
}

std::string CorrelationMatrix::to_csv(bool percent) const {
  std::string out = "metric";
  for (const auto& n : names) out += "," + n;
  out += '\n';
  for (std::size_t i = 0; i < names.size(); ++i) {
    out += names[i];
    for (std::size_t j = 0; j < names.size(); ++j) out += "," + cell(r[i][j], percent);
    out += '\n';
  }
  return out;
}

std::string CorrelationMatrix::to_json() const {
  nlohmann::ordered_json doc;
  doc["columns"] = names;
  auto matrix = nlohmann::ordered_json::array();
  auto matrix_pct = nlohmann::ordered_json::array();
  for (const auto& row : r) {
    auto a = nlohmann::ordered_json::array();
    auto b = nlohmann::ordered_json::array();
    for (const auto& v : row) {
      a.push_back(v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json());
      b.push_back(v ? nlohmann::ordered_json(100.0 * *v) : nlohmann::ordered_json());
    }
    matrix.push_back(std::move(a));
    matrix_pct.push_back(std::move(b));
  }
  doc["matrix"] = std::move(matrix);
  doc["matrix_percent"] = std::move(matrix_pct);
  doc["warnings"] = warnings;
  return doc.dump(2) + "\n";
}

std::optional<double> ClassAccuracy::accuracy() const {
  if (test_count == 0) return std::nullopt;
  return static_cast<double>(correct_count) / static_cast<double>(test_count);
}

std::string format_percent(std::size_t num, std::size_t den) {
  if (den == 0) return "n/a";
  const std::size_t hundredths = (num * 20000 + den) / (2 * den);
  return fmt::format("{}.{:02}", hundredths / 100, hundredths % 100);
}

AccuracyTable classifier_accuracy(std::span<const int> predicted, std::span<const int> gold,
                                  const std::array<std::size_t, kNumClasses>& train_val_counts) {
  if (predicted.size() != gold.size()) {
    throw DataError(fmt::format("{} predictions for {} gold labels", predicted.size(), gold.size()));
  }
  AccuracyTable t;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (int label : {predicted[i], gold[i]}) {
      if (label < 0 || label >= kNumClasses) throw DataError(fmt::format("row {}: label {} outside 0..3", i + 1, label));
    }
    auto& c = t.classes[static_cast<std::size_t>(gold[i])];
    ++c.test_count;
    if (predicted[i] == gold[i]) ++c.correct_count;
  }
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    t.classes[k].train_val_count = train_val_counts[k];
    t.overall.train_val_count += train_val_counts[k];
    t.overall.test_count += t.classes[k].test_count;
    t.overall.correct_count += t.classes[k].correct_count;
  }
  return t;
}

std::string AccuracyTable::to_text() const {
  std::string out = fmt::format("{:<8} {:>9} {:>6} {:>8} {:>9}\n", "class", "train+val", "test", "correct", "accuracy");
  auto line = [](const std::string& name, const ClassAccuracy& c) {
    const std::string acc = c.test_count ? format_percent(c.correct_count, c.test_count) + "%" : "n/a";
    return fmt::format("{:<8} {:>9} {:>6} {:>8} {:>9}\n", name, c.train_val_count, c.test_count, c.correct_count, acc);
  };
  for (std::size_t k = 0; k < kNumClasses; ++k) out += line(std::to_string(k), classes[k]);
  out += line("overall", overall);
  return out;
}

std::string AccuracyTable::to_csv() const {
  std::string out = "class,train_val_count,test_count,correct_count,accuracy_percent,accuracy_exact\n";
  auto line = [](const std::string& name, const ClassAccuracy& c) {
    const auto acc = c.accuracy();
    return fmt::format("{},{},{},{},{},{}\n", name, c.train_val_count, c.test_count, c.correct_count,
                       acc ? format_percent(c.correct_count, c.test_count) : "n/a",
                       acc ? fmt::format("{}/{}", c.correct_count, c.test_count) : "n/a");
  };
  for (std::size_t k = 0; k < kNumClasses; ++k) out += line(std::to_string(k), classes[k]);
  out += line("overall", overall);
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

QualitativeReport qualitative_report(std::span<const SentenceEvaluation> evals, double wer_threshold,
                                     std::optional<double> laser_split) {
  QualitativeReport report;
  report.wer_threshold = wer_threshold;
  if (laser_split) {
    report.laser_split = *laser_split;
  } else {
    std::vector<double> lasers;
    for (const auto& e : evals) lasers.push_back(e.laser);
    report.laser_split = median(std::move(lasers));
  }
  for (const auto& e : evals) {
    if (!(e.word_errors.rate > wer_threshold)) continue;
    (e.laser >= report.laser_split ? report.high_laser : report.low_laser).push_back(row_of(e));
  }
  return report;
}

std::string QualitativeReport::to_markdown() const {
  std::string out = fmt::format("# High-WER samples\n\nWER threshold: {:.2f}, LASER split: {:.4f}\n", wer_threshold,
                                laser_split);
  auto section = [&](const std::string& title, const std::vector<QualitativeRow>& rows) {
    out += fmt::format("\n## {} ({} samples)\n\n", title, rows.size());
    out += "| id | reference | hypothesis | mismatches | categories | LASER | WER |\n";
    out += "|---|---|---|---|---|---|---|\n";
    for (const auto& r : rows) {
      std::vector<std::string> cats;
      for (const auto& [c, n] : r.categories) cats.push_back(fmt::format("{} x{}", to_string(c), n));
      out += fmt::format("| {} | {} | {} | {} | {} | {:.4f} | {:.4f} |\n", md_escape(r.id), md_escape(r.ref),
                         md_escape(r.hyp), md_escape(fmt::format("{}", fmt::join(r.mismatches, "; "))),
                         fmt::join(cats, ", "), r.laser, r.wer);
    }
  };
  section("High WER, high LASER", high_laser);
  section("High WER, low LASER", low_laser);
  return out;
}

std::string QualitativeReport::to_jsonl() const {
  std::string out;
  auto emit = [&](const char* bucket, const std::vector<QualitativeRow>& rows) {
    for (const auto& r : rows) {
      nlohmann::ordered_json j;
      j["bucket"] = bucket;
      j["id"] = r.id;
      j["ref"] = r.ref;
      j["hyp"] = r.hyp;
      j["mismatches"] = r.mismatches;
      nlohmann::ordered_json cats = nlohmann::ordered_json::object();
      for (const auto& [c, n] : r.categories) cats[std::string(to_string(c))] = n;
      j["categories"] = std::move(cats);
      j["laser"] = r.laser;
      j["wer"] = r.wer;
      out += j.dump() + "\n";
    }
  };
  emit("high_laser", high_laser);
  emit("low_laser", low_laser);
  return out;
}

}  // namespace laser
