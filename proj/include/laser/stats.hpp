// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "laser/error.hpp"
#include "laser/rubric.hpp"

namespace laser {

using Column = std::vector<std::optional<double>>;

// Named numeric columns over an ordered list of sentence ids. Missing cells
// are empty optionals.
class ScoreTable {
 public:
  ScoreTable() = default;
  explicit ScoreTable(std::vector<std::string> ids);

  const std::vector<std::string>& ids() const { return ids_; }
  const std::vector<std::string>& names() const { return names_; }
  std::size_t rows() const { return ids_.size(); }
  bool has(const std::string& name) const;
  const Column& column(const std::string& name) const;
  // Replaces a column of the same name. Throws DataError on a length mismatch.
  void set_column(const std::string& name, Column values);
  std::optional<std::size_t> row_of(const std::string& id) const;

 private:
  std::vector<std::string> ids_;
  std::map<std::string, std::size_t> row_index_;
  std::vector<std::string> names_;
  std::map<std::string, Column> columns_;
};

// Columns <laser_name>, <laser_name>_raw, wer and one_minus_wer, one row per
// evaluation in input order.
ScoreTable table_from_evaluations(std::span<const SentenceEvaluation> evals, const std::string& laser_name = "laser");

class UndefinedCorrelation : public DataError {
 public:
  using DataError::DataError;
};

// Sample Pearson correlation over rows where both cells are present. Throws
// UndefinedCorrelation with fewer than 2 rows or a constant column.
double pearson(const Column& x, const Column& y);
double pearson(std::span<const double> x, std::span<const double> y);

struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<std::optional<double>>> r;  // empty cell = undefined
  std::vector<std::string> warnings;

  // Header row and column of metric names; empty cells for undefined values.
  // `percent` writes 100 r.
  std::string to_csv(bool percent = false) const;
  // {"columns": [...], "matrix": [[r...]], "matrix_percent": [[100 r...]]}
  std::string to_json() const;
};

// Throws DataError naming every unknown column.
CorrelationMatrix correlation_matrix(const ScoreTable& table, const std::vector<std::string>& columns);

inline constexpr int kNumClasses = 4;

struct ClassAccuracy {
  std::size_t train_val_count = 0;
  std::size_t test_count = 0;
  std::size_t correct_count = 0;
  // Empty when test_count is 0.
  std::optional<double> accuracy() const;
};

struct AccuracyTable {
  std::array<ClassAccuracy, kNumClasses> classes;
  ClassAccuracy overall;

  std::string to_text() const;
  std::string to_csv() const;
};

// Percentage of num/den rounded half up to 2 decimals, e.g. "88.68".
std::string format_percent(std::size_t num, std::size_t den);

// Throws DataError on a length mismatch or a label outside 0..3.
AccuracyTable classifier_accuracy(std::span<const int> predicted, std::span<const int> gold,
                                  const std::array<std::size_t, kNumClasses>& train_val_counts = {});

struct QualitativeRow {
  std::string id;
  std::string ref;
  std::string hyp;
  std::vector<std::string> mismatches;  // "ref vs hyp" per non-identical pair
  std::map<Category, std::size_t> categories;
  double laser = 0.0;
  double wer = 0.0;
};

struct QualitativeReport {
  double wer_threshold = 0.35;
  double laser_split = 0.0;
  std::vector<QualitativeRow> high_laser;
  std::vector<QualitativeRow> low_laser;

  std::string to_markdown() const;
  std::string to_jsonl() const;
};

inline constexpr double kDefaultWerThreshold = 0.35;

double median(std::vector<double> values);

// Keeps evaluations with wer > threshold and splits them at laser_split
// (>= goes high). The split defaults to the median LASER of all evaluations.
QualitativeReport qualitative_report(std::span<const SentenceEvaluation> evals,
                                     double wer_threshold = kDefaultWerThreshold,
                                     std::optional<double> laser_split = std::nullopt);

}  // namespace laser
