// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "laser/language_pack.hpp"
#include "laser/rubric.hpp"
#include "laser/stats.hpp"

namespace laser {

struct CorpusRecord {
  std::string id;
  std::string lang;
  std::string ref;
  std::string hyp;
  bool operator==(const CorpusRecord&) const = default;
};

enum class CorpusFormat { kJsonl, kTsv };

// From the file extension: .tsv -> TSV, anything else -> JSONL.
CorpusFormat format_for(const std::filesystem::path& path);

// Throws DataError naming the line on schema violations, empty references
// and duplicate ids.
std::vector<CorpusRecord> parse_corpus(std::istream& in, CorpusFormat format, const std::string& source = "<input>");
std::vector<CorpusRecord> load_corpus(const std::filesystem::path& path);
std::vector<CorpusRecord> load_corpus(const std::filesystem::path& path, CorpusFormat format);
std::string serialize_corpus(std::span<const CorpusRecord> records, CorpusFormat format);

struct FilterResult {
  std::vector<CorpusRecord> kept;
  std::vector<std::string> removed_ids;
};

// Drops records whose word error rate is 0 after normalization.
FilterResult filter_zero_wer(std::span<const CorpusRecord> corpus, const LanguagePack& pack);

// Adds every metric of an "id,<metric>,..." CSV as a column. Ids absent from
// the CSV become missing cells; CSV rows with unknown ids are skipped with a
// warning (returned). Duplicate ids throw DataError.
std::vector<std::string> merge_score_columns(ScoreTable& table, std::istream& csv, const std::string& source = "<csv>");

struct TrainingPair {
  std::string ref;
  std::string hyp;
  int label = 0;
  std::string category;
  std::string sentence_id;
  std::string split;  // train | val | test | heldout
};

struct ExportOptions {
  double identical_sample_rate = 0.1;
  std::uint64_t seed = 0;
  double val_fraction = 0.1;
  double test_fraction = 0.1;
  std::set<std::string> heldout_ids;
};

struct TrainingExport {
  std::vector<TrainingPair> pairs;
  std::array<std::size_t, 4> label_histogram{};
};

// Every non-identical pair plus a seeded sample of identical ones.
TrainingExport export_training_pairs(std::span<const SentenceEvaluation> evals, const ExportOptions& options);
std::string training_jsonl(const TrainingExport& exported);

// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
double unit_interval(std::uint64_t bits);

struct HumanAnnotation {
  std::string id;
  std::vector<std::string> no_penalty;
  std::vector<std::string> major;
  std::vector<std::string> minor;
  std::size_t no_penalty_count = 0;
  std::size_t major_count = 0;
  std::size_t minor_count = 0;
  std::size_t reference_words = 0;
  SentenceScore score;
  std::vector<std::string> warnings;
};

// Splits an annotation list cell ("a vs b (reason); c vs d (reason)").
std::vector<std::string> split_annotation_list(const std::string& cell);
std::string join_annotation_list(const std::vector<std::string>& items);

// Rows: id, no-penalty list, major list, minor list, no-penalty count, major
// count, minor count (tab separated, optional header). Scores use the counts
// and the toolkit's reference word count for the id.
std::vector<HumanAnnotation> import_human_annotations(std::istream& in,
                                                      const std::map<std::string, std::size_t>& reference_words,
                                                      const PenaltyWeights& weights = {},
                                                      const std::string& source = "<annotations>");

// Class labels, one per line, or JSONL objects carrying "label".
std::vector<int> load_labels(const std::filesystem::path& path);

}  // namespace laser
