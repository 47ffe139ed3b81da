// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#include "laser/ingest.hpp"

#include <fmt/format.h>

#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "laser/align.hpp"
#include "laser/error.hpp"
#include "laser/textnorm.hpp"

namespace laser {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

// Minimal CSV field splitter with double-quote support.
std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::size_t parse_count(const std::string& cell, const std::string& where) {
  const std::string t = trim(cell);
  if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) {
    throw DataError(fmt::format("{}: count '{}' is not a non-negative integer", where, cell));
  }
  return std::stoul(t);
}

bool valid_tsv_field(const std::string& s) { return s.find_first_of("\t\n\r") == std::string::npos; }

}  // namespace

CorpusFormat format_for(const std::filesystem::path& path) {
  return path.extension() == ".tsv" ? CorpusFormat::kTsv : CorpusFormat::kJsonl;
}

std::vector<CorpusRecord> parse_corpus(std::istream& in, CorpusFormat format, const std::string& source) {
  std::vector<CorpusRecord> out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t n = 0;
  auto add = [&](CorpusRecord r, std::size_t line_no) {
    if (r.id.empty()) throw DataError(fmt::format("{}:{}: empty id", source, line_no));
    if (trim(r.ref).empty()) throw DataError(fmt::format("{}:{}: empty ref", source, line_no));
    if (!seen.insert(r.id).second) throw DataError(fmt::format("{}:{}: duplicate id '{}'", source, line_no, r.id));
    out.push_back(std::move(r));
  };
  if (format == CorpusFormat::kJsonl) {
    while (std::getline(in, line)) {
      ++n;
      line = strip_cr(line);
      if (trim(line).empty()) continue;
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw DataError(fmt::format("{}:{}: invalid JSON: {}", source, n, e.what()));
      }
      if (!doc.is_object()) throw DataError(fmt::format("{}:{}: expected an object", source, n));
      if (doc.contains("meta")) continue;
      CorpusRecord r;
      for (auto [field, target] : {std::pair{"id", &r.id}, {"ref", &r.ref}, {"hyp", &r.hyp}}) {
        if (!doc.contains(field)) throw DataError(fmt::format("{}:{}: missing field '{}'", source, n, field));
        const auto& v = doc[field];
        if (v.is_string()) {
          *target = v.get<std::string>();
        } else if (v.is_number_integer() && std::string_view(field) == "id") {
          *target = std::to_string(v.get<long long>());
        } else {
          throw DataError(fmt::format("{}:{}: field '{}' must be a string", source, n, field));
        }
      }
      r.lang = doc.value("lang", "");
      add(std::move(r), n);
    }
    return out;
  }
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++n;
    line = strip_cr(line);
    if (trim(line).empty()) continue;
    auto fields = split(line, '\t');
    if (header.empty()) {
      header = fields;
      for (const char* required : {"id", "ref", "hyp"}) {
        if (std::find(header.begin(), header.end(), required) == header.end()) {
          throw DataError(fmt::format("{}:{}: header lacks column '{}'", source, n, required));
        }
      }
      continue;
    }
    if (fields.size() != header.size()) {
      throw DataError(fmt::format("{}:{}: expected {} columns, found {}", source, n, header.size(), fields.size()));
    }
    CorpusRecord r;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == "id") r.id = fields[i];
      if (header[i] == "lang") r.lang = fields[i];
      if (header[i] == "ref") r.ref = fields[i];
      if (header[i] == "hyp") r.hyp = fields[i];
    }
    add(std::move(r), n);
  }
  if (header.empty()) throw DataError(fmt::format("{}: missing TSV header", source));
  return out;
}

std::vector<CorpusRecord> load_corpus(const std::filesystem::path& path) {
  return load_corpus(path, format_for(path));
}

std::vector<CorpusRecord> load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open corpus {}", path.string()));
  return parse_corpus(in, format, path.string());
}

std::string serialize_corpus(std::span<const CorpusRecord> records, CorpusFormat format) {
  std::string out;
  if (format == CorpusFormat::kJsonl) {
    for (const auto& r : records) {
      nlohmann::ordered_json j;
      j["id"] = r.id;
      j["lang"] = r.lang;
      j["ref"] = r.ref;
      j["hyp"] = r.hyp;
      out += j.dump() + "\n";
    }
    return out;
  }
  out = "id\tlang\tref\thyp\n";
  for (const auto& r : records) {
    for (const auto* f : {&r.id, &r.lang, &r.ref, &r.hyp}) {
      if (!valid_tsv_field(*f)) throw DataError(fmt::format("record '{}' contains a tab or newline", r.id));
    }
    out += fmt::format("{}\t{}\t{}\t{}\n", r.id, r.lang, r.ref, r.hyp);
  }
  return out;
}

FilterResult filter_zero_wer(std::span<const CorpusRecord> corpus, const LanguagePack& pack) {
  FilterResult result;
  for (const auto& r : corpus) {
    const ErrorRate e = wer(tokenize(r.ref, pack, r.id), tokenize(r.hyp, pack, r.id));
    if (e.errors() == 0) {
      result.removed_ids.push_back(r.id);
    } else {
      result.kept.push_back(r);
    }
  }
  return result;
}

std::vector<std::string> merge_score_columns(ScoreTable& table, std::istream& csv, const std::string& source) {
  std::vector<std::string> warnings;
  std::string line;
  std::vector<std::string> header;
  std::size_t n = 0;
  std::vector<Column> columns;
  std::unordered_set<std::string> seen;
  while (std::getline(csv, line)) {
    ++n;
    line = strip_cr(line);
    if (trim(line).empty() || line[0] == '#') continue;
    auto fields = csv_fields(line);
    if (header.empty()) {
      header = fields;
      if (header.size() < 2 || trim(header[0]) != "id") {
        throw DataError(fmt::format("{}:{}: header must be id,<metric>,...", source, n));
      }
      columns.assign(header.size() - 1, Column(table.rows()));
      continue;
    }
    if (fields.size() != header.size()) {
      throw DataError(fmt::format("{}:{}: expected {} fields, found {}", source, n, header.size(), fields.size()));
    }
    const std::string id = trim(fields[0]);
    if (!seen.insert(id).second) throw DataError(fmt::format("{}:{}: duplicate id '{}'", source, n, id));
    const auto row = table.row_of(id);
    if (!row) {
      warnings.push_back(fmt::format("{}:{}: unknown id '{}' skipped", source, n, id));
      continue;
    }
    for (std::size_t c = 1; c < fields.size(); ++c) {
      const std::string v = trim(fields[c]);
      if (v.empty() || v == "NA" || v == "nan") continue;
      try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        columns[c - 1][*row] = d;
      } catch (const std::exception&) {
        throw DataError(fmt::format("{}:{}: '{}' is not a number", source, n, v));
      }
    }
  }
  if (header.empty()) throw DataError(fmt::format("{}: empty score file", source));
  for (std::size_t c = 0; c < columns.size(); ++c) table.set_column(trim(header[c + 1]), std::move(columns[c]));
  return warnings;
}

double unit_interval(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

TrainingExport export_training_pairs(std::span<const SentenceEvaluation> evals, const ExportOptions& options) {
  if (!(options.identical_sample_rate >= 0.0 && options.identical_sample_rate <= 1.0)) {
    throw ConfigError("identical sample rate must lie in [0, 1]");
  }
  std::mt19937_64 rng(options.seed);
  TrainingExport out;
  auto join = [](const std::vector<std::string>& w) {
    std::string s;
    for (const auto& x : w) s += (s.empty() ? "" : " ") + x;
    return s;
  };
  for (const auto& e : evals) {
    const bool heldout = options.heldout_ids.count(e.id) > 0;
    for (const auto& p : e.classified_pairs) {
      // Draws happen for every pair so one pair's fate never shifts another's.
      const double keep_draw = unit_interval(rng());
      const double split_draw = unit_interval(rng());
      if (p.cls.level == PenaltyLevel::kIdentical && !(keep_draw < options.identical_sample_rate)) continue;
      TrainingPair t;
      t.ref = join(p.ref);
      t.hyp = join(p.hyp);
      t.label = static_cast<int>(p.cls.level);
      t.category = std::string(to_string(p.cls.category));
      t.sentence_id = e.id;
      if (heldout) {
        t.split = "heldout";
      } else if (split_draw < options.test_fraction) {
        t.split = "test";
      } else if (split_draw < options.test_fraction + options.val_fraction) {
        t.split = "val";
      } else {
        t.split = "train";
      }
      ++out.label_histogram[static_cast<std::size_t>(t.label)];
      out.pairs.push_back(std::move(t));
    }
  }
  return out;
}

std::string training_jsonl(const TrainingExport& exported) {
  std::string out;
  for (const auto& p : exported.pairs) {
    nlohmann::ordered_json j;
    j["ref"] = p.ref;
    j["hyp"] = p.hyp;
    j["label"] = p.label;
    j["category"] = p.category;
    j["sentence_id"] = p.sentence_id;
    j["split"] = p.split;
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<std::string> split_annotation_list(const std::string& cell) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : cell) {
    if (c == '(') ++depth;
    if (c == ')' && depth > 0) --depth;
    if ((c == ';') && depth == 0) {
      if (!trim(cur).empty()) out.push_back(trim(cur));
      cur.clear();
      continue;
    }
    cur += c;
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

std::string join_annotation_list(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) {
    std::string clean;
    for (char c : item) clean += (c == '\t' || c == '\n' || c == '\r' || c == ';') ? ' ' : c;
    out += (out.empty() ? "" : "; ") + clean;
  }
  return out;
}

std::vector<HumanAnnotation> import_human_annotations(std::istream& in,
                                                      const std::map<std::string, std::size_t>& reference_words,
                                                      const PenaltyWeights& weights, const std::string& source) {
  std::vector<HumanAnnotation> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    line = strip_cr(line);
    if (trim(line).empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    if (n == 1 && !fields.empty() && trim(fields[0]) == "id") continue;
    const std::string where = fmt::format("{}:{}", source, n);
    if (fields.size() != 7) throw DataError(fmt::format("{}: expected 7 columns (id + 6), found {}", where, fields.size()));
    HumanAnnotation a;
    a.id = trim(fields[0]);
    const auto it = reference_words.find(a.id);
    if (it == reference_words.end()) throw DataError(fmt::format("{}: unknown sentence id '{}'", where, a.id));
    a.reference_words = it->second;
    a.no_penalty = split_annotation_list(fields[1]);
    a.major = split_annotation_list(fields[2]);
    a.minor = split_annotation_list(fields[3]);
    a.no_penalty_count = parse_count(fields[4], where);
    a.major_count = parse_count(fields[5], where);
    a.minor_count = parse_count(fields[6], where);
    const std::pair<const char*, std::pair<std::size_t, std::size_t>> checks[] = {
        {"no-penalty", {a.no_penalty.size(), a.no_penalty_count}},
        {"major", {a.major.size(), a.major_count}},
        {"minor", {a.minor.size(), a.minor_count}}};
    for (const auto& [name, sizes] : checks) {
      if (sizes.first != sizes.second) {
        a.warnings.push_back(
            fmt::format("{}: {} list has {} entries but count says {}", where, name, sizes.first, sizes.second));
      }
    }
    try {
      a.score = score_counts(a.reference_words, a.major_count, a.minor_count, weights);
    } catch (const DegenerateReference& e) {
      throw DegenerateReference(fmt::format("{}: {}", where, e.what()));
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<int> load_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  std::vector<int> out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    line = trim(strip_cr(line));
    if (line.empty() || line[0] == '#') continue;
    try {
      if (line[0] == '{') {
        const auto doc = nlohmann::json::parse(line);
        if (doc.contains("meta")) continue;
        out.push_back(doc.at("label").get<int>());
      } else {
        std::size_t used = 0;
        out.push_back(std::stoi(line, &used));
        if (used != line.size()) throw std::invalid_argument(line);
      }
    } catch (const std::exception&) {
      throw DataError(fmt::format("{}:{}: cannot read a label from '{}'", path.string(), n, line));
    }
  }
  return out;
}

}  // namespace laser
