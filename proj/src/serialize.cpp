// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#include "laser/serialize.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <fstream>
#include <sstream>

#include "laser/error.hpp"

namespace laser {

EditKind reversed(EditKind kind) {
  switch (kind) {
    case EditKind::kDelete: return EditKind::kInsert;
    case EditKind::kInsert: return EditKind::kDelete;
    case EditKind::kJoin: return EditKind::kSplit;
    case EditKind::kSplit: return EditKind::kJoin;
    default: return kind;
  }
}

ojson to_json(const ErrorRate& rate) {
  ojson j;
  j["rate"] = rate.rate;
  j["substitutions"] = rate.substitutions;
  j["deletions"] = rate.deletions;
  j["insertions"] = rate.insertions;
  j["reference_length"] = rate.reference_length;
  // Same counts read from the hypothesis towards the reference.
  j["hyp_to_ref"] = {{"deletions", rate.insertions}, {"insertions", rate.deletions}};
  if (rate.degenerate_reference) j["degenerate_reference"] = true;
  return j;
}

ojson to_json(const SentenceEvaluation& eval) {
  ojson j;
  j["id"] = eval.id;
  j["ref"] = eval.ref_text;
  j["hyp"] = eval.hyp_text;
  j["classifier"] = eval.classifier_id;
  j["ref_word_count"] = eval.ref_word_count;
  j["total_penalty"] = eval.total_penalty;
  j["laser_raw"] = eval.laser_raw;
  j["laser"] = eval.laser;
  j["wer"] = to_json(eval.word_errors);
  auto pairs = ojson::array();
  for (const auto& p : eval.classified_pairs) {
    ojson pj;
    pj["ref"] = p.ref;
    pj["hyp"] = p.hyp;
    pj["op"] = to_string(p.op);
    pj["op_hyp_to_ref"] = to_string(reversed(p.op));
    pj["level"] = static_cast<int>(p.cls.level);
    pj["category"] = to_string(p.cls.category);
    pj["reason"] = p.cls.rationale;
    pairs.push_back(std::move(pj));
  }
  j["pairs"] = std::move(pairs);
  j["warnings"] = eval.warnings;
  return j;
}

SentenceEvaluation evaluation_from_json(const nlohmann::json& doc) {
  SentenceEvaluation e;
  try {
    e.id = doc.at("id").get<std::string>();
    e.ref_text = doc.value("ref", "");
    e.hyp_text = doc.value("hyp", "");
    e.classifier_id = doc.value("classifier", "");
    e.ref_word_count = doc.at("ref_word_count").get<std::size_t>();
    e.total_penalty = doc.at("total_penalty").get<double>();
    e.laser_raw = doc.at("laser_raw").get<double>();
    e.laser = doc.at("laser").get<double>();
    const auto& w = doc.at("wer");
    e.word_errors.rate = w.at("rate").get<double>();
    e.word_errors.substitutions = w.value("substitutions", std::size_t{0});
    e.word_errors.deletions = w.value("deletions", std::size_t{0});
    e.word_errors.insertions = w.value("insertions", std::size_t{0});
    e.word_errors.reference_length = w.value("reference_length", std::size_t{0});
    e.word_errors.degenerate_reference = w.value("degenerate_reference", false);
    for (const auto& pj : doc.at("pairs")) {
      ClassifiedPair p;
      p.ref = pj.at("ref").get<std::vector<std::string>>();
      p.hyp = pj.at("hyp").get<std::vector<std::string>>();
      const auto op = edit_kind_from_string(pj.at("op").get<std::string>());
      if (!op) throw DataError(fmt::format("unknown op '{}'", pj.at("op").get<std::string>()));
      p.op = *op;
      const auto level = level_from_int(pj.at("level").get<int>());
      if (!level) throw DataError("pair level outside 0..3");
      const auto category = category_from_string(pj.at("category").get<std::string>());
      if (!category) throw DataError(fmt::format("unknown category '{}'", pj.at("category").get<std::string>()));
      p.cls = {*level, *category, pj.value("reason", "")};
      e.classified_pairs.push_back(std::move(p));
    }
    if (doc.contains("warnings")) e.warnings = doc.at("warnings").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& ex) {
    throw DataError(fmt::format("malformed evaluation record: {}", ex.what()));
  }
  return e;
}

ojson to_json(const Alignment& alignment, const TokenizedSentence& ref, const TokenizedSentence& hyp) {
  ojson j;
  auto words = [](const TokenizedSentence& s, const Span& span) {
    std::vector<std::string> out;
    for (std::size_t i = span.begin; i < span.end; ++i) out.push_back(s.tokens[i].normalized);
    return out;
  };
  auto pairs = ojson::array();
  for (const auto& p : alignment.pairs) {
    ojson pj;
    pj["op"] = to_string(p.op);
    pj["op_hyp_to_ref"] = to_string(reversed(p.op));
    pj["ref"] = words(ref, p.ref);
    pj["hyp"] = words(hyp, p.hyp);
    pairs.push_back(std::move(pj));
  }
  j["pairs"] = std::move(pairs);
  j["distance"] = alignment.distance;
  const auto& c = alignment.counts;
  j["counts"] = {{"matches", c.matches},         {"substitutions", c.substitutions}, {"deletions", c.deletions},
                 {"insertions", c.insertions}, {"joins", c.joins},                 {"splits", c.splits}};
  return j;
}

std::string meta_line(const RunMeta& meta) {
  ojson m;
  m["command"] = meta.command;
  m["config_hash"] = meta.config_hash;
  m["lang"] = meta.lang;
  m["pack_version"] = meta.pack_version;
  m["backend"] = meta.backend;
  m["weights"] = {{"minor", meta.weights.minor}, {"major", meta.weights.major}};
  m["punctuation"] = "stripped before all metrics";
  for (auto it = meta.extra.begin(); it != meta.extra.end(); ++it) m[it.key()] = it.value();
  ojson line;
  line["meta"] = std::move(m);
  return line.dump() + "\n";
}

std::string evaluations_jsonl(std::span<const SentenceEvaluation> evals, const RunMeta& meta) {
  std::string out = meta_line(meta);
  for (const auto& e : evals) out += to_json(e).dump() + "\n";
  return out;
}

std::vector<SentenceEvaluation> load_evaluations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  std::vector<SentenceEvaluation> out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (line.empty()) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(fmt::format("{}:{}: {}", path.string(), n, e.what()));
    }
    if (doc.contains("meta")) continue;
    try {
      out.push_back(evaluation_from_json(doc));
    } catch (const DataError& e) {
      throw DataError(fmt::format("{}:{}: {}", path.string(), n, e.what()));
    }
  }
  return out;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::string out;
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(fmt::format("cannot write {}", tmp.string()));
    out << content;
    if (!out) throw DataError(fmt::format("write to {} failed", tmp.string()));
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace laser
