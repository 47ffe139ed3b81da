// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#include "laser/table_classifier.hpp"

#include <fmt/format.h>

#include <fstream>

#include "json.hpp"
#include "laser/error.hpp"

namespace laser {
namespace {

std::string joined(std::span<const Token> tokens) {
  std::string out;
  for (const auto& t : tokens) out += (out.empty() ? "" : " ") + t.normalized;
  return out;
}

}  // namespace

LookupClassifier::LookupClassifier(std::map<std::pair<std::string, std::string>, PenaltyClass> table, std::string id,
                                   const PairClassifier* fallback)
    : table_(std::move(table)), id_(std::move(id)), fallback_(fallback) {}

LookupClassifier LookupClassifier::load(const std::filesystem::path& path, const PairClassifier* fallback) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open predictions {}", path.string()));
  std::map<std::pair<std::string, std::string>, PenaltyClass> table;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (line.empty()) continue;
    try {
      const auto doc = nlohmann::json::parse(line);
      if (doc.contains("meta")) continue;
      const auto level = level_from_int(doc.at("label").get<int>());
      if (!level) throw DataError("label outside 0..3");
      Category category = *level == PenaltyLevel::kIdentical ? Category::kExactMatch : Category::kOther;
      if (doc.contains("category")) {
        if (auto c = category_from_string(doc.at("category").get<std::string>()); c && consistent(*level, *c)) {
          category = *c;
        }
      }
      table[{doc.at("ref").get<std::string>(), doc.at("hyp").get<std::string>()}] =
          PenaltyClass{*level, category, "predicted"};
    } catch (const std::exception& e) {
      throw DataError(fmt::format("{}:{}: {}", path.string(), n, e.what()));
    }
  }
  return LookupClassifier(std::move(table), fmt::format("pairs:{}", path.filename().string()), fallback);
}

PenaltyClass LookupClassifier::classify(const PairView& pair, const LanguagePack& pack) const {
  if (pair.op == EditKind::kMatch) return {PenaltyLevel::kIdentical, Category::kExactMatch, "identical"};
  auto it = table_.find({joined(pair.ref), joined(pair.hyp)});
  if (it != table_.end()) return it->second;
  if (fallback_) return fallback_->classify(pair, pack);
  throw DataError(fmt::format("no prediction for pair '{}' / '{}'", joined(pair.ref), joined(pair.hyp)));
}

}  // namespace laser
