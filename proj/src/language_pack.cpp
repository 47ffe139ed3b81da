// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#include "laser/language_pack.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "laser/error.hpp"
#include "laser/textnorm.hpp"

namespace laser {
namespace {

using nlohmann::json;

// Rules must strictly shrink the string, or keep its length and make it
// bytewise smaller; either way repeated rewriting terminates.
bool rule_decreases(const FoldRule& r) {
  if (r.to.size() != r.from.size()) return r.to.size() < r.from.size();
  return r.to < r.from;
}

std::string squash(const std::string& s) {
  std::string out;
  for (char c : normalize_text(s)) {
    if (c != ' ' && c != '-') out += c;
  }
  return out;
}

void add_pairs(const json& doc, const char* key, std::set<StringPair>& out) {
  if (!doc.contains(key)) return;
  for (const auto& item : doc.at(key)) {
    if (!item.is_array() || item.size() != 2) {
      throw ConfigError(fmt::format("language pack: '{}' entries must be two-element arrays", key));
    }
    auto a = item[0].get<std::string>();
    auto b = item[1].get<std::string>();
    out.emplace(a, b);
    out.emplace(b, a);
  }
}

}  // namespace

LanguagePack LanguagePack::from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("language pack: {}", e.what()));
  }
  LanguagePack pack;
  try {
    pack.lang_ = doc.at("lang").get<std::string>();
    pack.version_ = doc.value("version", std::string("0"));
    pack.min_stem_graphemes_ = doc.value("min_stem_graphemes", std::size_t{2});
    if (doc.contains("numeral_lexicon")) {
      for (const auto& [words, value] : doc.at("numeral_lexicon").items()) {
        const std::string key = normalize_text(words);
        if (key.empty()) throw ConfigError("language pack: empty numeral_lexicon key");
        pack.numeral_lexicon_[key] = value.get<std::int64_t>();
        const auto n = static_cast<std::size_t>(std::count(key.begin(), key.end(), ' ')) + 1;
        pack.max_numeral_words_ = std::max(pack.max_numeral_words_, n);
      }
    }
    if (doc.contains("letter_names")) {
      for (const auto& [name, letter] : doc.at("letter_names").items()) {
        pack.letter_names_[normalize_text(name)] = letter.get<std::string>();
      }
    }
    if (doc.contains("fold_rules")) {
      for (const auto& item : doc.at("fold_rules")) {
        FoldRule rule;
        rule.from = item.at("from").get<std::string>();
        rule.to = item.value("to", std::string{});
        const auto scope = item.value("scope", std::string("general"));
        if (scope == "general") {
          rule.scope = FoldScope::kGeneral;
        } else if (scope == "lenient") {
          rule.scope = FoldScope::kLenient;
        } else {
          throw ConfigError(fmt::format("language pack: unknown fold scope '{}'", scope));
        }
        const auto position = item.value("position", std::string("any"));
        if (position == "any") {
          rule.position = FoldPosition::kAnywhere;
        } else if (position == "initial") {
          rule.position = FoldPosition::kInitial;
        } else if (position == "final") {
          rule.position = FoldPosition::kFinal;
        } else {
          throw ConfigError(fmt::format("language pack: unknown fold position '{}'", position));
        }
        if (rule.from.empty() || !rule_decreases(rule)) {
          throw ConfigError(
              fmt::format("language pack: fold rule '{}' -> '{}' must shorten or lexically lower its match",
                          rule.from, rule.to));
        }
        pack.fold_rules_.push_back(std::move(rule));
      }
    }
    add_pairs(doc, "minor_suffix_pairs", pack.minor_suffix_pairs_);
    add_pairs(doc, "colloquial_pairs", pack.colloquial_pairs_);
    add_pairs(doc, "similar_sound_graphemes", pack.similar_sound_graphemes_);
    if (doc.contains("loan_words")) {
      for (const auto& item : doc.at("loan_words")) {
        LoanWord lw;
        lw.english = item.value("english", std::vector<std::string>{});
        lw.spellings = item.at("spellings").get<std::vector<std::string>>();
        pack.loan_words_.push_back(std::move(lw));
      }
    }
    if (doc.contains("proper_nouns")) {
      for (const auto& name : doc.at("proper_nouns")) pack.proper_nouns_.insert(normalize_text(name.get<std::string>()));
    }
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("language pack '{}': {}", pack.lang_, e.what()));
  }
  pack.rebuild_derived();
  return pack;
}

LanguagePack LanguagePack::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open language pack {}", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

LanguagePack LanguagePack::load(const std::filesystem::path& dir, const std::string& lang) {
  const auto path = dir / (lang + ".json");
  if (!std::filesystem::exists(path)) {
    throw ConfigError(fmt::format("no language pack for '{}' in {}", lang, dir.string()));
  }
  return load_file(path);
}

void LanguagePack::rebuild_derived() {
  loan_keys_.clear();
  name_keys_.clear();
  loan_english_index_.clear();
  loan_spelling_keys_.clear();
  for (std::size_t i = 0; i < loan_words_.size(); ++i) {
    std::set<std::string> keys;
    for (const auto& s : loan_words_[i].spellings) {
      auto key = fold_all_rules(normalize_text(s), *this);
      loan_keys_.insert(key);
      keys.insert(std::move(key));
    }
    loan_spelling_keys_.push_back(std::move(keys));
    for (const auto& e : loan_words_[i].english) loan_english_index_.emplace(squash(e), static_cast<int>(i));
  }
  for (const auto& name : proper_nouns_) name_keys_.insert(fold_all_rules(name, *this));
}

bool LanguagePack::is_colloquial(const std::string& a, const std::string& b) const {
  return colloquial_pairs_.count({a, b}) > 0;
}

bool LanguagePack::is_similar_sound(const std::string& a, const std::string& b) const {
  return similar_sound_graphemes_.count({a, b}) > 0;
}

bool LanguagePack::is_minor_suffix(const std::string& a, const std::string& b) const {
  return minor_suffix_pairs_.count({a, b}) > 0;
}

int LanguagePack::loan_by_english(const std::string& english) const {
  auto it = loan_english_index_.find(squash(english));
  return it == loan_english_index_.end() ? -1 : it->second;
}

bool LanguagePack::loan_has_key(int loan_index, const std::string& key) const {
  if (loan_index < 0 || static_cast<std::size_t>(loan_index) >= loan_spelling_keys_.size()) return false;
  return loan_spelling_keys_[static_cast<std::size_t>(loan_index)].count(key) > 0;
}

LanguagePack LanguagePack::with_proper_nouns(const std::vector<std::string>& names) const {
  LanguagePack copy = *this;
  for (const auto& n : names) copy.proper_nouns_.insert(normalize_text(n));
  copy.rebuild_derived();
  return copy;
}

}  // namespace laser
