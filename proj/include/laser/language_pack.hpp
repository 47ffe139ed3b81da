// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace laser {

enum class FoldScope {
  kGeneral,  // applies to every token
  kLenient,  // applies only when the fully folded key is a known loan word or name
};

enum class FoldPosition { kAnywhere, kInitial, kFinal };

struct FoldRule {
  std::string from;
  std::string to;
  FoldScope scope = FoldScope::kGeneral;
  FoldPosition position = FoldPosition::kAnywhere;
};

// A loan word with its English source spellings and its known native
// spellings (any script). Native spellings are stored as written; the pack
// derives their fold keys at load time.
struct LoanWord {
  std::vector<std::string> english;
  std::vector<std::string> spellings;
};

using StringPair = std::pair<std::string, std::string>;

// Per-language resources consumed by folding, number parsing, abbreviation
// matching and the rule classifier. Immutable once constructed.
class LanguagePack {
 public:
  LanguagePack() = default;

  // Parses a pack document. Throws ConfigError on schema violations or on
  // fold rules that could rewrite forever.
  static LanguagePack from_json_text(const std::string& text);
  static LanguagePack load_file(const std::filesystem::path& path);
  // Resolves `<dir>/<lang>.json`.
  static LanguagePack load(const std::filesystem::path& dir, const std::string& lang);

  const std::string& lang() const { return lang_; }
  const std::string& version() const { return version_; }

  // Keys are space-joined normalized word sequences.
  const std::map<std::string, std::int64_t>& numeral_lexicon() const { return numeral_lexicon_; }
  std::size_t max_numeral_words() const { return max_numeral_words_; }
  const std::map<std::string, std::string>& letter_names() const { return letter_names_; }
  const std::vector<FoldRule>& fold_rules() const { return fold_rules_; }
  const std::set<StringPair>& minor_suffix_pairs() const { return minor_suffix_pairs_; }
  const std::set<StringPair>& colloquial_pairs() const { return colloquial_pairs_; }
  const std::set<StringPair>& similar_sound_graphemes() const { return similar_sound_graphemes_; }
  const std::vector<LoanWord>& loan_words() const { return loan_words_; }
  std::size_t min_stem_graphemes() const { return min_stem_graphemes_; }

  bool is_colloquial(const std::string& a, const std::string& b) const;
  bool is_similar_sound(const std::string& a, const std::string& b) const;
  bool is_minor_suffix(const std::string& a, const std::string& b) const;

  // Fold keys of loan-word spellings and proper nouns; tokens whose fully
  // folded key lands here receive the lenient fold.
  bool is_loan_key(const std::string& key) const { return loan_keys_.count(key) > 0; }
  bool is_name_key(const std::string& key) const { return name_keys_.count(key) > 0; }
  const std::set<std::string>& proper_nouns() const { return proper_nouns_; }

  // Index of the loan word whose English spelling equals `english`
  // (normalized, spaces and hyphens removed), or -1.
  int loan_by_english(const std::string& english) const;
  // True when `key` is the full fold key of one of the loan word's spellings.
  bool loan_has_key(int loan_index, const std::string& key) const;

  // Returns a copy with extra proper nouns, e.g. a per-corpus name lexicon.
  LanguagePack with_proper_nouns(const std::vector<std::string>& names) const;

 private:
  void rebuild_derived();

  std::string lang_;
  std::string version_ = "0";
  std::map<std::string, std::int64_t> numeral_lexicon_;
  std::size_t max_numeral_words_ = 0;
  std::map<std::string, std::string> letter_names_;
  std::vector<FoldRule> fold_rules_;
  std::set<StringPair> minor_suffix_pairs_;
  std::set<StringPair> colloquial_pairs_;
  std::set<StringPair> similar_sound_graphemes_;
  std::vector<LoanWord> loan_words_;
  std::set<std::string> proper_nouns_;
  std::size_t min_stem_graphemes_ = 2;

  std::set<std::string> loan_keys_;
  std::set<std::string> name_keys_;
  std::map<std::string, int> loan_english_index_;
  std::vector<std::set<std::string>> loan_spelling_keys_;
};

}  // namespace laser
