// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "laser/language_pack.hpp"

namespace laser {

struct Token {
  std::string surface;     // as written, punctuation included
  std::string normalized;  // never empty, never contains whitespace
  std::vector<std::string> graphemes;
  std::size_t index = 0;
};

struct TokenizedSentence {
  std::string id;
  std::string lang;
  std::vector<Token> tokens;
  std::string raw;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  std::string joined() const;  // normalized tokens joined by single spaces
};

// NFC composition, punctuation stripping (intra-word hyphens and apostrophes
// survive), whitespace collapsing and lowercasing of Latin-script letters.
std::string normalize_text(std::string_view raw);

// Extended grapheme clusters of a UTF-8 string.
std::vector<std::string> grapheme_clusters(std::string_view utf8);

// Code points of a UTF-8 string, one string per code point.
std::vector<std::string> code_points(std::string_view utf8);

TokenizedSentence tokenize(std::string_view raw, const LanguagePack& pack, std::string id = {});

// Same as tokenize but without a pack, for callers that only need tokens.
TokenizedSentence tokenize_plain(std::string_view raw, std::string id = {});

enum class FoldKind {
  kGeneral,   // only general rules applied
  kLoanWord,  // lenient rules applied, key belongs to a loan word
  kName,      // lenient rules applied, key belongs to a proper noun
};

struct FoldResult {
  std::string key;
  FoldKind kind = FoldKind::kGeneral;
};

// Canonical key under the pack's fold rules. Deterministic and idempotent:
// fold(fold(x)) == fold(x).
FoldResult fold_detail(std::string_view text, const LanguagePack& pack);
std::string fold(std::string_view text, const LanguagePack& pack);
std::string fold(const Token& token, const LanguagePack& pack);

// Every fold rule applied regardless of scope, to a fixed point.
std::string fold_all_rules(std::string_view text, const LanguagePack& pack);

struct ParsedNumber {
  std::int64_t value = 0;
  std::size_t consumed = 0;
};

// Greedy longest parse of digits or numeral words starting at tokens[0].
std::optional<ParsedNumber> parse_number(std::span<const Token> tokens, const LanguagePack& pack);
std::optional<ParsedNumber> parse_number(std::span<const std::string> words, const LanguagePack& pack);

// Letter string for acronyms ("A.T.M.", "ATM") or letter-name spellings
// ("aytiem"). Empty optional when the token is not an abbreviation.
std::optional<std::string> abbreviation_key(const Token& token, const LanguagePack& pack);
// Concatenated keys of a span; every token must yield a key.
std::optional<std::string> abbreviation_key(std::span<const Token> tokens, const LanguagePack& pack);

// Grapheme-level Levenshtein distance between two strings.
std::size_t grapheme_distance(std::string_view a, std::string_view b);

bool is_latin_word(std::string_view text);

}  // namespace laser
