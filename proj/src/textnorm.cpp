// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#include "laser/textnorm.hpp"

#include <unicode/brkiter.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/uscript.h>

#include <algorithm>
#include <limits>
#include <memory>

namespace laser {
namespace {

icu::UnicodeString to_unicode(std::string_view s) {
  return icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
}

std::string to_utf8(const icu::UnicodeString& u) {
  std::string out;
  u.toUTF8String(out);
  return out;
}

std::vector<UChar32> to_code_points(const icu::UnicodeString& u) {
  std::vector<UChar32> cps;
  cps.reserve(static_cast<std::size_t>(u.length()));
  for (int32_t i = 0; i < u.length();) {
    UChar32 c = u.char32At(i);
    cps.push_back(c);
    i += U16_LENGTH(c);
  }
  return cps;
}

icu::UnicodeString nfc(const icu::UnicodeString& u) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) return u;
  icu::UnicodeString out = norm->normalize(u, status);
  return U_FAILURE(status) ? u : out;
}

bool is_latin(UChar32 c) {
  UErrorCode status = U_ZERO_ERROR;
  return uscript_getScript(c, &status) == USCRIPT_LATIN;
}

UChar32 fold_case(UChar32 c) { return is_latin(c) ? u_tolower(c) : c; }

bool is_word_char(UChar32 c) {
  if (u_isalnum(c)) return true;
  const auto cat = u_charType(c);
  return cat == U_NON_SPACING_MARK || cat == U_COMBINING_SPACING_MARK || cat == U_ENCLOSING_MARK;
}

bool is_hyphen(UChar32 c) { return c == 0x2D || c == 0x2010 || c == 0x2011; }
bool is_apostrophe(UChar32 c) { return c == 0x27 || c == 0x2019; }
bool is_joiner(UChar32 c) { return c == 0x200C || c == 0x200D; }

// Normalizes one whitespace-free chunk.
std::string normalize_chunk(const icu::UnicodeString& chunk) {
  const auto cps = to_code_points(nfc(chunk));
  icu::UnicodeString out;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const UChar32 c = cps[i];
    if (is_hyphen(c) || is_apostrophe(c)) {
      const bool inner = !out.isEmpty() && i + 1 < cps.size() && is_word_char(cps[i + 1]);
      if (inner) out.append(static_cast<UChar32>(is_hyphen(c) ? 0x2D : 0x27));
      continue;
    }
    if (u_ispunct(c) || u_iscntrl(c)) continue;
    if (u_charType(c) == U_FORMAT_CHAR && !is_joiner(c)) continue;
    out.append(fold_case(c));
  }
  return to_utf8(out);
}

struct Chunk {
  std::string surface;
  std::string normalized;
};

std::vector<Chunk> split_chunks(std::string_view raw) {
  std::vector<Chunk> chunks;
  const auto cps = to_code_points(to_unicode(raw));
  icu::UnicodeString current;
  auto flush = [&] {
    if (current.isEmpty()) return;
    std::string norm = normalize_chunk(current);
    if (!norm.empty()) chunks.push_back({to_utf8(current), std::move(norm)});
    current.remove();
  };
  for (UChar32 c : cps) {
    if (u_isUWhiteSpace(c)) {
      flush();
    } else {
      current.append(c);
    }
  }
  flush();
  return chunks;
}

bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }
bool ends_with(std::string_view s, std::string_view p) {
  return s.size() >= p.size() && s.substr(s.size() - p.size()) == p;
}

bool apply_rule(std::string& s, const FoldRule& rule) {
  if (rule.from.empty()) return false;
  switch (rule.position) {
    case FoldPosition::kInitial:
      if (starts_with(s, rule.from)) {
        s.replace(0, rule.from.size(), rule.to);
        return true;
      }
      return false;
    case FoldPosition::kFinal:
      if (ends_with(s, rule.from)) {
        s.replace(s.size() - rule.from.size(), rule.from.size(), rule.to);
        return true;
      }
      return false;
    case FoldPosition::kAnywhere:
      break;
  }
  bool changed = false;
  std::string out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t hit = s.find(rule.from, pos);
    if (hit == std::string::npos) break;
    out.append(s, pos, hit - pos);
    out.append(rule.to);
    pos = hit + rule.from.size();
    changed = true;
  }
  if (!changed) return false;
  out.append(s, pos, std::string::npos);
  s = std::move(out);
  return true;
}

std::string case_fold(std::string_view s) {
  const auto cps = to_code_points(nfc(to_unicode(s)));
  icu::UnicodeString out;
  for (UChar32 c : cps) out.append(fold_case(c));
  return to_utf8(out);
}

// Rewrites to a fixed point. Rules are validated at pack load to strictly
// decrease (length, bytes), so the loop terminates; the cap guards NFC.
std::string fold_fixpoint(std::string_view text, const LanguagePack& pack, bool lenient) {
  std::string s(text);
  for (int pass = 0; pass < 64; ++pass) {
    std::string next = case_fold(s);
    for (const auto& rule : pack.fold_rules()) {
      if (rule.scope == FoldScope::kLenient && !lenient) continue;
      apply_rule(next, rule);
    }
    if (next == s) break;
    s = std::move(next);
  }
  return s;
}

std::optional<std::int64_t> digit_value(std::string_view word) {
  const auto cps = to_code_points(to_unicode(word));
  if (cps.empty() || cps.size() > 18) return std::nullopt;
  std::int64_t value = 0;
  for (UChar32 c : cps) {
    const int32_t d = u_charDigitValue(c);
    if (d < 0 || d > 9) return std::nullopt;
    value = value * 10 + d;
  }
  return value;
}

bool is_multiplier(std::int64_t v) {
  return v == 100 || v == 1000 || v == 100000 || v == 1000000 || v == 10000000 || v == 1000000000;
}

struct Atom {
  std::int64_t value;
  std::size_t length;
  bool literal;
};

std::optional<Atom> atom_at(std::span<const std::string> words, std::size_t pos, const LanguagePack& pack) {
  if (auto v = digit_value(words[pos])) return Atom{*v, 1, true};
  const std::size_t max_len = std::min(pack.max_numeral_words(), words.size() - pos);
  for (std::size_t len = max_len; len >= 1; --len) {
    std::string key = words[pos];
    for (std::size_t i = 1; i < len; ++i) key += " " + words[pos + i];
    auto it = pack.numeral_lexicon().find(key);
    if (it != pack.numeral_lexicon().end()) return Atom{it->second, len, false};
  }
  return std::nullopt;
}

std::optional<std::string> decompose_letter_names(const std::string& word, const LanguagePack& pack) {
  const auto& names = pack.letter_names();
  if (word.empty() || names.empty()) return std::nullopt;
  // best[i]: letters spelling word[0, i); names are tried longest-first so the
  // first decomposition found at each position is deterministic.
  std::vector<std::optional<std::string>> best(word.size() + 1);
  best[0] = std::string{};
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (!best[i]) continue;
    for (const auto& [name, letter] : names) {
      if (word.compare(i, name.size(), name) != 0) continue;
      const std::size_t j = i + name.size();
      std::string candidate = *best[i] + letter;
      if (!best[j] || candidate.size() < best[j]->size()) best[j] = std::move(candidate);
    }
  }
  return best[word.size()];
}

}  // namespace

std::string TokenizedSentence::joined() const {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t.normalized;
  }
  return out;
}

std::string normalize_text(std::string_view raw) {
  std::string out;
  for (const auto& chunk : split_chunks(raw)) {
    if (!out.empty()) out += ' ';
    out += chunk.normalized;
  }
  return out;
}

std::vector<std::string> grapheme_clusters(std::string_view utf8) {
  std::vector<std::string> out;
  if (utf8.empty()) return out;
  thread_local std::unique_ptr<icu::BreakIterator> iter = [] {
    UErrorCode status = U_ZERO_ERROR;
    std::unique_ptr<icu::BreakIterator> it(icu::BreakIterator::createCharacterInstance(icu::Locale::getRoot(), status));
    return U_FAILURE(status) ? nullptr : std::move(it);
  }();
  const icu::UnicodeString u = to_unicode(utf8);
  if (!iter) {
    for (auto c : to_code_points(u)) out.push_back(to_utf8(icu::UnicodeString(c)));
    return out;
  }
  iter->setText(u);
  int32_t start = iter->first();
  for (int32_t end = iter->next(); end != icu::BreakIterator::DONE; start = end, end = iter->next()) {
    out.push_back(to_utf8(icu::UnicodeString(u, start, end - start)));
  }
  return out;
}

std::vector<std::string> code_points(std::string_view utf8) {
  std::vector<std::string> out;
  for (auto c : to_code_points(to_unicode(utf8))) out.push_back(to_utf8(icu::UnicodeString(c)));
  return out;
}

TokenizedSentence tokenize_plain(std::string_view raw, std::string id) {
  TokenizedSentence sentence;
  sentence.id = std::move(id);
  sentence.raw = std::string(raw);
  for (auto& chunk : split_chunks(raw)) {
    Token t;
    t.surface = std::move(chunk.surface);
    t.graphemes = grapheme_clusters(chunk.normalized);
    t.normalized = std::move(chunk.normalized);
    t.index = sentence.tokens.size();
    sentence.tokens.push_back(std::move(t));
  }
  return sentence;
}

TokenizedSentence tokenize(std::string_view raw, const LanguagePack& pack, std::string id) {
  TokenizedSentence sentence = tokenize_plain(raw, std::move(id));
  sentence.lang = pack.lang();
  return sentence;
}

std::string fold_all_rules(std::string_view text, const LanguagePack& pack) {
  return fold_fixpoint(text, pack, true);
}

FoldResult fold_detail(std::string_view text, const LanguagePack& pack) {
  std::string general = fold_fixpoint(text, pack, false);
  std::string full = fold_fixpoint(general, pack, true);
  if (pack.is_name_key(full)) return {std::move(full), FoldKind::kName};
  if (pack.is_loan_key(full)) return {std::move(full), FoldKind::kLoanWord};
  return {std::move(general), FoldKind::kGeneral};
}

std::string fold(std::string_view text, const LanguagePack& pack) { return fold_detail(text, pack).key; }

std::string fold(const Token& token, const LanguagePack& pack) { return fold(token.normalized, pack); }

std::optional<ParsedNumber> parse_number(std::span<const std::string> words, const LanguagePack& pack) {
  std::optional<ParsedNumber> best;
  std::int64_t total = 0;
  std::int64_t current = 0;
  std::int64_t since_multiplier = 0;  // plain value added after the last multiplier
  std::int64_t ceiling = std::numeric_limits<std::int64_t>::max();
  std::int64_t last_big = std::numeric_limits<std::int64_t>::max();
  bool previous_plain = false;
  bool seen_literal = false;
  std::size_t pos = 0;
  while (pos < words.size()) {
    auto atom = atom_at(words, pos, pack);
    if (!atom) break;
    const std::int64_t v = atom->value;
    if (atom->literal && pos > 0) break;
    if (!atom->literal && !seen_literal && is_multiplier(v)) {
      if (v == 100) {
        if (current >= 100) break;
        current = (current == 0 ? 1 : current) * 100;
        ceiling = 100;
      } else {
        if (v >= last_big || current >= v) break;
        total += (current == 0 ? 1 : current) * v;
        current = 0;
        last_big = v;
        ceiling = v;
      }
      since_multiplier = 0;
      previous_plain = false;
    } else {
      if (seen_literal) break;
      if (v >= ceiling) break;
      if (previous_plain) {
        const bool tens_then_unit = since_multiplier >= 20 && since_multiplier <= 90 &&
                                    since_multiplier % 10 == 0 && v >= 1 && v <= 9;
        if (!tens_then_unit) break;
      }
      current += v;
      since_multiplier += v;
      previous_plain = true;
      seen_literal = atom->literal;
    }
    pos += atom->length;
    best = ParsedNumber{total + current, pos};
  }
  return best;
}

std::optional<ParsedNumber> parse_number(std::span<const Token> tokens, const LanguagePack& pack) {
  std::vector<std::string> words;
  words.reserve(tokens.size());
  for (const auto& t : tokens) words.push_back(t.normalized);
  return parse_number(std::span<const std::string>(words), pack);
}

std::optional<std::string> abbreviation_key(const Token& token, const LanguagePack& pack) {
  const auto cps = to_code_points(to_unicode(token.surface));
  std::string letters;
  bool all_upper = true;
  bool dotted = false;
  bool latin_letters_only = true;
  std::size_t run = 0;  // letters since the last dot
  bool single_letter_segments = true;
  for (UChar32 c : cps) {
    if (c == '.') {
      dotted = true;
      if (run > 1) single_letter_segments = false;
      run = 0;
      continue;
    }
    if (is_hyphen(c)) continue;
    if (!(u_isalpha(c) && is_latin(c))) {
      latin_letters_only = false;
      break;
    }
    if (!u_isupper(c)) all_upper = false;
    letters += to_utf8(icu::UnicodeString(static_cast<UChar32>(u_tolower(c))));
    ++run;
  }
  if (run > 1) single_letter_segments = false;
  if (latin_letters_only && !letters.empty()) {
    if (dotted && single_letter_segments) return letters;
    if (all_upper && letters.size() >= 2) return letters;
    if (letters.size() == 1) return letters;
  }
  std::string word = token.normalized;
  word.erase(std::remove(word.begin(), word.end(), '-'), word.end());
  return decompose_letter_names(word, pack);
}

std::optional<std::string> abbreviation_key(std::span<const Token> tokens, const LanguagePack& pack) {
  if (tokens.empty()) return std::nullopt;
  std::string key;
  for (const auto& t : tokens) {
    auto part = abbreviation_key(t, pack);
    if (!part) return std::nullopt;
    key += *part;
  }
  return key;
}

std::size_t grapheme_distance(std::string_view a, std::string_view b) {
  const auto ga = grapheme_clusters(a);
  const auto gb = grapheme_clusters(b);
  std::vector<std::size_t> prev(gb.size() + 1), cur(gb.size() + 1);
  for (std::size_t j = 0; j <= gb.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= ga.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= gb.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (ga[i - 1] == gb[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[gb.size()];
}

bool is_latin_word(std::string_view text) {
  bool any_letter = false;
  for (UChar32 c : to_code_points(to_unicode(text))) {
    if (!u_isalpha(c)) continue;
    if (!is_latin(c)) return false;
    any_letter = true;
  }
  return any_letter;
}

}  // namespace laser
