// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#include "laser/classify_rules.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <functional>
#include <optional>

namespace laser {
namespace {

// Longest variant segment that still counts as a "single sound" change.
constexpr std::size_t kMaxVariantCodePoints = 3;

std::string joined(std::span<const Token> tokens, std::string_view sep = "") {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i].normalized;
  }
  return out;
}

std::string joined_folds(std::span<const Token> tokens, const LanguagePack& pack) {
  std::string out;
  for (const auto& t : tokens) out += fold(t, pack);
  return out;
}

std::string concat(const std::vector<std::string>& parts, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) out += parts[i];
  return out;
}

std::string without_hyphens(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), '-'), s.end());
  return s;
}

bool single_tokens(const PairView& p) { return p.ref.size() == 1 && p.hyp.size() == 1; }

PenaltyClass make(PenaltyLevel level, Category category, std::string rationale) {
  return PenaltyClass{level, category, std::move(rationale)};
}

// Differing middle segment once the shared prefix and suffix (in code
// points) are removed.
std::pair<std::string, std::string> variant_segment(const std::vector<std::string>& a,
                                                    const std::vector<std::string>& b) {
  std::size_t prefix = 0;
  while (prefix < a.size() && prefix < b.size() && a[prefix] == b[prefix]) ++prefix;
  std::size_t suffix = 0;
  while (suffix < a.size() - prefix && suffix < b.size() - prefix &&
         a[a.size() - 1 - suffix] == b[b.size() - 1 - suffix]) {
    ++suffix;
  }
  return {concat(a, prefix, a.size() - suffix), concat(b, prefix, b.size() - suffix)};
}

std::optional<PenaltyClass> minor_variant(const Token& r, const Token& h, const LanguagePack& pack) {
  const auto a = code_points(r.normalized);
  const auto b = code_points(h.normalized);
  const auto [ma, mb] = variant_segment(a, b);
  const std::size_t la = code_points(ma).size(), lb = code_points(mb).size();
  if (la <= kMaxVariantCodePoints && lb <= kMaxVariantCodePoints && pack.is_similar_sound(ma, mb)) {
    return make(PenaltyLevel::kMinor, Category::kSmallSpelling,
                fmt::format("similar-sounding spelling variant '{}' vs '{}'", ma, mb));
  }
  std::size_t common = 0;
  while (common < a.size() && common < b.size() && a[common] == b[common]) ++common;
  for (std::size_t stem = common + 1; stem-- > pack.min_stem_graphemes();) {
    const std::string sa = concat(a, stem, a.size());
    const std::string sb = concat(b, stem, b.size());
    if (pack.is_minor_suffix(sa, sb)) {
      return make(PenaltyLevel::kMinor, Category::kSmallGrammar,
                  fmt::format("inflection variant of '{}': '{}' vs '{}'", concat(a, 0, stem), sa, sb));
    }
  }
  return std::nullopt;
}

bool loan_equivalent(std::span<const Token> english, std::span<const Token> other, const LanguagePack& pack) {
  if (english.empty() || other.empty()) return false;
  const std::string text = joined(english, " ");
  if (!is_latin_word(text)) return false;
  const int loan = pack.loan_by_english(text);
  return loan >= 0 && pack.loan_has_key(loan, fold_all_rules(joined(other), pack));
}

using Rule = std::function<std::optional<PenaltyClass>(const PairView&, const LanguagePack&)>;

struct NamedRule {
  const char* name;
  Rule rule;
};

const std::vector<NamedRule>& cascade() {
  static const std::vector<NamedRule> rules = {
      {"identical",
       [](const PairView& p, const LanguagePack&) -> std::optional<PenaltyClass> {
         if (p.op == EditKind::kMatch ||
             (!p.ref.empty() && !p.hyp.empty() && joined(p.ref, " ") == joined(p.hyp, " "))) {
           return make(PenaltyLevel::kIdentical, Category::kExactMatch, "identical");
         }
         return std::nullopt;
       }},
      {"compound",
       [](const PairView& p, const LanguagePack& pack) -> std::optional<PenaltyClass> {
         if (p.op != EditKind::kJoin && p.op != EditKind::kSplit) return std::nullopt;
         if (joined_folds(p.ref, pack) == joined_folds(p.hyp, pack) ||
             fold(joined(p.ref), pack) == fold(joined(p.hyp), pack)) {
           return make(PenaltyLevel::kNonPenalizable, Category::kCompound,
                       fmt::format("compound written as {} vs {} word(s)", p.ref.size(), p.hyp.size()));
         }
         return std::nullopt;
       }},
      {"numerical",
       [](const PairView& p, const LanguagePack& pack) -> std::optional<PenaltyClass> {
         if (p.ref.empty() || p.hyp.empty()) return std::nullopt;
         const auto a = parse_number(p.ref, pack);
         const auto b = parse_number(p.hyp, pack);
         if (a && b && a->consumed == p.ref.size() && b->consumed == p.hyp.size() && a->value == b->value) {
           return make(PenaltyLevel::kNonPenalizable, Category::kNumerical,
                       fmt::format("both sides denote {}", a->value));
         }
         return std::nullopt;
       }},
      {"abbreviation",
       [](const PairView& p, const LanguagePack& pack) -> std::optional<PenaltyClass> {
         if (p.ref.empty() || p.hyp.empty()) return std::nullopt;
         const auto a = abbreviation_key(p.ref, pack);
         const auto b = abbreviation_key(p.hyp, pack);
         if (a && b && a->size() >= 2 && *a == *b) {
           return make(PenaltyLevel::kNonPenalizable, Category::kAbbreviation,
                       fmt::format("both sides spell '{}'", *a));
         }
         return std::nullopt;
       }},
      {"colloquial",
       [](const PairView& p, const LanguagePack& pack) -> std::optional<PenaltyClass> {
         if (!single_tokens(p)) return std::nullopt;
         if (pack.is_colloquial(p.ref[0].normalized, p.hyp[0].normalized) ||
             pack.is_colloquial(fold(p.ref[0], pack), fold(p.hyp[0], pack))) {
           return make(PenaltyLevel::kNonPenalizable, Category::kColloquial, "colloquial variant");
         }
         return std::nullopt;
       }},
      {"fold-equal",
       [](const PairView& p, const LanguagePack& pack) -> std::optional<PenaltyClass> {
         if (p.ref.empty() || p.hyp.empty()) return std::nullopt;
         const std::string rk = joined_folds(p.ref, pack);
         if (rk != joined_folds(p.hyp, pack)) return std::nullopt;
         if (without_hyphens(joined(p.ref)) == without_hyphens(joined(p.hyp))) {
           return make(PenaltyLevel::kNonPenalizable, Category::kCompound, "hyphenation variant");
         }
         const FoldKind kind = fold_detail(joined(p.ref), pack).kind;
         if (kind == FoldKind::kName) {
           return make(PenaltyLevel::kNonPenalizable, Category::kProperNoun, "name spelling variant");
         }
         if (kind == FoldKind::kLoanWord) {
           return make(PenaltyLevel::kNonPenalizable, Category::kTransliterationNative,
                       "variant spelling of a transliterated word");
         }
         return make(PenaltyLevel::kNonPenalizable, Category::kAlternateSpelling,
                     fmt::format("same fold key '{}'", rk));
       }},
      {"transliteration",
       [](const PairView& p, const LanguagePack& pack) -> std::optional<PenaltyClass> {
         if (loan_equivalent(p.ref, p.hyp, pack) || loan_equivalent(p.hyp, p.ref, pack)) {
           return make(PenaltyLevel::kNonPenalizable, Category::kTransliterationActual,
                       "transliteration of the English word");
         }
         return std::nullopt;
       }},
      {"minor-variant",
       [](const PairView& p, const LanguagePack& pack) -> std::optional<PenaltyClass> {
         if (p.op != EditKind::kSubstitute || !single_tokens(p)) return std::nullopt;
         return minor_variant(p.ref[0], p.hyp[0], pack);
       }},
      {"omission-addition",
       [](const PairView& p, const LanguagePack&) -> std::optional<PenaltyClass> {
         if (p.op == EditKind::kDelete) {
           return make(PenaltyLevel::kMajor, Category::kOmissionAddition, "reference word omitted");
         }
         if (p.op == EditKind::kInsert) {
           return make(PenaltyLevel::kMajor, Category::kOmissionAddition, "word added");
         }
         return std::nullopt;
       }},
      {"fallback-major",
       [](const PairView& p, const LanguagePack&) -> std::optional<PenaltyClass> {
         if (p.op == EditKind::kSubstitute && single_tokens(p) &&
             grapheme_distance(p.ref[0].normalized, p.hyp[0].normalized) <= 2) {
           return make(PenaltyLevel::kMajor, Category::kMeaningAlteringSpelling, "spelling change alters the word");
         }
         return make(PenaltyLevel::kMajor, Category::kSubstitution, "different word");
       }},
  };
  return rules;
}

}  // namespace

RuleDecision classify_pair(const PairView& pair, const LanguagePack& pack) {
  RuleDecision decision;
  for (const auto& [name, rule] : cascade()) {
    auto cls = rule(pair, pack);
    decision.trace.steps.emplace_back(name, cls.has_value());
    if (cls) {
      decision.cls = std::move(*cls);
      decision.trace.terminal = name;
      return decision;
    }
  }
  // fallback-major always fires; unreachable.
  decision.cls = make(PenaltyLevel::kMajor, Category::kSubstitution, "different word");
  decision.trace.terminal = "fallback-major";
  return decision;
}

std::vector<ClassifiedRulePair> classify_sentence(const Alignment& alignment, const TokenizedSentence& ref,
                                                  const TokenizedSentence& hyp, const LanguagePack& pack) {
  std::vector<ClassifiedRulePair> out;
  out.reserve(alignment.pairs.size());
  for (const auto& pair : alignment.pairs) {
    auto decision = classify_pair(view_of(pair, ref, hyp), pack);
    out.push_back({pair, std::move(decision.cls), std::move(decision.trace)});
  }
  return out;
}

}  // namespace laser
