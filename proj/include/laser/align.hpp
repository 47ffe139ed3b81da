// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "laser/language_pack.hpp"
#include "laser/textnorm.hpp"

namespace laser {

enum class EditKind {
  kMatch,
  kSubstitute,
  kDelete,  // reference word missing from the hypothesis
  kInsert,  // hypothesis word absent from the reference
  kJoin,    // k >= 2 hypothesis tokens against one reference token
  kSplit,   // one hypothesis token against k >= 2 reference tokens
};

std::string_view to_string(EditKind kind);
std::optional<EditKind> edit_kind_from_string(std::string_view name);

// Half-open token index range.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
  bool empty() const { return begin == end; }
  bool operator==(const Span&) const = default;
};

struct AlignedPair {
  Span ref;
  Span hyp;
  EditKind op = EditKind::kMatch;

  // Token count on the multi-token side of a Join/Split, otherwise 1.
  std::size_t k() const;
  bool operator==(const AlignedPair&) const = default;
};

struct EditCounts {
  std::size_t matches = 0;
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t joins = 0;
  std::size_t splits = 0;
  bool operator==(const EditCounts&) const = default;
};

struct Alignment {
  std::vector<AlignedPair> pairs;
  EditCounts counts;  // tallies of `pairs`
  // Tallies of the plain word alignment, before any Join/Split merging.
  // Error rates are always computed from these.
  EditCounts base_counts;
  // Unit-cost edit distance of the plain word alignment; merging compounds
  // afterwards leaves it untouched.
  std::size_t distance = 0;
  std::size_t ref_size = 0;
  std::size_t hyp_size = 0;
};

// Dissimilarity in [0, 1] of two substituted tokens. Only breaks ties among
// alignments of equal edit distance; never changes the distance itself.
using SubstitutionCost = std::function<double(const Token& ref, const Token& hyp)>;

// Normalized grapheme distance, the default SubstitutionCost.
double grapheme_dissimilarity(const Token& ref, const Token& hyp);

// Minimum edit-distance alignment over normalized token strings. Among
// optimal scripts the one with the lowest summed dissimilarity wins; any
// remaining tie is resolved left to right preferring Match, Substitute,
// Delete, Insert.
Alignment levenshtein_align(const TokenizedSentence& ref, const TokenizedSentence& hyp,
                            const SubstitutionCost& cost = grapheme_dissimilarity);

struct MergeOptions {
  // Longest multi-token side of a Join/Split; below 2 disables merging.
  // Spelled-out numbers may run up to 8 words.
  std::size_t max_k = 3;
};

// Rewrites runs of mismatched pairs into Join/Split pairs where one side's
// tokens, taken together, are equivalent to a single token on the other side
// (same fold key, same number, same abbreviation, or a known loan word).
Alignment merge_pass(const Alignment& alignment, const TokenizedSentence& ref, const TokenizedSentence& hyp,
                     const LanguagePack& pack, const MergeOptions& options = {});

// Pack-aware equivalence of a reference span and a hypothesis span.
bool spans_equivalent(std::span<const Token> ref, std::span<const Token> hyp, const LanguagePack& pack);

// SubstitutionCost that scores pack-equivalent tokens (including colloquial
// pairs) as 0 and falls back to grapheme dissimilarity.
SubstitutionCost pack_aware_cost(const LanguagePack& pack);

struct ErrorRate {
  double rate = 0.0;
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t reference_length = 0;
  // Empty reference with a non-empty hypothesis; rate then equals the
  // hypothesis length.
  bool degenerate_reference = false;

  std::size_t errors() const { return substitutions + insertions + deletions; }
};

ErrorRate wer(const TokenizedSentence& ref, const TokenizedSentence& hyp);
ErrorRate wer_from_alignment(const Alignment& alignment);

// Error rate over the grapheme clusters of the space-joined normalized
// sentences.
ErrorRate cer(const TokenizedSentence& ref, const TokenizedSentence& hyp);

// Exhaustive search over every edit script. Test oracle only; both inputs
// are limited to kBruteForceLimit tokens.
inline constexpr std::size_t kBruteForceLimit = 8;
std::size_t brute_force_distance(std::span<const std::string> ref, std::span<const std::string> hyp);

}  // namespace laser
