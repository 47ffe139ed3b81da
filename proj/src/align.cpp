// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#include "laser/align.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "laser/error.hpp"

namespace laser {
namespace {

constexpr double kTieEpsilon = 1e-9;

struct Cost {
  std::size_t edits = 0;
  double dissimilarity = 0.0;

  Cost operator+(const Cost& o) const { return {edits + o.edits, dissimilarity + o.dissimilarity}; }
};

bool cost_less(const Cost& a, const Cost& b) {
  if (a.edits != b.edits) return a.edits < b.edits;
  return a.dissimilarity < b.dissimilarity - kTieEpsilon;
}

bool cost_equal(const Cost& a, const Cost& b) {
  return a.edits == b.edits && std::fabs(a.dissimilarity - b.dissimilarity) <= kTieEpsilon;
}

constexpr Cost kInfinite{std::numeric_limits<std::size_t>::max() / 4, 0.0};

struct Step {
  EditKind op;
  std::size_t ref_len;
  std::size_t hyp_len;
};

// Grid of suffix costs: cell (i, j) holds the cheapest way to align
// ref[i..n) with hyp[j..m).
class SuffixTable {
 public:
  SuffixTable(std::size_t n, std::size_t m) : n_(n), m_(m), cells_((n + 1) * (m + 1), kInfinite) {}
  Cost& at(std::size_t i, std::size_t j) { return cells_[i * (m_ + 1) + j]; }

 private:
  std::size_t n_;
  std::size_t m_;
  std::vector<Cost> cells_;
};

// Candidate moves out of a cell, in tie-break preference order.
template <typename MovesFn>
std::vector<Step> best_path(std::size_t n, std::size_t m, MovesFn&& moves) {
  SuffixTable table(n, m);
  table.at(n, m) = Cost{};
  for (std::size_t ii = n + 1; ii-- > 0;) {
    for (std::size_t jj = m + 1; jj-- > 0;) {
      if (ii == n && jj == m) continue;
      Cost best = kInfinite;
      moves(ii, jj, [&](const Step& s, const Cost& c) {
        const Cost total = c + table.at(ii + s.ref_len, jj + s.hyp_len);
        if (cost_less(total, best)) best = total;
      });
      table.at(ii, jj) = best;
    }
  }
  std::vector<Step> path;
  std::size_t i = 0, j = 0;
  while (i < n || j < m) {
    const Cost target = table.at(i, j);
    bool taken = false;
    moves(i, j, [&](const Step& s, const Cost& c) {
      if (taken) return;
      if (cost_equal(c + table.at(i + s.ref_len, j + s.hyp_len), target)) {
        path.push_back(s);
        taken = true;
      }
    });
    const Step& s = path.back();
    i += s.ref_len;
    j += s.hyp_len;
  }
  return path;
}

void tally(EditCounts& counts, EditKind op) {
  switch (op) {
    case EditKind::kMatch: ++counts.matches; break;
    case EditKind::kSubstitute: ++counts.substitutions; break;
    case EditKind::kDelete: ++counts.deletions; break;
    case EditKind::kInsert: ++counts.insertions; break;
    case EditKind::kJoin: ++counts.joins; break;
    case EditKind::kSplit: ++counts.splits; break;
  }
}

EditCounts tally_all(const std::vector<AlignedPair>& pairs) {
  EditCounts counts;
  for (const auto& p : pairs) tally(counts, p.op);
  return counts;
}

std::vector<AlignedPair> to_pairs(const std::vector<Step>& path, std::size_t ref_offset, std::size_t hyp_offset) {
  std::vector<AlignedPair> pairs;
  std::size_t i = ref_offset, j = hyp_offset;
  for (const auto& s : path) {
    pairs.push_back({{i, i + s.ref_len}, {j, j + s.hyp_len}, s.op});
    i += s.ref_len;
    j += s.hyp_len;
  }
  return pairs;
}

ErrorRate rate_from(std::size_t s, std::size_t i, std::size_t d, std::size_t n, std::size_t hyp_len) {
  ErrorRate r;
  r.substitutions = s;
  r.insertions = i;
  r.deletions = d;
  r.reference_length = n;
  if (n == 0) {
    r.degenerate_reference = hyp_len > 0;
    r.rate = static_cast<double>(hyp_len);
  } else {
    r.rate = static_cast<double>(s + i + d) / static_cast<double>(n);
  }
  return r;
}

std::string joined(std::span<const Token> tokens) {
  std::string out;
  for (const auto& t : tokens) out += t.normalized;
  return out;
}

std::string joined_folds(std::span<const Token> tokens, const LanguagePack& pack) {
  std::string out;
  for (const auto& t : tokens) out += fold(t, pack);
  return out;
}

bool loan_equivalent(std::span<const Token> english, std::span<const Token> other, const LanguagePack& pack) {
  std::string text;
  for (const auto& t : english) {
    if (!text.empty()) text += ' ';
    text += t.normalized;
  }
  if (!is_latin_word(text)) return false;
  const int loan = pack.loan_by_english(text);
  return loan >= 0 && pack.loan_has_key(loan, fold_all_rules(joined(other), pack));
}

}  // namespace

std::string_view to_string(EditKind kind) {
  switch (kind) {
    case EditKind::kMatch: return "match";
    case EditKind::kSubstitute: return "substitute";
    case EditKind::kDelete: return "delete";
    case EditKind::kInsert: return "insert";
    case EditKind::kJoin: return "join";
    case EditKind::kSplit: return "split";
  }
  return "match";
}

std::optional<EditKind> edit_kind_from_string(std::string_view name) {
  for (auto k : {EditKind::kMatch, EditKind::kSubstitute, EditKind::kDelete, EditKind::kInsert, EditKind::kJoin,
                 EditKind::kSplit}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::size_t AlignedPair::k() const {
  if (op == EditKind::kJoin) return hyp.size();
  if (op == EditKind::kSplit) return ref.size();
  return 1;
}

double grapheme_dissimilarity(const Token& ref, const Token& hyp) {
  const std::size_t longest = std::max(ref.graphemes.size(), hyp.graphemes.size());
  if (longest == 0) return 0.0;
  return static_cast<double>(grapheme_distance(ref.normalized, hyp.normalized)) / static_cast<double>(longest);
}

Alignment levenshtein_align(const TokenizedSentence& ref, const TokenizedSentence& hyp, const SubstitutionCost& cost) {
  const auto& r = ref.tokens;
  const auto& h = hyp.tokens;
  const std::size_t n = r.size(), m = h.size();
  std::vector<double> sub(n * m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (r[i].normalized != h[j].normalized) sub[i * m + j] = std::clamp(cost(r[i], h[j]), 0.0, 1.0);
    }
  }
  auto moves = [&](std::size_t i, std::size_t j, auto&& emit) {
    if (i < n && j < m) {
      if (r[i].normalized == h[j].normalized) {
        emit(Step{EditKind::kMatch, 1, 1}, Cost{0, 0.0});
      } else {
        emit(Step{EditKind::kSubstitute, 1, 1}, Cost{1, sub[i * m + j]});
      }
    }
    if (i < n) emit(Step{EditKind::kDelete, 1, 0}, Cost{1, 1.0});
    if (j < m) emit(Step{EditKind::kInsert, 0, 1}, Cost{1, 1.0});
  };
  Alignment a;
  a.ref_size = n;
  a.hyp_size = m;
  a.pairs = to_pairs(best_path(n, m, moves), 0, 0);
  a.counts = tally_all(a.pairs);
  a.base_counts = a.counts;
  a.distance = a.counts.substitutions + a.counts.deletions + a.counts.insertions;
  return a;
}

bool spans_equivalent(std::span<const Token> ref, std::span<const Token> hyp, const LanguagePack& pack) {
  if (ref.empty() || hyp.empty()) return false;
  if (joined_folds(ref, pack) == joined_folds(hyp, pack)) return true;
  if (fold(joined(ref), pack) == fold(joined(hyp), pack)) return true;
  const auto nr = parse_number(ref, pack);
  const auto nh = parse_number(hyp, pack);
  if (nr && nh && nr->consumed == ref.size() && nh->consumed == hyp.size() && nr->value == nh->value) return true;
  const auto ar = abbreviation_key(ref, pack);
  const auto ah = abbreviation_key(hyp, pack);
  if (ar && ah && ar->size() >= 2 && *ar == *ah) return true;
  if (loan_equivalent(ref, hyp, pack) || loan_equivalent(hyp, ref, pack)) return true;
  if (ref.size() == 1 && hyp.size() == 1) {
    if (pack.is_colloquial(ref[0].normalized, hyp[0].normalized)) return true;
    if (pack.is_colloquial(fold(ref[0], pack), fold(hyp[0], pack))) return true;
  }
  return false;
}

SubstitutionCost pack_aware_cost(const LanguagePack& pack) {
  return [&pack](const Token& r, const Token& h) {
    if (spans_equivalent(std::span<const Token>(&r, 1), std::span<const Token>(&h, 1), pack)) return 0.0;
    return grapheme_dissimilarity(r, h);
  };
}

Alignment merge_pass(const Alignment& alignment, const TokenizedSentence& ref, const TokenizedSentence& hyp,
                     const LanguagePack& pack, const MergeOptions& options) {
  if (options.max_k < 2) return alignment;
  const std::size_t max_k = options.max_k;
  // Spelled-out numbers may run longer than max_k ("ek hajar teen sau").
  constexpr std::size_t kMaxNumberWords = 8;
  const std::size_t max_span = std::max(max_k, kMaxNumberWords);
  auto allowed = [&](std::span<const Token> many, std::size_t k) {
    if (k <= max_k) return true;
    const auto num = parse_number(many, pack);
    return num && num->consumed == k;
  };
  const auto& r = ref.tokens;
  const auto& h = hyp.tokens;
  std::vector<AlignedPair> out;
  const auto& pairs = alignment.pairs;
  std::size_t p = 0;
  while (p < pairs.size()) {
    if (pairs[p].op == EditKind::kMatch) {
      out.push_back(pairs[p++]);
      continue;
    }
    std::size_t q = p;
    while (q < pairs.size() && pairs[q].op != EditKind::kMatch) ++q;
    const std::size_t r0 = pairs[p].ref.begin, r1 = pairs[q - 1].ref.end;
    const std::size_t h0 = pairs[p].hyp.begin, h1 = pairs[q - 1].hyp.end;
    const std::size_t n = r1 - r0, m = h1 - h0;
    const std::span<const Token> rs(r.data() + r0, n);
    const std::span<const Token> hs(h.data() + h0, m);

    auto moves = [&](std::size_t i, std::size_t j, auto&& emit) {
      if (i < n && j < m && rs[i].normalized == hs[j].normalized) emit(Step{EditKind::kMatch, 1, 1}, Cost{0, 0.0});
      for (std::size_t k = 2; k <= max_span; ++k) {
        if (i < n && j + k <= m && allowed(hs.subspan(j, k), k) &&
            spans_equivalent(rs.subspan(i, 1), hs.subspan(j, k), pack)) {
          emit(Step{EditKind::kJoin, 1, k}, Cost{0, 0.0});
        }
      }
      for (std::size_t k = 2; k <= max_span; ++k) {
        if (j < m && i + k <= n && allowed(rs.subspan(i, k), k) &&
            spans_equivalent(rs.subspan(i, k), hs.subspan(j, 1), pack)) {
          emit(Step{EditKind::kSplit, k, 1}, Cost{0, 0.0});
        }
      }
      if (i < n && j < m && rs[i].normalized != hs[j].normalized) {
        emit(Step{EditKind::kSubstitute, 1, 1}, Cost{1, pack_aware_cost(pack)(rs[i], hs[j])});
      }
      if (i < n) emit(Step{EditKind::kDelete, 1, 0}, Cost{1, 1.0});
      if (j < m) emit(Step{EditKind::kInsert, 0, 1}, Cost{1, 1.0});
    };
    auto merged = to_pairs(best_path(n, m, moves), r0, h0);
    const bool has_compound = std::any_of(merged.begin(), merged.end(), [](const AlignedPair& a) {
      return a.op == EditKind::kJoin || a.op == EditKind::kSplit;
    });
    if (has_compound && merged.size() <= q - p) {
      out.insert(out.end(), merged.begin(), merged.end());
    } else {
      out.insert(out.end(), pairs.begin() + static_cast<std::ptrdiff_t>(p), pairs.begin() + static_cast<std::ptrdiff_t>(q));
    }
    p = q;
  }
  Alignment result = alignment;
  result.pairs = std::move(out);
  result.counts = tally_all(result.pairs);
  return result;
}

ErrorRate wer_from_alignment(const Alignment& a) {
  return rate_from(a.base_counts.substitutions, a.base_counts.insertions, a.base_counts.deletions, a.ref_size,
                   a.hyp_size);
}

ErrorRate wer(const TokenizedSentence& ref, const TokenizedSentence& hyp) {
  return wer_from_alignment(levenshtein_align(ref, hyp));
}

ErrorRate cer(const TokenizedSentence& ref, const TokenizedSentence& hyp) {
  const auto r = grapheme_clusters(ref.joined());
  const auto h = grapheme_clusters(hyp.joined());
  const std::size_t n = r.size(), m = h.size();
  auto moves = [&](std::size_t i, std::size_t j, auto&& emit) {
    if (i < n && j < m) {
      if (r[i] == h[j]) {
        emit(Step{EditKind::kMatch, 1, 1}, Cost{0, 0.0});
      } else {
        emit(Step{EditKind::kSubstitute, 1, 1}, Cost{1, 1.0});
      }
    }
    if (i < n) emit(Step{EditKind::kDelete, 1, 0}, Cost{1, 1.0});
    if (j < m) emit(Step{EditKind::kInsert, 0, 1}, Cost{1, 1.0});
  };
  EditCounts c;
  for (const auto& s : best_path(n, m, moves)) tally(c, s.op);
  return rate_from(c.substitutions, c.insertions, c.deletions, n, m);
}

namespace {

std::size_t exhaustive(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.empty()) return b.size();
  if (b.empty()) return a.size();
  std::size_t best = 1 + exhaustive(a.subspan(1), b);
  best = std::min(best, 1 + exhaustive(a, b.subspan(1)));
  best = std::min(best, (a[0] == b[0] ? 0 : 1) + exhaustive(a.subspan(1), b.subspan(1)));
  return best;
}

}  // namespace

std::size_t brute_force_distance(std::span<const std::string> ref, std::span<const std::string> hyp) {
  if (ref.size() > kBruteForceLimit || hyp.size() > kBruteForceLimit) {
    throw std::invalid_argument(
        fmt::format("brute_force_distance: inputs limited to {} tokens (got {} and {})", kBruteForceLimit,
                    ref.size(), hyp.size()));
  }
  return exhaustive(ref, hyp);
}

}  // namespace laser
