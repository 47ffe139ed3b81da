// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "laser/align.hpp"
#include "laser/language_pack.hpp"
#include "laser/rubric.hpp"

namespace laser {

struct RuleTrace {
  std::vector<std::pair<std::string, bool>> steps;  // (rule, fired) in evaluation order
  std::string terminal;
};

struct RuleDecision {
  PenaltyClass cls;
  RuleTrace trace;
};

// First-match cascade over the rubric taxonomy:
//   identical, compound, numerical, abbreviation, colloquial, fold-equal,
//   transliteration, minor-variant, omission-addition, fallback-major.
// Forgiving rules come before penalizing ones; the last rule is total.
RuleDecision classify_pair(const PairView& pair, const LanguagePack& pack);

struct ClassifiedRulePair {
  AlignedPair pair;
  PenaltyClass cls;
  RuleTrace trace;
};

std::vector<ClassifiedRulePair> classify_sentence(const Alignment& alignment, const TokenizedSentence& ref,
                                                  const TokenizedSentence& hyp, const LanguagePack& pack);

class RuleClassifier final : public PairClassifier {
 public:
  std::string id() const override { return "rules"; }
  PenaltyClass classify(const PairView& pair, const LanguagePack& pack) const override {
    return classify_pair(pair, pack).cls;
  }
};

}  // namespace laser
