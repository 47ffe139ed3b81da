// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "laser/error.hpp"
#include "laser/textnorm.hpp"
#include "test_support.hpp"

namespace laser {
namespace {

using testing::pack;

std::vector<std::string> words(std::initializer_list<const char*> list) { return {list.begin(), list.end()}; }

TEST(Normalize, StripsPunctuationAndLowercasesLatin) {
  EXPECT_EQ(normalize_text("  The arm, though! "), "the arm though");
  EXPECT_EQ(normalize_text("bumble-bee"), "bumble-bee");
  EXPECT_EQ(normalize_text("don't"), "don't");
  EXPECT_EQ(normalize_text("A.T.M."), "atm");
}

TEST(Normalize, AppliesNfc) {
  // Precomposed nukta letters are composition exclusions, so NFC splits them.
  EXPECT_EQ(normalize_text("\u0958"), "\u0915\u093C");
  EXPECT_EQ(normalize_text("e\u0301"), "\u00E9");
}

TEST(Normalize, KeepsDevanagariClusters) {
  EXPECT_EQ(grapheme_clusters("सुन्दर").size(), 3u);
  EXPECT_EQ(code_points("सुन्दर").size(), 6u);
}

TEST(Tokenize, CountsWordsAndKeepsSurface) {
  const auto s = tokenize(testing::kEnglishRef, pack("en"));
  ASSERT_EQ(s.size(), 12u);
  EXPECT_EQ(s.tokens.back().surface, "though.");
  EXPECT_EQ(s.tokens.back().normalized, "though");
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(s.tokens[i].index, i);
    EXPECT_FALSE(s.tokens[i].normalized.empty());
  }
}

TEST(Tokenize, DropsPunctuationOnlyTokens) {
  const auto s = tokenize("ek -- do , teen", pack("hi"));
  EXPECT_EQ(s.joined(), "ek do teen");
}

TEST(Fold, SpellingVariantsShareAKey) {
  EXPECT_EQ(fold("सुंदर", pack("hi")), fold("सुन्दर", pack("hi")));
  EXPECT_EQ(fold("skul", pack("hi")), fold("skool", pack("hi")));
  EXPECT_EQ(fold("colorful", pack("en")), fold("colourful", pack("en")));
  EXPECT_EQ(fold("bumblebee", pack("en")), fold("bumble-bee", pack("en")));
  EXPECT_NE(fold("kumar", pack("hi")), fold("kamar", pack("hi")));
}

TEST(Fold, NameVariantsFoldOnlyWhenTheNameIsKnown) {
  const auto& en = pack("en");
  EXPECT_EQ(fold_detail("pria", en).kind, FoldKind::kName);
  EXPECT_EQ(fold("pria", en), fold("priya", en));
  const auto plain = LanguagePack::load(testing::pack_dir(), "en");
  EXPECT_NE(fold("pria", plain), fold("priya", plain));
}

TEST(Fold, IsIdempotentOnRandomStrings) {
  for (const char* lang : {"hi", "en", "mr"}) {
    const auto& p = pack(lang);
    std::vector<std::string> alphabet = {"a", "aa", "e", "ee", "i", "o", "oo", "u", "y", "h", "k", "s", "t",
                                         "p", "r", "-", "क", "़", "ं", "न", "्", "द", "ि", "ी"};
    std::mt19937_64 rng(20260101);
    for (int iter = 0; iter < 2000; ++iter) {
      std::string s;
      const int len = 1 + static_cast<int>(rng() % 8);
      for (int k = 0; k < len; ++k) s += alphabet[rng() % alphabet.size()];
      const std::string once = fold(s, p);
      ASSERT_EQ(fold(once, p), once) << lang << " input '" << s << "'";
      ASSERT_EQ(fold_all_rules(fold_all_rules(s, p), p), fold_all_rules(s, p)) << lang << " input '" << s << "'";
    }
  }
}

TEST(Numbers, ParsesDigitsAndNumeralWords) {
  const auto& hi = pack("hi");
  auto parse = [&](std::vector<std::string> w) { return parse_number(std::span<const std::string>(w), hi); };
  EXPECT_EQ(parse(words({"1300"}))->value, 1300);
  EXPECT_EQ(parse(words({"das"}))->value, 10);
  auto terah = parse(words({"terah", "sau"}));
  ASSERT_TRUE(terah);
  EXPECT_EQ(terah->value, 1300);
  EXPECT_EQ(terah->consumed, 2u);
  auto hajar = parse(words({"ek", "hajar", "teen", "sau"}));
  ASSERT_TRUE(hajar);
  EXPECT_EQ(hajar->value, 1300);
  EXPECT_EQ(hajar->consumed, 4u);
  EXPECT_FALSE(parse(words({"sundar"})));
  const auto partial = parse(words({"teen", "log"}));
  ASSERT_TRUE(partial);
  EXPECT_EQ(partial->consumed, 1u);
}

TEST(Numbers, EnglishNumerals) {
  std::vector<std::string> w = {"three"};
  EXPECT_EQ(parse_number(std::span<const std::string>(w), pack("en"))->value, 3);
  w = {"thirteen", "hundred"};
  EXPECT_EQ(parse_number(std::span<const std::string>(w), pack("en"))->value, 1300);
}

TEST(Abbreviations, DottedCapitalsAndLetterNames) {
  const auto& hi = pack("hi");
  auto key = [&](const std::string& text) {
    const auto s = tokenize(text, hi);
    return abbreviation_key(std::span<const Token>(s.tokens), hi);
  };
  EXPECT_EQ(key("A.T.M."), "atm");
  EXPECT_EQ(key("ATM"), "atm");
  EXPECT_EQ(key("aytiem"), "atm");
  EXPECT_EQ(key("ay ti em"), "atm");
  EXPECT_FALSE(key("sundar"));
}

TEST(GraphemeDistance, CountsClusters) {
  EXPECT_EQ(grapheme_distance("kumar", "kamar"), 1u);
  EXPECT_EQ(grapheme_distance("", "abc"), 3u);
  EXPECT_EQ(grapheme_distance("सुंदर", "सुन्दर"), 2u);
  EXPECT_EQ(grapheme_distance("abc", "abc"), 0u);
}

TEST(LatinWord, DetectsScript) {
  EXPECT_TRUE(is_latin_word("ice cream"));
  EXPECT_FALSE(is_latin_word("सुंदर"));
}

TEST(Pack, RejectsMalformedJson) {
  EXPECT_THROW(LanguagePack::from_json_text("{"), ConfigError);
  EXPECT_THROW(LanguagePack::load(testing::pack_dir(), "xx"), ConfigError);
}

}  // namespace
}  // namespace laser
