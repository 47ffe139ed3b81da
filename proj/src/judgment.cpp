// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#include "laser/judgment.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <initializer_list>
#include <map>
#include <optional>
#include <utility>

#include "json.hpp"

namespace laser {
namespace {

using nlohmann::json;

std::string lower_key(std::string_view key) {
  std::string out;
  for (char c : key) {
    if (c == ' ' || c == '-') {
      out += '_';
    } else {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return out;
}

const json* find_field(const json& obj, std::initializer_list<std::string_view> names) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string key = lower_key(it.key());
    for (auto name : names) {
      if (key == name) return &it.value();
    }
  }
  return nullptr;
}

std::optional<double> as_number(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      std::size_t used = 0;
      const std::string s = v.get<std::string>();
      const double d = std::stod(s, &used);
      return d;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string strip_quotes(std::string s) {
  s = trim(s);
  for (std::string_view q : {"\"", "'", "\xE2\x80\x9C", "\xE2\x80\x9D"}) {
    if (s.size() >= q.size() && s.compare(0, q.size(), q) == 0) s.erase(0, q.size());
    if (s.size() >= q.size() && s.compare(s.size() - q.size(), q.size(), q) == 0) s.erase(s.size() - q.size());
  }
  return trim(s);
}

// "a vs. b (reason)", "a vs b: reason" or a bare word.
JudgedPair pair_from_string(const std::string& text) {
  JudgedPair p;
  std::string body = trim(text);
  if (!body.empty() && body.back() == ')') {
    const auto open = body.rfind('(');
    if (open != std::string::npos && open > 0) {
      p.reason = trim(std::string_view(body).substr(open + 1, body.size() - open - 2));
      body = trim(std::string_view(body).substr(0, open));
    }
  }
  if (p.reason.empty()) {
    const auto colon = body.find(':');
    if (colon != std::string::npos) {
      p.reason = trim(std::string_view(body).substr(colon + 1));
      body = trim(std::string_view(body).substr(0, colon));
    }
  }
  for (std::string_view sep : {" vs. ", " vs ", " VS ", " Vs. "}) {
    const auto pos = body.find(sep);
    if (pos != std::string::npos) {
      p.predicted = strip_quotes(body.substr(0, pos));
      p.original = strip_quotes(body.substr(pos + sep.size()));
      return p;
    }
  }
  p.predicted = strip_quotes(body);
  return p;
}

std::string text_of(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return {};
  if (v.is_array()) {
    std::string out;
    for (const auto& e : v) {
      if (!out.empty()) out += ' ';
      out += text_of(e);
    }
    return out;
  }
  return v.dump();
}

JudgedPair pair_from_json(const json& item, const std::string& raw) {
  if (item.is_string()) return pair_from_string(item.get<std::string>());
  if (item.is_array()) {
    JudgedPair p;
    if (item.size() > 0) p.predicted = text_of(item[0]);
    if (item.size() > 1) p.original = text_of(item[1]);
    if (item.size() > 2) p.reason = text_of(item[2]);
    return p;
  }
  if (item.is_object()) {
    JudgedPair p;
    if (auto* v = find_field(item, {"predicted", "pred", "hyp", "hypothesis", "sentence_1", "word1", "prediction"})) {
      p.predicted = text_of(*v);
    }
    if (auto* v = find_field(item, {"original", "orig", "ref", "reference", "sentence_2", "word2"})) {
      p.original = text_of(*v);
    }
    if (auto* v = find_field(item, {"reason", "type", "explanation", "category"})) p.reason = text_of(*v);
    if (p.predicted.empty() && p.original.empty()) {
      if (auto* v = find_field(item, {"pair", "tokens", "token", "words", "error"})) {
        JudgedPair inner = pair_from_json(*v, raw);
        inner.reason = p.reason.empty() ? inner.reason : p.reason;
        return inner;
      }
    }
    return p;
  }
  throw SchemaError(fmt::format("unexpected list entry {}", item.dump()), raw);
}

std::vector<JudgedPair> pair_list(const json& obj, std::initializer_list<std::string_view> names, const std::string& raw) {
  const json* v = find_field(obj, names);
  std::vector<JudgedPair> out;
  if (v == nullptr || v->is_null()) return out;
  if (!v->is_array()) {
    if (v->is_string() && v->get<std::string>().empty()) return out;
    out.push_back(pair_from_json(*v, raw));
    return out;
  }
  for (const auto& item : *v) out.push_back(pair_from_json(item, raw));
  return out;
}

LlmJudgment judgment_from(const json& obj, int pair_id, const std::string& raw) {
  if (!obj.is_object()) throw SchemaError(fmt::format("pair {}: judgment is not an object", pair_id), raw);
  LlmJudgment j;
  j.pair_id = pair_id;
  const json* n = find_field(obj, {"token_count", "tokens", "num_tokens", "number_of_tokens", "total_tokens",
                                   "tokens_in_original", "number_of_tokens_in_original_sentence"});
  if (n == nullptr) throw SchemaError(fmt::format("pair {}: missing token_count", pair_id), raw);
  const auto count = as_number(*n);
  if (!count || *count < 0 || std::floor(*count) != *count) {
    throw SchemaError(fmt::format("pair {}: token_count is not a non-negative integer", pair_id), raw);
  }
  j.token_count = static_cast<std::size_t>(*count);
  const json* s = find_field(obj, {"score", "laser", "similarity_score", "final_score", "final_similarity_score"});
  if (s == nullptr) throw SchemaError(fmt::format("pair {}: missing score", pair_id), raw);
  const auto score = as_number(*s);
  if (!score) throw SchemaError(fmt::format("pair {}: score is not a number", pair_id), raw);
  j.score = *score;
  if (const json* t = find_field(obj, {"total_penalty", "penalty", "weighted_penalty", "weighted_penalized_errors"})) {
    const auto total = as_number(*t);
    if (!total) throw SchemaError(fmt::format("pair {}: total_penalty is not a number", pair_id), raw);
    j.total_penalty = *total;
  } else {
    j.total_penalty = std::nan("");
  }
  j.non_penalizable = pair_list(obj,
                                {"non_penalizable", "non_penalizable_errors", "nonpenalizable", "no_penalty",
                                 "no_penalty_errors", "non_penalizable_tokens"},
                                raw);
  j.major = pair_list(obj, {"major", "major_errors", "major_penalty", "major_penalty_errors", "major_penalizable_errors"},
                      raw);
  j.minor = pair_list(obj, {"minor", "minor_errors", "minor_penalty", "minor_penalty_errors", "minor_penalizable_errors"},
                      raw);
  return j;
}

std::optional<int> number_in_key(const std::string& key) {
  std::string digits;
  for (char c : key) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
    } else if (!digits.empty()) {
      break;
    }
  }
  if (digits.empty() || digits.size() > 6) return std::nullopt;
  return std::stoi(digits);
}

bool looks_like_judgment(const json& obj) {
  return obj.is_object() && find_field(obj, {"token_count", "tokens", "num_tokens", "number_of_tokens", "total_tokens",
                                             "tokens_in_original", "number_of_tokens_in_original_sentence"}) != nullptr;
}

}  // namespace

std::string extract_json(std::string_view text) {
  for (std::size_t start = 0; start < text.size(); ++start) {
    const char open = text[start];
    if (open != '{' && open != '[') continue;
    int depth = 0;
    bool in_string = false, escaped = false;
    for (std::size_t i = start; i < text.size(); ++i) {
      const char c = text[i];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{' || c == '[') {
        ++depth;
      } else if (c == '}' || c == ']') {
        if (--depth == 0) {
          std::string candidate(text.substr(start, i - start + 1));
          if (json::accept(candidate)) return candidate;
          break;
        }
      }
    }
  }
  return {};
}

std::vector<LlmJudgment> parse_response(std::string_view text, std::size_t expected_count) {
  const std::string raw(text);
  const std::string body = extract_json(text);
  if (body.empty()) throw MalformedResponse("response contains no parseable JSON", raw);
  const json doc = json::parse(body);

  std::vector<LlmJudgment> out;
  if (looks_like_judgment(doc)) {
    out.push_back(judgment_from(doc, 1, raw));
  } else if (doc.is_array() ||
             (doc.is_object() && find_field(doc, {"pairs", "results", "judgments", "sentence_pairs"}))) {
    const json& arr = doc.is_array() ? doc : *find_field(doc, {"pairs", "results", "judgments", "sentence_pairs"});
    if (!arr.is_array()) throw SchemaError("pair list is not an array", raw);
    int position = 0;
    for (const auto& item : arr) {
      ++position;
      int id = position;
      if (item.is_object()) {
        if (const json* k = find_field(item, {"pair", "pair_id", "id", "number", "pair_number", "sentence_pair"})) {
          if (auto n = as_number(*k)) id = static_cast<int>(*n);
        }
      }
      out.push_back(judgment_from(item, id, raw));
    }
  } else if (doc.is_object()) {
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      const auto id = number_in_key(it.key());
      if (!id) throw SchemaError(fmt::format("unexpected key '{}' at top level", it.key()), raw);
      out.push_back(judgment_from(it.value(), *id, raw));
    }
  } else {
    throw MalformedResponse("response JSON is neither an object nor an array", raw);
  }

  if (out.size() != expected_count) {
    throw CountMismatch(fmt::format("expected {} judgments, found {}", expected_count, out.size()), raw);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.pair_id < b.pair_id; });
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].pair_id != static_cast<int>(i + 1)) {
      throw CountMismatch(fmt::format("judgments are not numbered 1..{}", expected_count), raw);
    }
  }
  return out;
}

JudgmentCheck validate_judgment(const LlmJudgment& judgment, const PenaltyWeights& weights) {
  if (judgment.token_count == 0) {
    throw DegenerateReference(fmt::format("pair {}: judgment reports 0 tokens", judgment.pair_id));
  }
  JudgmentCheck c;
  c.recomputed_penalty = weights.major * static_cast<double>(judgment.major.size()) +
                         weights.minor * static_cast<double>(judgment.minor.size());
  c.recomputed_score = 1.0 - c.recomputed_penalty / static_cast<double>(judgment.token_count);
  const double clamped = std::max(0.0, c.recomputed_score);
  c.consistent = std::abs(judgment.score - c.recomputed_score) <= kScoreTolerance ||
                 std::abs(judgment.score - clamped) <= kScoreTolerance;
  return c;
}

Category category_from_reason(PenaltyLevel level, std::string_view reason) {
  std::string r;
  for (char c : reason) r += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  auto has = [&](std::initializer_list<std::string_view> words) {
    return std::any_of(words.begin(), words.end(), [&](auto w) { return r.find(w) != std::string::npos; });
  };
  switch (level) {
    case PenaltyLevel::kIdentical:
      return Category::kExactMatch;
    case PenaltyLevel::kNonPenalizable:
      if (has({"number", "numer", "digit"})) return Category::kNumerical;
      if (has({"abbrev", "acronym"})) return Category::kAbbreviation;
      if (has({"compound", "join", "split", "hyphen"})) return Category::kCompound;
      if (has({"proper", "name", "place"})) return Category::kProperNoun;
      if (has({"colloquial", "slang", "regional", "contraction", "spoken"})) return Category::kColloquial;
      if (has({"native", "borrowed"})) return Category::kTransliterationNative;
      if (has({"translit", "english", "latin"})) return Category::kTransliterationActual;
      if (has({"spelling"})) return Category::kAlternateSpelling;
      return Category::kOther;
    case PenaltyLevel::kMinor:
      if (has({"gramm", "gender", "plural", "singular", "agreement", "tense", "inflect"})) {
        return Category::kSmallGrammar;
      }
      if (has({"spell", "sound", "vowel", "character"})) return Category::kSmallSpelling;
      return Category::kOther;
    case PenaltyLevel::kMajor:
      if (has({"omi", "addi", "added", "missing", "insert", "delet", "drop"})) return Category::kOmissionAddition;
      if (has({"reorder", "order"})) return Category::kReordering;
      if (has({"spelling"})) return Category::kMeaningAlteringSpelling;
      if (has({"substitut", "different word", "wrong word", "incorrect word"})) return Category::kSubstitution;
      return Category::kOther;
  }
  return Category::kOther;
}

}  // namespace laser
