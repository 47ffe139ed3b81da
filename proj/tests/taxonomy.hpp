// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "laser/classify_rules.hpp"
#include "laser/error.hpp"

namespace laser::testing {

// One row of the error-taxonomy fixture: every non-identical pair the
// pipeline produces for (ref, hyp) must land on `level`, and on `category`
// unless it is "*".
struct TaxonomyRow {
  std::string ref;
  std::string hyp;
  PenaltyLevel level = PenaltyLevel::kIdentical;
  std::string category;
  std::string label;
};

inline std::vector<TaxonomyRow> load_taxonomy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::vector<TaxonomyRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, '\t')) f.push_back(cell);
    if (f.size() != 5) throw DataError("bad fixture row: " + line);
    rows.push_back({f[0] == "-" ? "" : f[0], f[1] == "-" ? "" : f[1],
                    static_cast<PenaltyLevel>(std::stoi(f[2])), f[3], f[4]});
  }
  return rows;
}

inline void PrintTo(const TaxonomyRow& row, std::ostream* os) { *os << row.ref << " vs " << row.hyp; }

struct TaxonomyOutcome {
  bool ok = false;
  std::string detail;
};

inline TaxonomyOutcome check_taxonomy_row(const TaxonomyRow& row, const LanguagePack& pack) {
  const auto ref = tokenize(row.ref, pack);
  const auto hyp = tokenize(row.hyp, pack);
  const auto al = merge_pass(levenshtein_align(ref, hyp, pack_aware_cost(pack)), ref, hyp, pack);
  TaxonomyOutcome out{true, ""};
  std::size_t checked = 0;
  for (const auto& c : classify_sentence(al, ref, hyp, pack)) {
    if (c.pair.op == EditKind::kMatch) continue;
    ++checked;
    const bool level_ok = c.cls.level == row.level;
    const bool cat_ok = row.category == "*" || to_string(c.cls.category) == row.category;
    if (!level_ok || !cat_ok) {
      out.ok = false;
      out.detail += std::string(to_string(c.cls.level)) + "/" + std::string(to_string(c.cls.category)) + " via " +
                    c.trace.terminal + "; ";
    }
  }
  if (checked == 0) {
    out.ok = false;
    out.detail = "no mismatched pair";
  }
  return out;
}

}  // namespace laser::testing
