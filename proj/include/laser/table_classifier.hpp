// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>

#include "laser/rubric.hpp"

namespace laser {

// Labels looked up from a file of pair predictions, e.g. the output of a
// finetuned pair classifier over exported training pairs. Lines are JSONL
// objects {"ref", "hyp", "label", "category"?}. Unknown pairs go to the
// fallback, or throw DataError without one.
class LookupClassifier final : public PairClassifier {
 public:
  LookupClassifier(std::map<std::pair<std::string, std::string>, PenaltyClass> table, std::string id,
                   const PairClassifier* fallback = nullptr);
  static LookupClassifier load(const std::filesystem::path& path, const PairClassifier* fallback = nullptr);

  std::string id() const override { return id_; }
  PenaltyClass classify(const PairView& pair, const LanguagePack& pack) const override;
  std::size_t size() const { return table_.size(); }

 private:
  std::map<std::pair<std::string, std::string>, PenaltyClass> table_;
  std::string id_;
  const PairClassifier* fallback_;
};

}  // namespace laser
