// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>
#include <string>

namespace laser {

struct SentencePair {
  std::string predicted;
  std::string original;
};

// Judge prompt pieces. The rubric text holds sections A) through E); the
// worked example is swappable per language.
struct PromptTemplate {
  std::string instructions;
  std::string example;
  std::string response_structure;
  std::string example_language;

  // Reads rubric.txt, example_<lang>.txt and response.txt from `dir`.
  // Throws ConfigError when a file is missing or a rubric section is absent.
  static PromptTemplate load(const std::filesystem::path& dir, const std::string& example_language);
  void validate() const;
};

// Template followed by the numbered pair list. Throws DataError on an empty
// batch.
std::string build_prompt(std::span<const SentencePair> batch, const PromptTemplate& tmpl);

}  // namespace laser
