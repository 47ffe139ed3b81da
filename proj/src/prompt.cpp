// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#include "laser/prompt.hpp"

#include <fmt/format.h>

#include <array>
#include <fstream>
#include <sstream>

#include "laser/error.hpp"

namespace laser {
namespace {

constexpr std::array<std::string_view, 5> kSections = {"A)", "B)", "C)", "D)", "E)"};

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read prompt file {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  return text;
}

}  // namespace

PromptTemplate PromptTemplate::load(const std::filesystem::path& dir, const std::string& example_language) {
  PromptTemplate t;
  t.instructions = read_text(dir / "rubric.txt");
  t.example = read_text(dir / fmt::format("example_{}.txt", example_language));
  t.response_structure = read_text(dir / "response.txt");
  t.example_language = example_language;
  t.validate();
  return t;
}

void PromptTemplate::validate() const {
  for (auto section : kSections) {
    if (instructions.find(section) == std::string::npos) {
      throw ConfigError(fmt::format("prompt instructions lack section {}", section));
    }
  }
  if (example.empty()) throw ConfigError("prompt example block is empty");
  if (response_structure.empty()) throw ConfigError("prompt response structure is empty");
}

std::string build_prompt(std::span<const SentencePair> batch, const PromptTemplate& tmpl) {
  if (batch.empty()) throw DataError("cannot build a prompt for an empty batch");
  std::string out;
  out += tmpl.instructions;
  out += "\n\n";
  out += tmpl.example;
  out += "\n\n";
  out += tmpl.response_structure;
  out += "\n\nSENTENCE PAIRS\n";
  for (std::size_t i = 0; i < batch.size(); ++i) {
    out += fmt::format("\n{}.\nSentence 1 (predicted): {}\nSentence 2 (original): {}\n", i + 1, batch[i].predicted,
                       batch[i].original);
  }
  return out;
}

}  // namespace laser
