// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "laser/align.hpp"
#include "laser/language_pack.hpp"
#include "laser/textnorm.hpp"

namespace laser::testing {

inline std::filesystem::path source_dir() { return LASER_SOURCE_DIR; }
inline std::filesystem::path pack_dir() { return source_dir() / "packs"; }
inline std::filesystem::path prompt_dir() { return source_dir() / "prompts"; }
inline std::filesystem::path fixture(const std::string& name) { return source_dir() / "tests" / "fixtures" / name; }

inline const LanguagePack& pack(const std::string& lang) {
  static const LanguagePack hi = LanguagePack::load(pack_dir(), "hi");
  static const LanguagePack en = LanguagePack::load(pack_dir(), "en").with_proper_nouns({"priya"});
  static const LanguagePack mr = LanguagePack::load(pack_dir(), "mr");
  if (lang == "en") return en;
  if (lang == "mr") return mr;
  return hi;
}

struct Aligned {
  TokenizedSentence ref;
  TokenizedSentence hyp;
  Alignment alignment;
};

inline Aligned align_merged(const std::string& ref, const std::string& hyp, const LanguagePack& p) {
  Aligned a{tokenize(ref, p), tokenize(hyp, p), {}};
  a.alignment = merge_pass(levenshtein_align(a.ref, a.hyp, pack_aware_cost(p)), a.ref, a.hyp, p);
  return a;
}

// Fresh scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("laser-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// Worked examples shared by several suites.
inline constexpr const char* kHindiRef = "vo bhajansangraha ke paas walaa A.T.M. das times सुन्दर hai skool se";
inline constexpr const char* kHindiHyp = "vaha bhajan sangraha komal paaswala aytiem 10 par taims सुंदर hain skul se";
inline constexpr const char* kEnglishRef = "The colorful bumblebee stung unlucky Priya 3 times on the arm though.";
inline constexpr const char* kEnglishHyp = "The colourful bumble-bee strung Pria three times on the arms tho.";

}  // namespace laser::testing
