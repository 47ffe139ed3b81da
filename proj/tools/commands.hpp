// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "laser/judge.hpp"
#include "laser/rubric.hpp"

namespace laser::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kTransport = 3 };

struct RunConfig {
  std::string lang = "hi";
  std::filesystem::path pack_dir;
  std::filesystem::path prompt_dir;
  std::string example_language = "hi";
  std::string backend = "rules";  // rules | llm | human-import | pairs
  PenaltyWeights weights;
  JudgeConfig judge;
  std::filesystem::path out = "laser-out";
  std::uint64_t seed = 0;
  double wer_threshold = 0.35;
  double identical_sample_rate = 0.1;
  std::filesystem::path annotations;  // human-import backend
  std::filesystem::path predictions;  // pairs backend
  std::vector<std::string> proper_nouns;

  // Throws ConfigError.
  void validate() const;
  // Canonical JSON of the effective settings; its hash goes into run metadata.
  std::string canonical() const;
};

// Defaults, then the config file (when given), callers apply flags last.
RunConfig load_config(const std::optional<std::filesystem::path>& path);
std::filesystem::path default_data_dir();

int cmd_score(const RunConfig& config, const std::filesystem::path& corpus);
int cmd_align(const RunConfig& config, const std::string& ref, const std::string& hyp);
int cmd_correlate(const RunConfig& config, const std::vector<std::string>& inputs,
                  const std::vector<std::filesystem::path>& score_files, const std::vector<std::string>& columns,
                  bool use_raw);
int cmd_report(const RunConfig& config, const std::filesystem::path& evals, std::optional<double> laser_split);
int cmd_export_pairs(const RunConfig& config, const std::filesystem::path& evals,
                     const std::optional<std::filesystem::path>& heldout);
int cmd_eval_classifier(const RunConfig& config, const std::filesystem::path& predicted,
                        const std::filesystem::path& gold, bool write_csv,
                        const std::vector<std::size_t>& train_val_counts = {});
int cmd_annotate(const RunConfig& config, const std::filesystem::path& corpus, const std::filesystem::path& log,
                 const std::string& host, int port, const std::filesystem::path& ui_dir);

}  // namespace laser::cli
