// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "laser/align.hpp"
#include "laser/rubric.hpp"

namespace laser {

using ojson = nlohmann::ordered_json;

// Opposite-direction label: Delete <-> Insert, Join <-> Split.
EditKind reversed(EditKind kind);

ojson to_json(const ErrorRate& rate);
ojson to_json(const SentenceEvaluation& eval);
SentenceEvaluation evaluation_from_json(const nlohmann::json& doc);

ojson to_json(const Alignment& alignment, const TokenizedSentence& ref, const TokenizedSentence& hyp);

// Run metadata written as the first line of every JSONL output:
// {"meta": {...}}. Carries no timestamps so reruns stay byte-identical.
struct RunMeta {
  std::string command;
  std::string config_hash;
  std::string lang;
  std::string pack_version;
  std::string backend;
  PenaltyWeights weights;
  ojson extra = ojson::object();
};

std::string meta_line(const RunMeta& meta);

std::string evaluations_jsonl(std::span<const SentenceEvaluation> evals, const RunMeta& meta);
// Skips the meta line. Throws DataError with the line number on bad input.
std::vector<SentenceEvaluation> load_evaluations(const std::filesystem::path& path);

// Lowercase hex SHA-256 digest.
std::string sha256_hex(const std::string& data);

// Writes via a temporary file and rename.
void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace laser
