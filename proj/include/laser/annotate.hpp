// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "laser/error.hpp"
#include "laser/ingest.hpp"
#include "laser/language_pack.hpp"
#include "laser/rubric.hpp"

namespace httplib {
class Server;
}

namespace laser {

enum class TaskStatus { kPending, kInProgress, kDone };
std::string_view to_string(TaskStatus status);

struct AnnotationLabel {
  std::size_t pair = 0;
  PenaltyLevel level = PenaltyLevel::kIdentical;
  Category category = Category::kExactMatch;
  std::string reason;
};

struct TaskPair {
  EditKind op = EditKind::kMatch;
  Span ref;
  Span hyp;
};

struct AnnotationTask {
  std::string id;
  std::string ref_text;
  std::string hyp_text;
  std::vector<std::string> ref_tokens;
  std::vector<std::string> hyp_tokens;
  std::vector<TaskPair> pairs;
  TaskStatus status = TaskStatus::kPending;
  std::string annotator;
  std::vector<AnnotationLabel> labels;  // one per pair once done
  std::string note;
  SentenceScore human;
};

// Rejected submission; `problems` lists each offending pair or field.
class ValidationError : public DataError {
 public:
  ValidationError(const std::string& what, std::vector<std::string> problems)
      : DataError(what), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

// Stale task id, task owned by someone else, or a second submission.
class ConflictError : public DataError {
 public:
  using DataError::DataError;
};

class NotFoundError : public DataError {
 public:
  using DataError::DataError;
};

// Task queue backed by an append-only JSONL log. Opening a store replays the
// log; every mutation is appended before it becomes visible.
class AnnotationStore {
 public:
  explicit AnnotationStore(std::filesystem::path log_path, PenaltyWeights weights = {});
  ~AnnotationStore();
  AnnotationStore(const AnnotationStore&) = delete;
  AnnotationStore& operator=(const AnnotationStore&) = delete;

  // Aligns and enqueues records whose id is not already known. Returns the
  // number added.
  std::size_t add_tasks(std::span<const CorpusRecord> records, const LanguagePack& pack);

  // The caller's unfinished task, else the oldest pending one, else empty.
  std::optional<AnnotationTask> next_task(const std::string& annotator);
  // Throws NotFoundError.
  AnnotationTask task(const std::string& id) const;
  AnnotationTask submit(const std::string& id, const std::string& annotator, std::vector<AnnotationLabel> labels,
                        const std::string& note = {});

  struct Progress {
    std::size_t total = 0;
    std::size_t pending = 0;
    std::size_t in_progress = 0;
    std::size_t done = 0;
    std::map<std::string, std::size_t> done_by_annotator;
  };
  Progress progress() const;

  std::vector<AnnotationTask> done_tasks() const;
  std::vector<AnnotationTask> all_tasks() const;

  // Annotation TSV: id, no-penalty list, major list, minor list and the
  // three counts. Throws DataError when nothing is done.
  std::string export_annotation_table() const;
  std::string export_pairs() const;

  const PenaltyWeights& weights() const { return weights_; }

 private:
  void apply(const nlohmann::json& event);
  void append(const nlohmann::json& event);

  std::filesystem::path log_path_;
  PenaltyWeights weights_;
  std::ofstream log_;
  mutable std::shared_mutex mutex_;
  std::vector<AnnotationTask> tasks_;
  std::map<std::string, std::size_t> index_;
};

// Human evaluation of a finished task (pairs and their labels).
SentenceEvaluation evaluation_of(const AnnotationTask& task);

nlohmann::json task_to_json(const AnnotationTask& task);
AnnotationLabel label_from_json(const nlohmann::json& j);

// HTTP front end:
//   GET  /api/tasks/next?annotator=ID   200 task | 204 empty queue
//   GET  /api/tasks/{id}                200 | 404
//   POST /api/tasks/{id}/labels         200 | 400 validation | 409 stale or repeated
//   GET  /api/export?format=appendixB|pairs
//   GET  /api/progress
// and the static UI (or a placeholder page) at /.
class AnnotateServer {
 public:
  AnnotateServer(AnnotationStore& store, std::filesystem::path ui_dir = {});
  ~AnnotateServer();
  // Blocks until stop().
  bool listen(const std::string& host, int port);
  // Binds an ephemeral port; returns it. Serve with listen_after_bind().
  int bind_any(const std::string& host);
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  void routes();
  AnnotationStore& store_;
  std::filesystem::path ui_dir_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace laser
