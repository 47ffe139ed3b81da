// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#include <fmt/format.h>

#include <mutex>
#include <set>

#include "laser/align.hpp"
#include "laser/annotate.hpp"
#include "laser/textnorm.hpp"

namespace laser {
namespace {

using nlohmann::json;

std::string words(const std::vector<std::string>& tokens, const Span& span) {
  std::string out;
  for (std::size_t i = span.begin; i < span.end; ++i) out += (out.empty() ? "" : " ") + tokens[i];
  return out;
}

std::vector<std::string> word_list(const std::vector<std::string>& tokens, const Span& span) {
  return {tokens.begin() + static_cast<std::ptrdiff_t>(span.begin), tokens.begin() + static_cast<std::ptrdiff_t>(span.end)};
}

json label_to_json(const AnnotationLabel& l) {
  return {{"pair", l.pair},
          {"level", static_cast<int>(l.level)},
          {"category", std::string(to_string(l.category))},
          {"reason", l.reason}};
}

json task_record(const AnnotationTask& t) {
  json pairs = json::array();
  for (const auto& p : t.pairs) {
    pairs.push_back({{"op", std::string(to_string(p.op))},
                     {"ref", {p.ref.begin, p.ref.end}},
                     {"hyp", {p.hyp.begin, p.hyp.end}}});
  }
  return {{"id", t.id},
          {"ref_text", t.ref_text},
          {"hyp_text", t.hyp_text},
          {"ref_tokens", t.ref_tokens},
          {"hyp_tokens", t.hyp_tokens},
          {"pairs", std::move(pairs)}};
}

AnnotationTask task_from_record(const json& j) {
  AnnotationTask t;
  t.id = j.at("id").get<std::string>();
  t.ref_text = j.at("ref_text").get<std::string>();
  t.hyp_text = j.at("hyp_text").get<std::string>();
  t.ref_tokens = j.at("ref_tokens").get<std::vector<std::string>>();
  t.hyp_tokens = j.at("hyp_tokens").get<std::vector<std::string>>();
  for (const auto& pj : j.at("pairs")) {
    TaskPair p;
    const auto op = edit_kind_from_string(pj.at("op").get<std::string>());
    if (!op) throw DataError("unknown op in task record");
    p.op = *op;
    p.ref = {pj.at("ref").at(0).get<std::size_t>(), pj.at("ref").at(1).get<std::size_t>()};
    p.hyp = {pj.at("hyp").at(0).get<std::size_t>(), pj.at("hyp").at(1).get<std::size_t>()};
    if (p.ref.end > t.ref_tokens.size() || p.hyp.end > t.hyp_tokens.size() || p.ref.begin > p.ref.end ||
        p.hyp.begin > p.hyp.end) {
      throw DataError(fmt::format("task '{}': pair span out of range", t.id));
    }
    t.pairs.push_back(p);
  }
  return t;
}

}  // namespace

std::string_view to_string(TaskStatus status) {
  switch (status) {
    case TaskStatus::kPending: return "pending";
    case TaskStatus::kInProgress: return "in-progress";
    case TaskStatus::kDone: return "done";
  }
  return "pending";
}

AnnotationLabel label_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("label is not an object", {"label is not an object"});
  AnnotationLabel l;
  try {
    l.pair = j.at("pair").get<std::size_t>();
    const auto& lv = j.at("level");
    std::optional<PenaltyLevel> level =
        lv.is_number_integer() ? level_from_int(lv.get<int>()) : level_from_string(lv.get<std::string>());
    if (!level) throw ValidationError("bad level", {fmt::format("pair {}: level must be 0..3", l.pair)});
    l.level = *level;
    if (j.contains("category") && !j.at("category").is_null()) {
      const auto cat = category_from_string(j.at("category").get<std::string>());
      if (!cat) {
        throw ValidationError("bad category",
                              {fmt::format("pair {}: unknown category '{}'", l.pair, j.at("category").get<std::string>())});
      }
      l.category = *cat;
    } else {
      l.category = l.level == PenaltyLevel::kIdentical ? Category::kExactMatch : Category::kOther;
    }
    l.reason = j.value("reason", "");
  } catch (const json::exception& e) {
    throw ValidationError("malformed label", {fmt::format("malformed label: {}", e.what())});
  }
  return l;
}

json task_to_json(const AnnotationTask& t) {
  json pairs = json::array();
  for (std::size_t i = 0; i < t.pairs.size(); ++i) {
    const auto& p = t.pairs[i];
    json pj = {{"index", i},
               {"op", std::string(to_string(p.op))},
               {"ref", word_list(t.ref_tokens, p.ref)},
               {"hyp", word_list(t.hyp_tokens, p.hyp)},
               {"ref_span", {p.ref.begin, p.ref.end}},
               {"hyp_span", {p.hyp.begin, p.hyp.end}}};
    if (i < t.labels.size()) {
      pj["label"] = label_to_json(t.labels[i]);
    } else if (p.op == EditKind::kMatch) {
      pj["label"] = label_to_json({i, PenaltyLevel::kIdentical, Category::kExactMatch, ""});
    } else {
      pj["label"] = nullptr;
    }
    pairs.push_back(std::move(pj));
  }
  json j = {{"id", t.id},
            {"status", std::string(to_string(t.status))},
            {"annotator", t.annotator},
            {"ref_text", t.ref_text},
            {"hyp_text", t.hyp_text},
            {"ref", t.ref_tokens},
            {"hyp", t.hyp_tokens},
            {"reference_words", t.ref_tokens.size()},
            {"pairs", std::move(pairs)}};
  json menu = json::object();
  for (auto level : kAllLevels) {
    json names = json::array();
    for (auto c : categories_for(level)) names.push_back(std::string(to_string(c)));
    menu[std::to_string(static_cast<int>(level))] = std::move(names);
  }
  j["categories"] = std::move(menu);
  if (t.status == TaskStatus::kDone) {
    j["human"] = {{"total_penalty", t.human.total_penalty}, {"laser_raw", t.human.laser_raw}, {"laser", t.human.laser}};
    j["note"] = t.note;
  }
  return j;
}

SentenceEvaluation evaluation_of(const AnnotationTask& task) {
  SentenceEvaluation e;
  e.id = task.id;
  e.ref_text = task.ref_text;
  e.hyp_text = task.hyp_text;
  e.classifier_id = "human";
  e.ref_word_count = task.ref_tokens.size();
  e.word_errors = wer(tokenize_plain(task.ref_text), tokenize_plain(task.hyp_text));
  for (std::size_t i = 0; i < task.pairs.size() && i < task.labels.size(); ++i) {
    const auto& p = task.pairs[i];
    const auto& l = task.labels[i];
    e.classified_pairs.push_back(
        {word_list(task.ref_tokens, p.ref), word_list(task.hyp_tokens, p.hyp), p.op, {l.level, l.category, l.reason}});
  }
  e.total_penalty = task.human.total_penalty;
  e.laser_raw = task.human.laser_raw;
  e.laser = task.human.laser;
  return e;
}

AnnotationStore::AnnotationStore(std::filesystem::path log_path, PenaltyWeights weights)
    : log_path_(std::move(log_path)), weights_(weights) {
  weights_.validate();
  if (log_path_.has_parent_path()) std::filesystem::create_directories(log_path_.parent_path());
  if (std::filesystem::exists(log_path_)) {
    std::ifstream in(log_path_);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    for (std::size_t n = 0; n < lines.size(); ++n) {
      if (lines[n].empty()) continue;
      json event;
      try {
        event = json::parse(lines[n]);
      } catch (const json::exception&) {
        // A torn final line from an interrupted write is dropped.
        if (n + 1 == lines.size()) break;
        throw DataError(fmt::format("{}:{}: corrupt log line", log_path_.string(), n + 1));
      }
      try {
        apply(event);
      } catch (const std::exception& e) {
        throw DataError(fmt::format("{}:{}: {}", log_path_.string(), n + 1, e.what()));
      }
    }
  }
  log_.open(log_path_, std::ios::app | std::ios::binary);
  if (!log_) throw DataError(fmt::format("cannot open annotation log {}", log_path_.string()));
}

AnnotationStore::~AnnotationStore() = default;

void AnnotationStore::append(const json& event) {
  log_ << event.dump() << '\n';
  log_.flush();
  if (!log_) throw DataError(fmt::format("write to {} failed", log_path_.string()));
}

void AnnotationStore::apply(const json& event) {
  const std::string kind = event.at("event").get<std::string>();
  if (kind == "task") {
    AnnotationTask t = task_from_record(event.at("task"));
    if (index_.count(t.id)) throw DataError(fmt::format("duplicate task '{}'", t.id));
    index_[t.id] = tasks_.size();
    tasks_.push_back(std::move(t));
    return;
  }
  auto it = index_.find(event.at("id").get<std::string>());
  if (it == index_.end()) throw DataError("event for unknown task");
  AnnotationTask& t = tasks_[it->second];
  if (kind == "assign") {
    t.status = TaskStatus::kInProgress;
    t.annotator = event.at("annotator").get<std::string>();
  } else if (kind == "submit") {
    t.labels.clear();
    for (const auto& lj : event.at("labels")) t.labels.push_back(label_from_json(lj));
    std::vector<PenaltyLevel> levels;
    for (const auto& l : t.labels) levels.push_back(l.level);
    t.human = score_sentence(t.ref_tokens.size(), std::span<const PenaltyLevel>(levels), weights_);
    t.annotator = event.at("annotator").get<std::string>();
    t.note = event.value("note", "");
    t.status = TaskStatus::kDone;
  } else {
    throw DataError(fmt::format("unknown event '{}'", kind));
  }
}

std::size_t AnnotationStore::add_tasks(std::span<const CorpusRecord> records, const LanguagePack& pack) {
  std::unique_lock lock(mutex_);
  std::size_t added = 0;
  for (const auto& r : records) {
    if (index_.count(r.id)) continue;
    const TokenizedSentence ref = tokenize(r.ref, pack, r.id);
    const TokenizedSentence hyp = tokenize(r.hyp, pack, r.id);
    if (ref.empty()) throw DataError(fmt::format("record '{}' has an empty reference", r.id));
    const Alignment a = merge_pass(levenshtein_align(ref, hyp, pack_aware_cost(pack)), ref, hyp, pack);
    AnnotationTask t;
    t.id = r.id;
    t.ref_text = r.ref;
    t.hyp_text = r.hyp;
    for (const auto& tok : ref.tokens) t.ref_tokens.push_back(tok.normalized);
    for (const auto& tok : hyp.tokens) t.hyp_tokens.push_back(tok.normalized);
    for (const auto& p : a.pairs) t.pairs.push_back({p.op, p.ref, p.hyp});
    const json event = {{"event", "task"}, {"task", task_record(t)}};
    append(event);
    apply(event);
    ++added;
  }
  return added;
}

std::optional<AnnotationTask> AnnotationStore::next_task(const std::string& annotator) {
  if (annotator.empty()) throw ValidationError("annotator id required", {"annotator id required"});
  std::unique_lock lock(mutex_);
  for (const auto& t : tasks_) {
    if (t.status == TaskStatus::kInProgress && t.annotator == annotator) return t;
  }
  for (auto& t : tasks_) {
    if (t.status != TaskStatus::kPending) continue;
    const json event = {{"event", "assign"}, {"id", t.id}, {"annotator", annotator}};
    append(event);
    apply(event);
    return t;
  }
  return std::nullopt;
}

AnnotationTask AnnotationStore::task(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = index_.find(id);
  if (it == index_.end()) throw NotFoundError(fmt::format("unknown task '{}'", id));
  return tasks_[it->second];
}

AnnotationTask AnnotationStore::submit(const std::string& id, const std::string& annotator,
                                       std::vector<AnnotationLabel> labels, const std::string& note) {
  std::unique_lock lock(mutex_);
  auto it = index_.find(id);
  if (it == index_.end()) throw NotFoundError(fmt::format("unknown task '{}'", id));
  const AnnotationTask& t = tasks_[it->second];
  if (t.status == TaskStatus::kDone) throw ConflictError(fmt::format("task '{}' was already submitted", id));
  if (t.status != TaskStatus::kInProgress || t.annotator != annotator) {
    throw ConflictError(fmt::format("task '{}' is not assigned to '{}'", id, annotator));
  }

  std::vector<std::string> problems;
  std::vector<std::optional<AnnotationLabel>> by_pair(t.pairs.size());
  for (auto& l : labels) {
    if (l.pair >= t.pairs.size()) {
      problems.push_back(fmt::format("pair {}: no such pair (task has {})", l.pair, t.pairs.size()));
      continue;
    }
    if (by_pair[l.pair]) {
      problems.push_back(fmt::format("pair {}: labeled twice", l.pair));
      continue;
    }
    if (!consistent(l.level, l.category)) {
      problems.push_back(fmt::format("pair {}: category '{}' does not belong to level '{}'", l.pair,
                                     to_string(l.category), to_string(l.level)));
    }
    const bool match = t.pairs[l.pair].op == EditKind::kMatch;
    if (match && l.level != PenaltyLevel::kIdentical) {
      problems.push_back(fmt::format("pair {}: identical words must stay at level identical", l.pair));
    }
    if (!match && l.level == PenaltyLevel::kIdentical) {
      problems.push_back(fmt::format("pair {}: differing words cannot be labeled identical", l.pair));
    }
    by_pair[l.pair] = std::move(l);
  }
  for (std::size_t i = 0; i < t.pairs.size(); ++i) {
    if (by_pair[i]) continue;
    if (t.pairs[i].op == EditKind::kMatch) {
      by_pair[i] = AnnotationLabel{i, PenaltyLevel::kIdentical, Category::kExactMatch, ""};
    } else {
      problems.push_back(fmt::format("pair {} ({} vs {}) is unlabeled", i, words(t.ref_tokens, t.pairs[i].ref),
                                     words(t.hyp_tokens, t.pairs[i].hyp)));
    }
  }
  if (!problems.empty()) throw ValidationError(fmt::format("task '{}': labels rejected", id), std::move(problems));

  json label_list = json::array();
  for (const auto& l : by_pair) label_list.push_back(label_to_json(*l));
  const json event = {{"event", "submit"}, {"id", id}, {"annotator", annotator}, {"labels", label_list}, {"note", note}};
  append(event);
  apply(event);
  return tasks_[it->second];
}

AnnotationStore::Progress AnnotationStore::progress() const {
  std::shared_lock lock(mutex_);
  Progress p;
  p.total = tasks_.size();
  for (const auto& t : tasks_) {
    switch (t.status) {
      case TaskStatus::kPending: ++p.pending; break;
      case TaskStatus::kInProgress: ++p.in_progress; break;
      case TaskStatus::kDone:
        ++p.done;
        ++p.done_by_annotator[t.annotator];
        break;
    }
  }
  return p;
}

std::vector<AnnotationTask> AnnotationStore::done_tasks() const {
  std::shared_lock lock(mutex_);
  std::vector<AnnotationTask> out;
  for (const auto& t : tasks_) {
    if (t.status == TaskStatus::kDone) out.push_back(t);
  }
  return out;
}

std::vector<AnnotationTask> AnnotationStore::all_tasks() const {
  std::shared_lock lock(mutex_);
  return tasks_;
}

std::string AnnotationStore::export_annotation_table() const {
  const auto done = done_tasks();
  if (done.empty()) throw DataError("no completed annotation tasks to export");
  std::string out = "id\tno_penalty\tmajor\tminor\tno_penalty_count\tmajor_count\tminor_count\n";
  for (const auto& t : done) {
    std::vector<std::string> np, major, minor;
    for (std::size_t i = 0; i < t.pairs.size(); ++i) {
      const auto& l = t.labels[i];
      if (l.level == PenaltyLevel::kIdentical) continue;
      const std::string hyp = words(t.hyp_tokens, t.pairs[i].hyp);
      const std::string ref = words(t.ref_tokens, t.pairs[i].ref);
      std::string item = fmt::format("{} vs {} ({}{}{})", hyp.empty() ? "-" : hyp, ref.empty() ? "-" : ref,
                                     to_string(l.category), l.reason.empty() ? "" : ": ", l.reason);
      (l.level == PenaltyLevel::kNonPenalizable ? np : l.level == PenaltyLevel::kMajor ? major : minor)
          .push_back(std::move(item));
    }
    out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\n", t.id, join_annotation_list(np), join_annotation_list(major),
                       join_annotation_list(minor), np.size(), major.size(), minor.size());
  }
  return out;
}

std::string AnnotationStore::export_pairs() const {
  const auto done = done_tasks();
  if (done.empty()) throw DataError("no completed annotation tasks to export");
  std::vector<SentenceEvaluation> evals;
  for (const auto& t : done) evals.push_back(evaluation_of(t));
  ExportOptions options;
  options.identical_sample_rate = 1.0;
  return training_jsonl(export_training_pairs(evals, options));
}

}  // namespace laser
