// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>
#include <httplib.h>

#include <nlohmann/json.hpp>
#include <set>
#include <sstream>
#include <thread>

#include "laser/annotate.hpp"
#include "laser/classify_rules.hpp"
#include "laser/ingest.hpp"
#include "test_support.hpp"

namespace laser {
namespace {

using nlohmann::json;
using testing::pack;

std::vector<CorpusRecord> records(std::size_t n) {
  std::vector<CorpusRecord> out = {{"appA", "hi", testing::kHindiRef, testing::kHindiHyp}};
  for (std::size_t i = 1; i < n; ++i) out.push_back({"t" + std::to_string(i), "hi", "ek do teen", "ek do"});
  return out;
}

// Labels every non-match pair the way the rule classifier does.
std::vector<AnnotationLabel> rule_labels(const AnnotationTask& task) {
  const auto a = testing::align_merged(task.ref_text, task.hyp_text, pack("hi"));
  const auto classified = classify_sentence(a.alignment, a.ref, a.hyp, pack("hi"));
  EXPECT_EQ(classified.size(), task.pairs.size());
  std::vector<AnnotationLabel> out;
  for (std::size_t i = 0; i < classified.size() && i < task.pairs.size(); ++i) {
    if (task.pairs[i].op == EditKind::kMatch) continue;
    out.push_back({i, classified[i].cls.level, classified[i].cls.category, "checked"});
  }
  return out;
}

TEST(Store, LabelsHindiExampleToWorkedScore) {
  testing::TempDir dir;
  AnnotationStore store(dir / "log.jsonl");
  EXPECT_EQ(store.add_tasks(records(1), pack("hi")), 1u);
  auto task = store.next_task("ann1");
  ASSERT_TRUE(task);
  EXPECT_EQ(task->status, TaskStatus::kInProgress);
  const auto done = store.submit(task->id, "ann1", rule_labels(*task));
  EXPECT_EQ(done.status, TaskStatus::kDone);
  EXPECT_NEAR(done.human.laser, 0.7917, 5e-5);
  EXPECT_EQ(done.labels.size(), done.pairs.size());
  EXPECT_FALSE(store.next_task("ann1"));
}

TEST(Store, ValidationAndConflicts) {
  testing::TempDir dir;
  AnnotationStore store(dir / "log.jsonl");
  store.add_tasks(records(2), pack("hi"));
  const auto task = *store.next_task("ann1");
  EXPECT_THROW(store.submit(task.id, "ann2", rule_labels(task)), ConflictError);
  EXPECT_THROW(store.submit("missing", "ann1", {}), NotFoundError);
  EXPECT_THROW(store.submit(task.id, "ann1", {}), ValidationError);  // unlabeled mismatches
  auto labels = rule_labels(task);
  labels.push_back(labels.front());
  EXPECT_THROW(store.submit(task.id, "ann1", labels), ValidationError);  // duplicate
  labels = rule_labels(task);
  labels.front().category = Category::kCompound;
  labels.front().level = PenaltyLevel::kMajor;
  EXPECT_THROW(store.submit(task.id, "ann1", labels), ValidationError);  // inconsistent
  labels = rule_labels(task);
  labels.push_back({999, PenaltyLevel::kMajor, Category::kSubstitution, ""});
  EXPECT_THROW(store.submit(task.id, "ann1", labels), ValidationError);
  labels = rule_labels(task);
  store.submit(task.id, "ann1", labels);
  EXPECT_THROW(store.submit(task.id, "ann1", labels), ConflictError);
}

TEST(Store, ResumesInProgressTaskFirst) {
  testing::TempDir dir;
  AnnotationStore store(dir / "log.jsonl");
  store.add_tasks(records(3), pack("hi"));
  const auto a = store.next_task("x");
  const auto again = store.next_task("x");
  EXPECT_EQ(a->id, again->id);
  EXPECT_NE(store.next_task("y")->id, a->id);
}

TEST(Store, ConcurrentNextTaskNeverDoubleAssigns) {
  testing::TempDir dir;
  AnnotationStore store(dir / "log.jsonl");
  store.add_tasks(records(64), pack("hi"));
  std::vector<std::thread> threads;
  std::vector<std::vector<std::string>> got(8);
  for (int w = 0; w < 8; ++w) {
    threads.emplace_back([&, w] {
      const std::string name = "ann" + std::to_string(w);
      for (int k = 0; k < 8; ++k) {
        auto t = store.next_task(name);
        if (!t) break;
        got[w].push_back(t->id);
        store.submit(t->id, name, rule_labels(*t));
      }
    });
  }
  for (auto& t : threads) t.join();
  std::set<std::string> all;
  std::size_t total = 0;
  for (const auto& g : got) {
    total += g.size();
    all.insert(g.begin(), g.end());
  }
  EXPECT_EQ(total, 64u);
  EXPECT_EQ(all.size(), 64u);
  EXPECT_EQ(store.progress().done, 64u);
}

TEST(Store, ReplaysLogAndDropsTornTail) {
  testing::TempDir dir;
  std::string id;
  {
    AnnotationStore store(dir / "log.jsonl");
    store.add_tasks(records(2), pack("hi"));
    const auto t = *store.next_task("ann");
    id = t.id;
    store.submit(t.id, "ann", rule_labels(t));
    store.next_task("ann");
  }
  {
    std::ofstream out(dir / "log.jsonl", std::ios::app);
    out << "{\"type\":\"submit\",\"id\":";
  }
  AnnotationStore reopened(dir / "log.jsonl");
  const auto p = reopened.progress();
  EXPECT_EQ(p.total, 2u);
  EXPECT_EQ(p.done, 1u);
  EXPECT_EQ(p.in_progress, 1u);
  EXPECT_NEAR(reopened.task(id).human.laser, 0.7917, 5e-5);
}

TEST(Store, AnnotationTableReimportsToSameScore) {
  testing::TempDir dir;
  AnnotationStore store(dir / "log.jsonl");
  store.add_tasks(records(2), pack("hi"));
  EXPECT_THROW(store.export_annotation_table(), DataError);
  std::map<std::string, std::size_t> words;
  std::map<std::string, double> scores;
  while (auto t = store.next_task("ann")) {
    const auto done = store.submit(t->id, "ann", rule_labels(*t));
    words[done.id] = done.ref_tokens.size();
    scores[done.id] = done.human.laser;
  }
  std::istringstream in(store.export_annotation_table());
  const auto imported = import_human_annotations(in, words);
  ASSERT_EQ(imported.size(), 2u);
  for (const auto& a : imported) {
    EXPECT_TRUE(a.warnings.empty());
    EXPECT_DOUBLE_EQ(a.score.laser, scores[a.id]);
  }
  EXPECT_NEAR(scores["appA"], 0.7917, 5e-5);
  const auto pairs = store.export_pairs();
  EXPECT_NE(pairs.find("\"label\""), std::string::npos);
}

class ServerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    store_ = std::make_unique<AnnotationStore>(dir_ / "log.jsonl");
    store_->add_tasks(records(2), pack("hi"));
    server_ = std::make_unique<AnnotateServer>(*store_);
    port_ = server_->bind_any("127.0.0.1");
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }
  void TearDown() override {
    server_->stop();
    thread_.join();
  }

  json post_labels(const std::string& id, const std::string& annotator, const json& labels, int* status) {
    auto res = client_->Post(("/api/tasks/" + id + "/labels?annotator=" + annotator).c_str(),
                             json{{"labels", labels}}.dump(), "application/json");
    *status = res ? res->status : -1;
    return res && !res->body.empty() ? json::parse(res->body) : json();
  }

  testing::TempDir dir_;
  std::unique_ptr<AnnotationStore> store_;
  std::unique_ptr<AnnotateServer> server_;
  std::thread thread_;
  int port_ = 0;
  std::unique_ptr<httplib::Client> client_;
};

TEST_F(ServerTest, FullAnnotationFlow) {
  auto res = client_->Get("/api/tasks/next");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);  // no annotator

  res = client_->Get("/api/tasks/next?annotator=ann");
  ASSERT_EQ(res->status, 200);
  const auto task_json = json::parse(res->body);
  const std::string id = task_json["id"];
  EXPECT_EQ(task_json["status"], "in-progress");

  const auto task = store_->task(id);
  json labels = json::array();
  for (const auto& l : rule_labels(task)) {
    labels.push_back({{"pair", l.pair}, {"level", static_cast<int>(l.level)}, {"category", to_string(l.category)}});
  }
  int status = 0;
  post_labels(id, "intruder", labels, &status);
  EXPECT_EQ(status, 409);
  const auto bad = post_labels(id, "ann", json::array(), &status);
  EXPECT_EQ(status, 400);
  EXPECT_TRUE(bad.contains("problems"));
  const auto done = post_labels(id, "ann", labels, &status);
  EXPECT_EQ(status, 200);
  EXPECT_EQ(done["status"], "done");

  EXPECT_EQ(client_->Get("/api/tasks/nope")->status, 404);
  EXPECT_EQ(client_->Get(("/api/tasks/" + id).c_str())->status, 200);
  res = client_->Get("/api/export?format=appendixB");
  ASSERT_EQ(res->status, 200);
  EXPECT_NE(res->body.find(id), std::string::npos);
  EXPECT_EQ(client_->Get("/api/export?format=xml")->status, 400);
  const auto progress = json::parse(client_->Get("/api/progress")->body);
  EXPECT_EQ(progress["done"], 1);
  EXPECT_EQ(progress["total"], 2);
  EXPECT_EQ(client_->Get("/")->status, 200);
}

TEST_F(ServerTest, EmptyQueueAndEmptyExport) {
  EXPECT_EQ(client_->Get("/api/export?format=pairs")->status, 409);
  EXPECT_EQ(client_->Get("/api/tasks/next?annotator=a")->status, 200);
  EXPECT_EQ(client_->Get("/api/tasks/next?annotator=b")->status, 200);
  EXPECT_EQ(client_->Get("/api/tasks/next?annotator=c")->status, 204);
}

}  // namespace
}  // namespace laser
