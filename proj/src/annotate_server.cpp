// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#include <fmt/format.h>

#include "httplib.h"
#include "laser/annotate.hpp"

namespace laser {
namespace {

using nlohmann::json;

constexpr const char* kPlaceholder =
    "<!doctype html><html><head><meta charset=\"utf-8\"><title>laser annotate</title></head>"
    "<body><h1>laser annotate</h1><p>The annotation API is running under <code>/api</code>. "
    "No UI bundle was configured.</p></body></html>";

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message,
                const std::vector<std::string>& problems = {}) {
  json body = {{"error", message}};
  if (!problems.empty()) body["problems"] = problems;
  send_json(res, status, body);
}

std::string annotator_of(const httplib::Request& req, const json* body = nullptr) {
  if (req.has_param("annotator")) return req.get_param_value("annotator");
  if (req.has_header("X-Annotator")) return req.get_header_value("X-Annotator");
  if (body && body->is_object() && body->contains("annotator") && (*body)["annotator"].is_string()) {
    return (*body)["annotator"].get<std::string>();
  }
  return {};
}

}  // namespace

AnnotateServer::AnnotateServer(AnnotationStore& store, std::filesystem::path ui_dir)
    : store_(store), ui_dir_(std::move(ui_dir)), server_(std::make_unique<httplib::Server>()) {
  routes();
}

AnnotateServer::~AnnotateServer() = default;

void AnnotateServer::routes() {
  auto& s = *server_;

  s.Get("/api/tasks/next", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string annotator = annotator_of(req);
    if (annotator.empty()) return send_error(res, 400, "annotator id required");
    auto task = store_.next_task(annotator);
    if (!task) {
      res.status = 204;
      return;
    }
    send_json(res, 200, task_to_json(*task));
  });

  s.Get(R"(/api/tasks/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      send_json(res, 200, task_to_json(store_.task(req.matches[1])));
    } catch (const NotFoundError& e) {
      send_error(res, 404, e.what());
    }
  });

  s.Post(R"(/api/tasks/([^/]+)/labels)", [this](const httplib::Request& req, httplib::Response& res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::exception& e) {
      return send_error(res, 400, fmt::format("body is not JSON: {}", e.what()));
    }
    const std::string annotator = annotator_of(req, &body);
    if (annotator.empty()) return send_error(res, 400, "annotator id required");
    if (!body.is_object() || !body.contains("labels") || !body["labels"].is_array()) {
      return send_error(res, 400, "body must carry a labels array");
    }
    try {
      std::vector<AnnotationLabel> labels;
      for (const auto& lj : body["labels"]) labels.push_back(label_from_json(lj));
      const auto task = store_.submit(req.matches[1], annotator, std::move(labels), body.value("note", ""));
      send_json(res, 200, task_to_json(task));
    } catch (const ValidationError& e) {
      send_error(res, 400, e.what(), e.problems());
    } catch (const NotFoundError& e) {
      send_error(res, 404, e.what());
    } catch (const ConflictError& e) {
      send_error(res, 409, e.what());
    }
  });

  s.Get("/api/export", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string format = req.has_param("format") ? req.get_param_value("format") : "appendixB";
    try {
      if (format == "appendixB") {
        res.set_content(store_.export_annotation_table(), "text/tab-separated-values; charset=utf-8");
      } else if (format == "pairs") {
        res.set_content(store_.export_pairs(), "application/x-ndjson");
      } else {
        return send_error(res, 400, fmt::format("unknown export format '{}'", format));
      }
    } catch (const DataError& e) {
      send_error(res, 409, e.what());
    }
  });

  s.Get("/api/progress", [this](const httplib::Request&, httplib::Response& res) {
    const auto p = store_.progress();
    send_json(res, 200,
              {{"total", p.total},
               {"pending", p.pending},
               {"in_progress", p.in_progress},
               {"done", p.done},
               {"done_by_annotator", p.done_by_annotator}});
  });

  if (!ui_dir_.empty() && std::filesystem::is_directory(ui_dir_)) {
    s.set_mount_point("/", ui_dir_.string());
  } else {
    s.Get("/", [](const httplib::Request&, httplib::Response& res) { res.set_content(kPlaceholder, "text/html"); });
  }

  s.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const ValidationError& e) {
      send_error(res, 400, e.what(), e.problems());
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    } catch (...) {
      send_error(res, 500, "unknown error");
    }
  });
}

bool AnnotateServer::listen(const std::string& host, int port) { return server_->listen(host, port); }

int AnnotateServer::bind_any(const std::string& host) { return server_->bind_to_any_port(host); }

bool AnnotateServer::listen_after_bind() { return server_->listen_after_bind(); }

void AnnotateServer::stop() { server_->stop(); }

void AnnotateServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace laser
