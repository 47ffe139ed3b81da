// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#include "laser/chat_client.hpp"

#include <fmt/format.h>

#include <regex>

#include "httplib.h"
#include "json.hpp"
#include "laser/error.hpp"

namespace laser {

std::string chat_request_body(const std::string& model, const std::string& prompt, double temperature) {
  nlohmann::ordered_json body;
  body["model"] = model;
  body["messages"] = nlohmann::ordered_json::array({{{"role", "user"}, {"content", prompt}}});
  body["temperature"] = temperature;
  return body.dump();
}

std::string chat_response_content(const std::string& body) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(fmt::format("endpoint returned non-JSON body: {}", e.what()));
  }
  try {
    return doc.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw TransportError("endpoint response lacks choices[0].message.content");
  }
}

Endpoint parse_endpoint(const std::string& url) {
  static const std::regex re(R"(^(https?)://([^/:]+)(?::(\d+))?(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) throw ConfigError(fmt::format("invalid endpoint URL '{}'", url));
  Endpoint e;
  e.scheme = m[1];
  e.host = m[2];
  e.port = m[3].matched ? std::stoi(m[3]) : (e.scheme == "https" ? 443 : 80);
  e.path = m[4].matched ? std::string(m[4]) : "/";
  return e;
}

HttpChatClient::HttpChatClient(const std::string& url, std::string api_key, std::chrono::milliseconds timeout)
    : endpoint_(parse_endpoint(url)), api_key_(std::move(api_key)), timeout_(timeout) {}

std::string HttpChatClient::send(const std::string& request_body) {
  httplib::Client client(fmt::format("{}://{}:{}", endpoint_.scheme, endpoint_.host, endpoint_.port));
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  auto res = client.Post(endpoint_.path, headers, request_body, "application/json");
  if (!res) {
    throw TransportError(
        fmt::format("request to {} failed: {}", endpoint_.host, httplib::to_string(res.error())));
  }
  if (res->status != 200) {
    throw TransportError(fmt::format("endpoint {} answered HTTP {}", endpoint_.host, res->status));
  }
  return res->body;
}

}  // namespace laser
