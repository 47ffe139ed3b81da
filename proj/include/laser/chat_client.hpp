// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <string>

namespace laser {

// Request body: {"model", "messages": [{"role": "user", "content"}], "temperature"}.
std::string chat_request_body(const std::string& model, const std::string& prompt, double temperature);

// choices[0].message.content of a response body. Throws TransportError when
// the body does not have that shape.
std::string chat_response_content(const std::string& body);

// Sends a request body and returns the response body. Implementations must be
// safe to call from several threads.
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual std::string send(const std::string& request_body) = 0;
};

struct Endpoint {
  std::string scheme;
  std::string host;
  int port = 0;
  std::string path;
};

// Splits "http[s]://host[:port]/path". Throws ConfigError.
Endpoint parse_endpoint(const std::string& url);

class HttpChatClient final : public ChatClient {
 public:
  HttpChatClient(const std::string& url, std::string api_key, std::chrono::milliseconds timeout);
  std::string send(const std::string& request_body) override;

 private:
  Endpoint endpoint_;
  std::string api_key_;
  std::chrono::milliseconds timeout_;
};

}  // namespace laser
