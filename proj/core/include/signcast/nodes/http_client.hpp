#pragma once

// Small JSON HTTP client with retry and exponential backoff on transport
// failures. HTTP error statuses are not retried.

#include <nlohmann/json.hpp>

#include <functional>
#include <memory>
#include <string>

#include "signcast/errors.hpp"

namespace signcast::nodes {

// Connection refused, timed out or reset after every retry.
class NetworkError : public Error {
 public:
  using Error::Error;
};

// Peer answered with a non-2xx status.
class HttpStatusError : public Error {
 public:
  HttpStatusError(int status, std::string body)
      : Error("HTTP " + std::to_string(status) + ": " + body), status_(status), body_(std::move(body)) {}
  int status() const { return status_; }
  const std::string& body() const { return body_; }

 private:
  int status_;
  std::string body_;
};

struct RetryPolicy {
  int attempts = 5;
  int initial_backoff_ms = 100;
  int max_backoff_ms = 2000;
};

class HttpClient {
 public:
  // base_url like "http://127.0.0.1:8080".
  explicit HttpClient(std::string base_url, RetryPolicy retry = {}, int timeout_ms = 15000);
  ~HttpClient();
  HttpClient(HttpClient&&) noexcept;
  HttpClient& operator=(HttpClient&&) noexcept;

  const std::string& base_url() const { return base_url_; }

  nlohmann::json GetJson(const std::string& path) const;
  nlohmann::json PostJson(const std::string& path, const nlohmann::json& body) const;

  // Observer for every message body sent or received; used by tests that
  // audit wire contents.
  using Tap = std::function<void(const std::string& direction, const std::string& path, const std::string& body)>;
  static void SetGlobalTap(Tap tap);

 private:
  struct Impl;
  std::string base_url_;
  RetryPolicy retry_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace signcast::nodes
