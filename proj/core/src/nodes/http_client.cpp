#include "signcast/nodes/http_client.hpp"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <mutex>
#include <thread>

namespace signcast::nodes {
namespace {

std::mutex& TapMutex() {
  static std::mutex mu;
  return mu;
}

HttpClient::Tap& GlobalTap() {
  static HttpClient::Tap tap;
  return tap;
}

void Observe(const std::string& direction, const std::string& path, const std::string& body) {
  std::lock_guard lock(TapMutex());
  if (GlobalTap()) GlobalTap()(direction, path, body);
}

nlohmann::json ParseBody(const std::string& body) {
  nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded()) throw DecodeError("peer sent invalid JSON");
  return j;
}

}  // namespace

struct HttpClient::Impl {
  std::mutex mu;  // httplib::Client is not safe for concurrent requests
  httplib::Client client;

  Impl(const std::string& url, int timeout_ms) : client(url) {
    const auto sec = timeout_ms / 1000;
    const auto usec = (timeout_ms % 1000) * 1000;
    client.set_connection_timeout(sec, usec);
    client.set_read_timeout(sec, usec);
    client.set_write_timeout(sec, usec);
    client.set_keep_alive(false);
  }
};

HttpClient::HttpClient(std::string base_url, RetryPolicy retry, int timeout_ms)
    : base_url_(std::move(base_url)), retry_(retry), impl_(std::make_unique<Impl>(base_url_, timeout_ms)) {
  if (!impl_->client.is_valid()) throw ConfigError("invalid peer URL: " + base_url_);
}

HttpClient::~HttpClient() = default;
HttpClient::HttpClient(HttpClient&&) noexcept = default;
HttpClient& HttpClient::operator=(HttpClient&&) noexcept = default;

void HttpClient::SetGlobalTap(Tap tap) {
  std::lock_guard lock(TapMutex());
  GlobalTap() = std::move(tap);
}

nlohmann::json HttpClient::GetJson(const std::string& path) const {
  int backoff = retry_.initial_backoff_ms;
  std::string last_error;
  for (int attempt = 0; attempt < std::max(1, retry_.attempts); ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
      backoff = std::min(backoff * 2, retry_.max_backoff_ms);
    }
    httplib::Result res;
    {
      std::lock_guard lock(impl_->mu);
      res = impl_->client.Get(path);
    }
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    Observe("recv", path, res->body);
    if (res->status < 200 || res->status >= 300) throw HttpStatusError(res->status, res->body);
    return ParseBody(res->body);
  }
  throw NetworkError("GET " + base_url_ + path + " failed: " + last_error);
}

nlohmann::json HttpClient::PostJson(const std::string& path, const nlohmann::json& body) const {
  const std::string payload = body.dump();
  Observe("send", path, payload);
  int backoff = retry_.initial_backoff_ms;
  std::string last_error;
  for (int attempt = 0; attempt < std::max(1, retry_.attempts); ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
      backoff = std::min(backoff * 2, retry_.max_backoff_ms);
    }
    httplib::Result res;
    {
      std::lock_guard lock(impl_->mu);
      res = impl_->client.Post(path, payload, "application/json");
    }
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    Observe("recv", path, res->body);
    if (res->status < 200 || res->status >= 300) throw HttpStatusError(res->status, res->body);
    return ParseBody(res->body);
  }
  throw NetworkError("POST " + base_url_ + path + " failed: " + last_error);
}

}  // namespace signcast::nodes
