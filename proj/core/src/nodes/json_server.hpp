#pragma once

// JSON request/response server on a background thread. Handler exceptions
// map to statuses: NotFoundError 404, DecodeError/ArgumentError 400,
// anything else 500; the body is {"error": message}.

#include <httplib.h>

#include <nlohmann/json.hpp>

#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "signcast/errors.hpp"

namespace signcast::nodes::internal {

struct JsonRequest {
  std::string path;
  nlohmann::json body;                        // null for GET
  std::map<std::string, std::string> params;  // query parameters
  std::vector<std::string> matches;           // regex captures, [0] = whole path
};

class JsonServer {
 public:
  using Handler = std::function<nlohmann::json(const JsonRequest&)>;

  JsonServer() = default;
  JsonServer(const JsonServer&) = delete;
  JsonServer& operator=(const JsonServer&) = delete;
  ~JsonServer() { Stop(); }

  void Get(const std::string& pattern, Handler h) {
    server_.Get(pattern, [h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      Dispatch(h, req, res, false);
    });
  }
  void Post(const std::string& pattern, Handler h) {
    server_.Post(pattern, [h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      Dispatch(h, req, res, true);
    });
  }

  // Binds host:port (port 0 picks a free port) and serves until Stop().
  int Start(const std::string& host, int port) {
    int bound = port;
    if (port == 0) {
      bound = server_.bind_to_any_port(host);
    } else if (!server_.bind_to_port(host, port)) {
      bound = -1;
    }
    if (bound < 0) throw ConfigError("cannot bind " + host + ":" + std::to_string(port));
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    return bound;
  }

  void Stop() {
    if (thread_.joinable()) {
      server_.stop();
      thread_.join();
    }
  }

 private:
  static void Dispatch(const Handler& h, const httplib::Request& req, httplib::Response& res, bool has_body) {
    int status = 200;
    nlohmann::json out;
    try {
      JsonRequest jr;
      jr.path = req.path;
      for (const auto& [k, v] : req.params) jr.params[k] = v;
      for (const auto& m : req.matches) jr.matches.push_back(m.str());
      if (has_body) {
        jr.body = nlohmann::json::parse(req.body, nullptr, false);
        if (jr.body.is_discarded()) throw DecodeError("request body is not valid JSON");
      }
      out = h(jr);
    } catch (const NotFoundError& e) {
      status = 404;
      out = {{"error", e.what()}};
    } catch (const DecodeError& e) {
      status = 400;
      out = {{"error", e.what()}};
    } catch (const ArgumentError& e) {
      status = 400;
      out = {{"error", e.what()}};
    } catch (const std::exception& e) {
      status = 500;
      out = {{"error", e.what()}};
    }
    res.status = status;
    res.set_content(out.dump(), "application/json");
  }

  httplib::Server server_;
  std::thread thread_;
};

}  // namespace signcast::nodes::internal
