#pragma once

#include <memory>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "tensecon/api_server.hpp"

namespace testutil {

/// An ApiServer listening on an ephemeral loopback port for one test.
class LiveServer {
 public:
  explicit LiveServer(tensecon::ApiOptions opts = default_options()) : server_(std::move(opts)) {
    port_ = server_.bind_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }
  ~LiveServer() {
    server_.stop();
    thread_.join();
  }

  static tensecon::ApiOptions default_options() {
    tensecon::ApiOptions o;
    o.scenario_dir = tensecon::default_scenario_dir();
    return o;
  }

  struct Reply {
    int status = 0;
    nlohmann::json body;
    std::string raw;
    std::string header(const std::string& key) const { return headers.count(key) ? headers.find(key)->second : ""; }
    httplib::Headers headers;
  };

  Reply post(const std::string& path, const std::string& body) { return wrap(client_->Post(path, body, "application/json")); }
  Reply post(const std::string& path, const nlohmann::json& body) { return post(path, body.dump()); }
  Reply get(const std::string& path) { return wrap(client_->Get(path)); }
  Reply options(const std::string& path) { return wrap(client_->Options(path)); }

  int port() const noexcept { return port_; }
  tensecon::ApiServer& server() noexcept { return server_; }

 private:
  static Reply wrap(const httplib::Result& r) {
    Reply out;
    if (!r) return out;
    out.status = r->status;
    out.raw = r->body;
    out.headers = r->headers;
    out.body = nlohmann::json::parse(r->body, nullptr, false);
    return out;
  }

  tensecon::ApiServer server_;
  int port_ = 0;
  std::thread thread_;
  std::unique_ptr<httplib::Client> client_;
};

}  // namespace testutil
