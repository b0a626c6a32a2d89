#pragma once

#include <map>
#include <memory>
#include <string>

#include <json.hpp>

#include "tensecon/session_store.hpp"

namespace httplib {
class Server;
}

namespace tensecon {

struct ApiOptions {
  /// Directory of `<name>.json` scenarios served by name.
  std::string scenario_dir;
  /// Value of Access-Control-Allow-Origin; CORS is off when empty.
  std::string allow_origin;
  std::size_t session_capacity = 256;
};

/// A handler result: HTTP status plus JSON body.
struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

/// JSON-over-HTTP facade over SessionStore.
///
///   POST /sessions               {"scenario": name | object, "seed"?: n}   -> 201
///   POST /sessions/{id}/step     {"actions"?: [...], "feedback"?: {...}}   -> 200
///   POST /sessions/{id}/fork     {"at_step": k}                            -> 201
///   GET  /sessions/{id}/series                                             -> 200
///   GET  /scenarios, GET /healthz                                          -> 200
///
/// Every body carries "schema_version": "1". Errors are
/// {"error": {"code", "message"}} with 400 (bad_request), 404 (not_found) or
/// 409 (conflict).
///
/// The handle_* methods hold the routing-independent logic so they can be
/// driven without a socket.
class ApiServer {
 public:
  explicit ApiServer(ApiOptions options);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  ApiResponse handle_create(const std::string& body);
  ApiResponse handle_step(const std::string& id, const std::string& body);
  ApiResponse handle_fork(const std::string& id, const std::string& body);
  ApiResponse handle_series(const std::string& id);
  ApiResponse handle_scenarios() const;
  ApiResponse handle_health() const;

  /// Blocks serving on host:port until stop().
  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port and returns it; serve with listen_after_bind().
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

  const std::map<std::string, std::shared_ptr<const Scenario>>& scenarios() const noexcept {
    return named_;
  }

 private:
  void install_routes();
  template <typename F>
  ApiResponse guarded(F&& f);

  ApiOptions options_;
  std::map<std::string, std::shared_ptr<const Scenario>> named_;
  SessionStore store_;
  std::unique_ptr<httplib::Server> http_;
};

/// Scenarios found as `*.json` in dir, keyed by file stem. Throws
/// ValidationError on the first invalid file and IoError when dir is missing.
std::map<std::string, std::shared_ptr<const Scenario>> load_scenario_dir(const std::string& dir);

/// Compiled-in location of the shipped scenarios.
std::string default_scenario_dir();

}  // namespace tensecon
