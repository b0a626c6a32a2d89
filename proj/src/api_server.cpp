#include "tensecon/api_server.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <httplib.h>

#include "tensecon/error.hpp"

namespace tensecon {

using nlohmann::json;

namespace {

constexpr const char* kSchemaVersion = "1";

ApiResponse error_response(int status, const char* code, const std::string& message) {
  return {status,
          {{"schema_version", kSchemaVersion}, {"error", {{"code", code}, {"message", message}}}}};
}

json parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON body: ") + e.what());
  }
}

json summary(const SessionSnapshot& s) {
  json parent = nullptr;
  if (s.parent) parent = {{"id", s.parent->id}, {"step", s.parent->step}};
  return {{"schema_version", kSchemaVersion},
          {"id", s.id},
          {"scenario", s.scenario_name},
          {"step", s.step},
          {"max_steps", s.scenario->config.steps},
          {"parent", parent},
          {"taxonomy", taxonomy_to_json(s.scenario->config.taxonomy)}};
}

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string default_scenario_dir() { return TENSECON_DEFAULT_SCENARIO_DIR; }

std::map<std::string, std::shared_ptr<const Scenario>> load_scenario_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("scenario directory not found: " + dir);
  std::map<std::string, std::shared_ptr<const Scenario>> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
    try {
      out.emplace(entry.path().stem().string(),
                  std::make_shared<const Scenario>(read_scenario(read_text(entry.path()))));
    } catch (const ValidationError& e) {
      throw ValidationError(entry.path().filename().string() + ": " + e.what());
    }
  }
  return out;
}

ApiServer::ApiServer(ApiOptions options)
    : options_(std::move(options)),
      named_(options_.scenario_dir.empty() ? decltype(named_){}
                                           : load_scenario_dir(options_.scenario_dir)),
      store_(options_.session_capacity),
      http_(std::make_unique<httplib::Server>()) {
  install_routes();
}

ApiServer::~ApiServer() { stop(); }

template <typename F>
ApiResponse ApiServer::guarded(F&& f) {
  try {
    return f();
  } catch (const SessionNotFound& e) {
    return error_response(404, "not_found", e.what());
  } catch (const SessionExhausted& e) {
    return error_response(409, "conflict", e.what());
  } catch (const ValidationError& e) {
    return error_response(400, "bad_request", e.what());
  } catch (const InvalidArgument& e) {
    return error_response(400, "bad_request", e.what());
  }
}

ApiResponse ApiServer::handle_create(const std::string& body) {
  return guarded([&]() -> ApiResponse {
    const json req = parse_body(body);
    if (!req.is_object()) throw ValidationError("request body must be a JSON object");
    for (const auto& [key, _] : req.items()) {
      if (key != "scenario" && key != "seed") throw ValidationError("unknown key '" + key + "'");
    }
    const auto it = req.find("scenario");
    if (it == req.end()) throw ValidationError("scenario: missing required field");

    std::shared_ptr<const Scenario> scenario;
    std::string name;
    if (it->is_string()) {
      name = it->get<std::string>();
      const auto found = named_.find(name);
      if (found == named_.end()) {
        return error_response(404, "not_found", "no scenario named '" + name + "'");
      }
      scenario = found->second;
    } else if (it->is_object()) {
      auto parsed = std::make_shared<Scenario>(read_scenario(it->dump()));
      name = parsed->config.name.empty() ? "inline" : parsed->config.name;
      scenario = std::move(parsed);
    } else {
      throw ValidationError("scenario: expected a name or an object");
    }
    if (const auto seed = req.find("seed"); seed != req.end()) {
      if (!seed->is_number_unsigned()) throw ValidationError("seed: expected an unsigned integer");
      auto copy = std::make_shared<Scenario>(*scenario);
      copy->config.seed = seed->get<std::uint64_t>();
      scenario = std::move(copy);
    }
    return {201, summary(store_.create(std::move(scenario), name))};
  });
}

ApiResponse ApiServer::handle_step(const std::string& id, const std::string& body) {
  return guarded([&]() -> ApiResponse {
    const json req = parse_body(body);
    if (!req.is_object()) throw ValidationError("request body must be a JSON object");
    const SessionSnapshot snap = store_.snapshot(id);
    const SimConfig& cfg = snap.scenario->config;
    StepInput input;
    for (const auto& [key, value] : req.items()) {
      if (key == "actions") {
        if (!value.is_array()) throw ValidationError("actions: expected an array");
        for (std::size_t a = 0; a < value.size(); ++a) {
          input.actions.push_back(
              action_from_json(value[a], cfg.taxonomy, "actions[" + std::to_string(a) + "]"));
        }
      } else if (key == "feedback") {
        if (!value.is_null()) {
          input.feedback = feedback_from_json(value, cfg.taxonomy.sectors.size(),
                                              cfg.taxonomy.agents.size(), "feedback");
        }
      } else {
        throw ValidationError("unknown key '" + key + "'");
      }
    }
    const IndicatorFrame frame = store_.step(id, input);
    return {200,
            {{"schema_version", kSchemaVersion},
             {"id", id},
             {"step", frame.step + 1},
             {"frame", frame_to_json(frame, cfg.taxonomy)}}};
  });
}

ApiResponse ApiServer::handle_fork(const std::string& id, const std::string& body) {
  return guarded([&]() -> ApiResponse {
    const json req = parse_body(body);
    if (!req.is_object()) throw ValidationError("request body must be a JSON object");
    for (const auto& [key, _] : req.items()) {
      if (key != "at_step") throw ValidationError("unknown key '" + key + "'");
    }
    const auto at = req.find("at_step");
    if (at == req.end() || !at->is_number_integer()) {
      throw ValidationError("at_step: expected an integer");
    }
    const auto step = at->get<std::int64_t>();
    if (step < 0 || step > std::numeric_limits<int>::max()) {
      throw InvalidArgument("at_step " + std::to_string(step) + " out of range");
    }
    return {201, summary(store_.fork(id, static_cast<int>(step)))};
  });
}

ApiResponse ApiServer::handle_series(const std::string& id) {
  return guarded([&]() -> ApiResponse {
    const SessionSnapshot snap = store_.snapshot(id);
    json frames = json::array();
    for (const auto& f : snap.history) {
      frames.push_back(frame_to_json(f, snap.scenario->config.taxonomy));
    }
    json out = summary(snap);
    out["frames"] = std::move(frames);
    return {200, std::move(out)};
  });
}

ApiResponse ApiServer::handle_scenarios() const {
  json names = json::array();
  for (const auto& [name, s] : named_) {
    names.push_back({{"name", name}, {"steps", s->config.steps}});
  }
  return {200, {{"schema_version", kSchemaVersion}, {"scenarios", names}}};
}

ApiResponse ApiServer::handle_health() const {
  return {200, {{"schema_version", kSchemaVersion}, {"status", "ok"}}};
}

void ApiServer::install_routes() {
  auto reply = [](httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };

  http_->Post("/sessions", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, handle_create(req.body));
  });
  http_->Post(R"(/sessions/([^/]+)/step)",
              [this, reply](const httplib::Request& req, httplib::Response& res) {
                reply(res, handle_step(req.matches[1], req.body));
              });
  http_->Post(R"(/sessions/([^/]+)/fork)",
              [this, reply](const httplib::Request& req, httplib::Response& res) {
                reply(res, handle_fork(req.matches[1], req.body));
              });
  http_->Get(R"(/sessions/([^/]+)/series)",
             [this, reply](const httplib::Request& req, httplib::Response& res) {
               reply(res, handle_series(req.matches[1]));
             });
  http_->Get("/scenarios", [this, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, handle_scenarios());
  });
  http_->Get("/healthz", [this, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, handle_health());
  });

  if (!options_.allow_origin.empty()) {
    http_->set_default_headers({{"Access-Control-Allow-Origin", options_.allow_origin},
                                {"Vary", "Origin"}});
    http_->Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
    });
  }

  http_->set_error_handler([reply](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    const int status = res.status;
    reply(res, error_response(status, status == 404 ? "not_found" : "bad_request",
                              "no route for " + req.method + " " + req.path));
  });
  http_->set_exception_handler(
      [reply](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "internal error";
        try {
          if (ep) std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          what = e.what();
        } catch (...) {
        }
        reply(res, error_response(500, "internal", what));
      });
}

bool ApiServer::listen(const std::string& host, int port) { return http_->listen(host, port); }

int ApiServer::bind_any_port(const std::string& host) { return http_->bind_to_any_port(host); }

bool ApiServer::listen_after_bind() { return http_->listen_after_bind(); }

void ApiServer::stop() {
  if (http_) http_->stop();
}

void ApiServer::wait_until_ready() const { http_->wait_until_ready(); }

}  // namespace tensecon
