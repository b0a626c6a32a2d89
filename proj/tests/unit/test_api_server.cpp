#include <doctest.h>

#include <set>
#include <thread>

#include "live_server.hpp"
#include "tensecon/io_formats.hpp"
#include "test_util.hpp"

using namespace tensecon;
using nlohmann::json;
using testutil::LiveServer;

namespace {

std::string create(LiveServer& s, const json& body = {{"scenario", "crisis_demo"}}) {
  const auto r = s.post("/sessions", body);
  REQUIRE(r.status == 201);
  return r.body["id"].get<std::string>();
}

json step(LiveServer& s, const std::string& id, const json& body = json::object()) {
  const auto r = s.post("/sessions/" + id + "/step", body);
  REQUIRE(r.status == 200);
  return r.body;
}

void check_error(const LiveServer::Reply& r, int status, const char* code) {
  CHECK(r.status == status);
  CHECK(r.body["schema_version"] == "1");
  CHECK(r.body["error"]["code"] == code);
  CHECK(r.body["error"]["message"].is_string());
}

json inline_scenario() {
  return json::parse(testutil::slurp(testutil::source_path("scenarios/balanced.json")));
}

}  // namespace

TEST_CASE("health and scenario listing") {
  LiveServer s;
  const auto h = s.get("/healthz");
  CHECK(h.status == 200);
  CHECK(h.body == json{{"schema_version", "1"}, {"status", "ok"}});
  const auto list = s.get("/scenarios");
  CHECK(list.status == 200);
  std::set<std::string> names;
  for (const auto& e : list.body["scenarios"]) names.insert(e["name"]);
  CHECK(names == std::set<std::string>{"balanced", "crisis_demo", "green_transition", "pandemic_demo"});
  check_error(s.get("/nothing/here"), 404, "not_found");
}

TEST_CASE("create") {
  LiveServer s;
  const auto r = s.post("/sessions", json{{"scenario", "crisis_demo"}});
  CHECK(r.status == 201);
  CHECK(r.body["schema_version"] == "1");
  CHECK(r.body["step"] == 0);
  CHECK(r.body["max_steps"] == 40);
  CHECK(r.body["scenario"] == "crisis_demo");
  CHECK(r.body["parent"].is_null());
  CHECK(r.body["id"].get<std::string>().size() == 16);
  CHECK(create(s) != create(s));

  json bad = inline_scenario();
  bad["indicators"]["u0"] = 0.5;  // above u_max
  const auto inv = s.post("/sessions", json{{"scenario", bad}});
  check_error(inv, 400, "bad_request");
  CHECK(inv.body["error"]["message"].get<std::string>().find("u0") != std::string::npos);

  check_error(s.post("/sessions", json{{"scenario", "atlantis"}}), 404, "not_found");
  check_error(s.post("/sessions", std::string("{oops")), 400, "bad_request");
  check_error(s.post("/sessions", json{{"scenario", "crisis_demo"}, {"colour", 1}}), 400, "bad_request");
  check_error(s.post("/sessions", json::object()), 400, "bad_request");
  CHECK(s.post("/sessions", json{{"scenario", inline_scenario()}}).status == 201);
}

TEST_CASE("stepping matches the batch simulator") {
  LiveServer s;
  const std::string id = create(s);
  const std::string csv = testutil::slurp(testutil::source_path("tests/golden/crisis_demo_seed42.csv"));
  const Scenario sc = read_scenario(testutil::slurp(testutil::source_path("scenarios/crisis_demo.json")));
  std::vector<IndicatorFrame> frames;
  for (int k = 0; k < 40; ++k) {
    const json r = step(s, id);
    CHECK(r["step"] == k + 1);
    CHECK(r["schema_version"] == "1");
    frames.push_back(frame_from_json(r["frame"], sc.config.taxonomy));
  }
  CHECK(write_indicator_csv(frames) == csv);
  check_error(s.post("/sessions/" + id + "/step", json::object()), 409, "conflict");

  const auto series = s.get("/sessions/" + id + "/series");
  CHECK(series.status == 200);
  std::vector<IndicatorFrame> listed;
  for (const auto& f : series.body["frames"]) listed.push_back(frame_from_json(f, sc.config.taxonomy));
  CHECK(listed == frames);
  CHECK(series.body["step"] == 40);
}

TEST_CASE("step errors") {
  LiveServer s;
  const std::string id = create(s);
  check_error(s.post("/sessions/0123456789abcdef/step", json::object()), 404, "not_found");
  const json bailout{{"actions", {{{"kind", "bailout"}, {"magnitude", 5}, {"sectors", {"finance"}}, {"agents", {"business"}}}}}};
  check_error(s.post("/sessions/" + id + "/step", bailout), 400, "bad_request");
  const json unknown_sector{
      {"actions", {{{"kind", "spending"}, {"magnitude", 5}, {"sectors", {"mining"}}, {"agents", {"business"}}}}}};
  check_error(s.post("/sessions/" + id + "/step", unknown_sector), 400, "bad_request");
  check_error(s.post("/sessions/" + id + "/step", json{{"feedback", {{"gamma", "x"}}}}), 400, "bad_request");
  // Rejected requests do not advance the session.
  CHECK(s.get("/sessions/" + id + "/series").body["step"] == 0);
}

TEST_CASE("interventions and feedback move the frame") {
  LiveServer s;
  const std::string a = create(s), b = create(s);
  const json spend{{"actions", {{{"kind", "spending"}, {"magnitude", 3.0}, {"sectors", {"healthcare"}}, {"agents", {"household"}}}}}};
  const json fa = step(s, a, spend)["frame"];
  const json fb = step(s, b)["frame"];
  CHECK(fa["gdp_growth"].get<double>() > fb["gdp_growth"].get<double>());
  CHECK(fa["actions"].size() == 1);
  CHECK(fa["actions"][0]["kind"] == "spending");
  const json fc = step(s, a, json{{"feedback", {{"gamma", -0.1}}}})["frame"];
  const json fd = step(s, b)["frame"];
  CHECK(fc["gdp_growth"].get<double>() < fd["gdp_growth"].get<double>());
}

TEST_CASE("fork") {
  LiveServer s;
  const std::string id = create(s);
  const json spend{{"actions", {{{"kind", "subsidy"}, {"magnitude", 2.0}, {"sectors", {"retail"}}, {"agents", {"household", "business"}}}}}};
  std::vector<json> parent;
  for (int k = 0; k < 10; ++k) parent.push_back(step(s, id, k % 3 == 0 ? spend : json::object())["frame"]);

  SUBCASE("at 0 is a fresh session") {
    const auto r = s.post("/sessions/" + id + "/fork", json{{"at_step", 0}});
    CHECK(r.status == 201);
    CHECK(r.body["step"] == 0);
    CHECK(r.body["parent"] == json{{"id", id}, {"step", 0}});
    const std::string fresh = create(s);
    const std::string fork = r.body["id"];
    for (int k = 0; k < 5; ++k) CHECK(step(s, fork)["frame"] == step(s, fresh)["frame"]);
  }
  SUBCASE("replay then identical steps reproduce the parent") {
    const auto r = s.post("/sessions/" + id + "/fork", json{{"at_step", 4}});
    REQUIRE(r.status == 201);
    const std::string fork = r.body["id"];
    const auto series = s.get("/sessions/" + fork + "/series").body["frames"];
    REQUIRE(series.size() == 4);
    for (int k = 0; k < 4; ++k) CHECK(series[k] == parent[k]);
    for (int k = 4; k < 10; ++k) CHECK(step(s, fork, k % 3 == 0 ? spend : json::object())["frame"] == parent[k]);
  }
  SUBCASE("divergence stays isolated") {
    const std::string fork = s.post("/sessions/" + id + "/fork", json{{"at_step", 10}}).body["id"];
    step(s, fork, spend);
    CHECK(s.get("/sessions/" + id + "/series").body["frames"].size() == 10);
    CHECK(s.get("/sessions/" + fork + "/series").body["frames"].size() == 11);
  }
  SUBCASE("errors") {
    check_error(s.post("/sessions/" + id + "/fork", json{{"at_step", 11}}), 400, "bad_request");
    check_error(s.post("/sessions/" + id + "/fork", json{{"at_step", -1}}), 400, "bad_request");
    check_error(s.post("/sessions/" + id + "/fork", json{{"at_step", "3"}}), 400, "bad_request");
    check_error(s.post("/sessions/ffffffffffffffff/fork", json{{"at_step", 0}}), 404, "not_found");
  }
}

TEST_CASE("series") {
  LiveServer s;
  const std::string id = create(s);
  const auto fresh = s.get("/sessions/" + id + "/series");
  CHECK(fresh.status == 200);
  CHECK(fresh.body["frames"] == json::array());
  std::vector<json> got;
  for (int k = 0; k < 3; ++k) got.push_back(step(s, id)["frame"]);
  const auto after = s.get("/sessions/" + id + "/series").body["frames"];
  REQUIRE(after.size() == 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(after[k]["step"] == k);
    CHECK(after[k] == got[k]);
  }
  // Field-for-field agreement with the CSV rendering of the same frames.
  const std::string csv = testutil::slurp(testutil::source_path("tests/golden/crisis_demo_seed42.csv"));
  std::istringstream lines(csv);
  std::string header, row;
  std::getline(lines, header);
  CHECK(header == "step,gdp_growth,inflation,unemployment,trade_balance,economic_resistance,actions");
  for (int k = 0; k < 3; ++k) {
    std::getline(lines, row);
    char buf[64];
    std::string rebuilt = std::to_string(after[k]["step"].get<int>());
    for (const char* col : {"gdp_growth", "inflation", "unemployment", "trade_balance", "economic_resistance"}) {
      std::snprintf(buf, sizeof buf, ",%.9g", after[k][col].get<double>());
      rebuilt += buf;
    }
    CHECK(rebuilt + "," == row);
  }
  check_error(s.get("/sessions/nope/series"), 404, "not_found");
}

TEST_CASE("concurrent steps on one session are serialized") {
  LiveServer s;
  const std::string id = create(s);
  std::vector<std::thread> threads;
  std::vector<int> steps(8, -1);
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      httplib::Client c("127.0.0.1", s.port());
      const auto r = c.Post("/sessions/" + id + "/step", "{}", "application/json");
      if (r && r->status == 200) steps[t] = json::parse(r->body)["step"];
    });
  }
  for (auto& t : threads) t.join();
  CHECK(std::set<int>(steps.begin(), steps.end()) == std::set<int>{1, 2, 3, 4, 5, 6, 7, 8});
  const std::string csv = testutil::slurp(testutil::source_path("tests/golden/crisis_demo_seed42.csv"));
  const Scenario sc = read_scenario(testutil::slurp(testutil::source_path("scenarios/crisis_demo.json")));
  std::vector<IndicatorFrame> frames;
  for (const auto& f : s.get("/sessions/" + id + "/series").body["frames"]) frames.push_back(frame_from_json(f, sc.config.taxonomy));
  CHECK(write_indicator_csv(frames) == csv.substr(0, write_indicator_csv(frames).size()));
}

TEST_CASE("LRU eviction") {
  ApiOptions o = LiveServer::default_options();
  o.session_capacity = 2;
  LiveServer s(o);
  const std::string a = create(s), b = create(s);
  step(s, a);
  const std::string c = create(s);  // evicts b, the least recently used
  check_error(s.get("/sessions/" + b + "/series"), 404, "not_found");
  CHECK(s.get("/sessions/" + a + "/series").status == 200);
  CHECK(s.get("/sessions/" + c + "/series").status == 200);
}

TEST_CASE("CORS") {
  ApiOptions o = LiveServer::default_options();
  o.allow_origin = "http://localhost:5173";
  LiveServer s(o);
  CHECK(s.get("/healthz").header("Access-Control-Allow-Origin") == "http://localhost:5173");
  const auto pre = s.options("/sessions");
  CHECK(pre.status == 204);
  CHECK(pre.header("Access-Control-Allow-Methods").find("POST") != std::string::npos);
  LiveServer closed;
  CHECK(closed.get("/healthz").header("Access-Control-Allow-Origin").empty());
}
