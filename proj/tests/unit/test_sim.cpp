#include <doctest.h>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "tensecon/error.hpp"
#include "tensecon/io_formats.hpp"
#include "tensecon/sim.hpp"
#include "test_util.hpp"

using namespace tensecon;

namespace {

SimConfig grid_config(std::size_t sectors, std::size_t agents, double m, double r) {
  SimConfig cfg;
  cfg.name = "grid";
  for (std::size_t i = 0; i < sectors; ++i) cfg.taxonomy.sectors.push_back("s" + std::to_string(i));
  for (std::size_t j = 0; j < agents; ++j) cfg.taxonomy.agents.push_back("a" + std::to_string(j));
  cfg.taxonomy.periods = {"t0"};
  const Matrix mm(sectors, agents, m), rr(sectors, agents, r);
  cfg.initial = {mm, mm, mm, rr, rr, 1.0};
  cfg.steps = 10;
  return cfg;
}

// One sector, one agent, g = 2/1 - (0.5 + 0.5)/1 = 1.
SimConfig unit_config() {
  SimConfig cfg = grid_config(1, 1, 0.5, 1.0);
  cfg.initial.m1 = Matrix(1, 1, 2.0);
  cfg.indicators.okun_b = 0.5;
  return cfg;
}

const std::vector<PolicyAction> kNoActions;
const std::vector<Shock> kNoShocks;

double sum(const Matrix& m) { return std::accumulate(m.values().begin(), m.values().end(), 0.0); }

Scenario load(const char* name) {
  return read_scenario(testutil::slurp(testutil::source_path(std::string("scenarios/") + name)));
}

}  // namespace

TEST_CASE("init_state") {
  const SimConfig cfg = grid_config(2, 2, 1.0, 1.0);
  const EconomyState s = init_state(cfg);
  CHECK(s.step == 0);
  CHECK(s.g_prev_total == -4.0);
  CHECK(s.u_prev == cfg.indicators.u0);
  CHECK(s.inputs == cfg.initial);
  CHECK(init_state(cfg) == s);
}

TEST_CASE("SimConfig validation names the field") {
  SimConfig cfg = grid_config(2, 2, 1.0, 1.0);
  cfg.indicators.u0 = 1.5;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("indicators.u0"), ValidationError);
  cfg = grid_config(2, 2, 1.0, 1.0);
  cfg.initial.r2 = Matrix(2, 2, 0.0);
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("inputs.r2"), ValidationError);
  cfg = grid_config(2, 2, 1.0, 1.0);
  cfg.steps = 0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("steps"), ValidationError);
  cfg = grid_config(2, 2, 1.0, 1.0);
  cfg.initial.m1 = Matrix(3, 2, 1.0);
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("inputs.m1"), ValidationError);
}

TEST_CASE("derive_indicators") {
  SimConfig cfg = grid_config(2, 1, 1.0, 1.0);
  cfg.indicators.okun_b = 0.4;
  Xoshiro256ss rng(1);
  const MomentumMatrix g{Matrix::from_rows({{1.5}, {-0.5}})};
  SUBCASE("unchanged total") {
    const auto d = derive_indicators(1.0, 0.1, g, cfg.initial, cfg, rng);
    CHECK(d.gdp_growth == 0.0);
    CHECK(d.inflation == cfg.indicators.pi_star - 0.5 * cfg.indicators.g_star);
    CHECK(d.unemployment == doctest::Approx(0.1 + 0.4 * cfg.indicators.g_star).epsilon(1e-15));
    CHECK(d.trade_balance == 0.0);
    CHECK(d.economic_resistance == 1.0);
  }
  SUBCASE("okun_b zero holds unemployment") {
    cfg.indicators.okun_b = 0.0;
    CHECK(derive_indicators(0.25, 0.07, g, cfg.initial, cfg, rng).unemployment == 0.07);
  }
  SUBCASE("growth, trade and clamping") {
    cfg.indicators.export_sectors = {"s0"};
    cfg.indicators.import_propensity = 0.2;
    cfg.indicators.u_max = 0.3;
    const auto d = derive_indicators(0.5, 0.29, g, cfg.initial, cfg, rng);
    CHECK(d.gdp_growth == 1.0);
    CHECK(d.trade_balance == doctest::Approx(1.5 - 0.2 * 1.5).epsilon(1e-15));
    CHECK(d.unemployment == 0.0);  // 0.29 - 0.4 * 0.995 clamps at u_min
    CHECK(derive_indicators(-0.5, 0.1, g, cfg.initial, cfg, rng).gdp_growth == 3.0);
    CHECK(derive_indicators(0.0, 0.1, g, cfg.initial, cfg, rng).gdp_growth == 1.0 / kGrowthEpsilon);
  }
  SUBCASE("always draws two normals") {
    Xoshiro256ss a(9), b(9);
    derive_indicators(1.0, 0.1, g, cfg.initial, cfg, a);
    b.normal();
    b.normal();
    CHECK(a == b);
  }
  SUBCASE("noise in draw order") {
    cfg.indicators.noise_sd = 0.01;
    Xoshiro256ss a(9), b(9);
    const auto d = derive_indicators(1.0, 0.1, g, cfg.initial, cfg, a);
    const double n1 = b.normal(), n2 = b.normal();
    CHECK(d.inflation == cfg.indicators.pi_star - 0.5 * cfg.indicators.g_star + 0.01 * n1);
    CHECK(d.unemployment == std::clamp(0.1 + 0.4 * cfg.indicators.g_star + 0.01 * n2, 0.0, 1.0));
  }
}

TEST_CASE("one step on a 1x1 grid") {
  const SimConfig cfg = unit_config();
  const EconomyState s0 = init_state(cfg);
  REQUIRE(s0.g_prev_total == 1.0);
  auto [s1, f0] = step(cfg, s0, kNoActions, std::nullopt, kNoShocks);
  CHECK(f0.step == 0);
  CHECK(f0.gdp_growth == 0.0);
  CHECK(f0.inflation == doctest::Approx(0.02 - 0.0025).epsilon(1e-15));
  CHECK(f0.unemployment == doctest::Approx(0.06 + 0.0025).epsilon(1e-15));
  CHECK(s1.inputs.m1(0, 0) == 2.0 * 1.005);
  CHECK(s1.step == 1);
  // m1 drifted to 2.01, so g = 1.01 and growth is 1%.
  auto [s2, f1] = step(cfg, s1, kNoActions, std::nullopt, kNoShocks);
  CHECK(f1.gdp_growth == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(f1.inflation == doctest::Approx(0.02 + 0.5 * 0.005).epsilon(1e-12));
  CHECK(f1.unemployment == doctest::Approx(0.0625 - 0.5 * 0.005).epsilon(1e-12));
  CHECK(s2.g_prev_total == doctest::Approx(1.01).epsilon(1e-15));
}

TEST_CASE("step is deterministic and zero spending is the identity") {
  SimConfig cfg = grid_config(3, 2, 1.0, 1.5);
  cfg.indicators.noise_sd = 0.01;
  cfg.seed = 99;
  const EconomyState s = init_state(cfg);
  const std::vector<PolicyAction> spend{{ActionKind::spending, 25.0, {0, 1}, {1}}};
  const auto a = step(cfg, s, spend, std::nullopt, kNoShocks);
  const auto b = step(cfg, s, spend, std::nullopt, kNoShocks);
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);

  const std::vector<PolicyAction> zero{{ActionKind::spending, 0.0, {0}, {0}}};
  auto with_zero = step(cfg, s, zero, std::nullopt, kNoShocks).second;
  const auto plain = step(cfg, s, kNoActions, std::nullopt, kNoShocks).second;
  with_zero.actions.clear();
  CHECK(with_zero == plain);
}

TEST_CASE("spending never lowers m1 and is transient") {
  SimConfig cfg = grid_config(2, 2, 1.0, 1.0);
  const EconomyState s = init_state(cfg);
  const std::vector<PolicyAction> spend{{ActionKind::spending, 10.0, {1}, {0, 1}}};
  const auto [plan, reg] = action_to_plans(spend[0], cfg.taxonomy);
  const Matrix raised = apply_stimulus(s.inputs.m1, plan);
  for (std::size_t c = 0; c < raised.size(); ++c) CHECK(raised.values()[c] >= s.inputs.m1.values()[c]);
  const auto with = step(cfg, s, spend, std::nullopt, kNoShocks);
  const auto without = step(cfg, s, kNoActions, std::nullopt, kNoShocks);
  CHECK(with.first.inputs == without.first.inputs);
  CHECK(with.second.gdp_growth > without.second.gdp_growth);
}

TEST_CASE("feedback shifts total momentum") {
  SimConfig cfg = grid_config(2, 2, 1.0, 1.0);
  const EconomyState s = init_state(cfg);
  const FeedbackPlan fb{0.5, Matrix(2, 2, 1.0)};
  const auto [next, frame] = step(cfg, s, kNoActions, fb, kNoShocks);
  CHECK(next.g_prev_total == -4.0 + 2.0);
  CHECK(frame.gdp_growth == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("apply_shock") {
  SimConfig cfg = grid_config(3, 2, 1.0, 1.0);
  cfg.taxonomy.service_sectors = {"s0"};
  cfg.taxonomy.brown_sectors = {"s1"};
  cfg.taxonomy.green_sectors = {"s2"};
  std::mt19937_64 gen(6);
  MomentumInputs inp = cfg.initial;
  inp.m1 = Matrix(3, 2, testutil::random_vector(gen, 6, 0.5, 4.0));
  inp.r1 = Matrix(3, 2, testutil::random_vector(gen, 6, 0.5, 4.0));

  SUBCASE("severity zero leaves inputs unchanged") {
    for (ShockKind k : {ShockKind::financial_crisis, ShockKind::pandemic, ShockKind::green_transition})
      CHECK(apply_shock(inp, {k, 0, 3, 0.0}, cfg) == inp);
  }
  SUBCASE("crisis severity 1 doubles resistance") {
    const auto out = apply_shock(inp, {ShockKind::financial_crisis, 0, 1, 1.0}, cfg);
    for (std::size_t c = 0; c < 6; ++c) {
      CHECK(out.r1.values()[c] == 2.0 * inp.r1.values()[c]);
      CHECK(out.r2.values()[c] == 2.0 * inp.r2.values()[c]);
    }
    CHECK(out.m1 == inp.m1);
  }
  SUBCASE("pandemic hits services harder") {
    const auto out = apply_shock(inp, {ShockKind::pandemic, 0, 1, 0.4}, cfg);
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(out.m1(0, j) == inp.m1(0, j) * 0.6);
      CHECK(out.m1(1, j) == inp.m1(1, j) * 0.8);
      CHECK(out.m1(2, j) == inp.m1(2, j) * 0.8);
    }
    const auto severe = apply_shock(inp, {ShockKind::pandemic, 0, 1, 5.0}, cfg);
    for (double v : severe.m1.values()) CHECK(v > 0.0);
  }
  SUBCASE("green transition conserves m1 over a full run") {
    const Shock green{ShockKind::green_transition, 0, 8, 1.0};
    MomentumInputs cur = inp;
    for (int k = 0; k < 12; ++k) {
      if (green.active_at(k)) cur = apply_shock(cur, green, cfg);
      CHECK(testutil::close_rel(sum(cur.m1), sum(inp.m1), 1e-9));
    }
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(cur.m1(1, j) < inp.m1(1, j));
      CHECK(cur.m1(2, j) > inp.m1(2, j));
      CHECK(cur.m1(0, j) == inp.m1(0, j));
    }
  }
  SUBCASE("sim with a green transition conserves m1 apart from drift") {
    cfg.indicators.g_star = 0.0;
    cfg.initial = inp;
    const std::vector<Shock> shocks{{ShockKind::green_transition, 2, 5, 0.8}};
    EconomyState s = init_state(cfg);
    for (int k = 0; k < 10; ++k) s = step(cfg, s, kNoActions, std::nullopt, shocks).first;
    CHECK(testutil::close_rel(sum(s.inputs.m1), sum(inp.m1), 1e-9));
  }
}

TEST_CASE("run") {
  SimConfig cfg = grid_config(2, 2, 1.0, 1.2);
  cfg.initial.m1 = Matrix(2, 2, 3.0);
  cfg.indicators.noise_sd = 0.003;
  cfg.seed = 5;
  SUBCASE("single step") {
    cfg.steps = 1;
    CHECK(run(cfg, kNoShocks, {}).size() == 1);
  }
  SUBCASE("deterministic") {
    const Schedule sched{{3, {{{ActionKind::tax_cut, 40.0, {0}, {1}}}, std::nullopt}}};
    const auto a = run(cfg, kNoShocks, sched);
    CHECK(a == run(cfg, kNoShocks, sched));
    CHECK(a.size() == 10);
    CHECK(a[3].actions.size() == 1);
    CHECK(a[2].actions.empty());
  }
  SUBCASE("crisis raises resistance only while active and leaves the past alone") {
    cfg.indicators.noise_sd = 0.0;
    cfg.steps = 15;
    const std::vector<Shock> crisis{{ShockKind::financial_crisis, 5, 4, 0.5}};
    const auto base = run(cfg, kNoShocks, {});
    const auto hit = run(cfg, crisis, {});
    for (int k = 0; k < 5; ++k) CHECK(hit[k] == base[k]);
    for (int k = 5; k < 9; ++k) CHECK(hit[k].economic_resistance > base[k].economic_resistance);
    for (int k = 5; k < 9; ++k) CHECK(hit[k].economic_resistance == doctest::Approx(1.5 * 1.2).epsilon(1e-15));
    for (int k = 9; k < 15; ++k) CHECK(hit[k].economic_resistance == base[k].economic_resistance);
  }
  SUBCASE("locality holds with noise too") {
    const std::vector<Shock> pandemic{{ShockKind::pandemic, 6, 2, 0.7}};
    const auto base = run(cfg, kNoShocks, {});
    const auto hit = run(cfg, pandemic, {});
    for (int k = 0; k < 6; ++k) CHECK(hit[k] == base[k]);
    CHECK(hit[6].gdp_growth < base[6].gdp_growth);
  }
  SUBCASE("invalid shock") {
    const std::vector<Shock> bad{{ShockKind::pandemic, 0, 0, 0.1}};
    CHECK_THROWS_AS(run(cfg, bad, {}), ValidationError);
  }
}

TEST_CASE("unemployment and resistance stay in range under heavy noise") {
  SimConfig cfg = grid_config(3, 3, 1.0, 1.0);
  cfg.initial.m1 = Matrix(3, 3, 2.5);
  cfg.indicators.noise_sd = 0.5;
  cfg.indicators.u_min = 0.03;
  cfg.indicators.u_max = 0.25;
  cfg.steps = 200;
  Schedule sched;
  for (int k = 0; k < 200; k += 3) sched[k].actions.push_back({ActionKind::tax_cut, 1e4, {0, 1, 2}, {0}});
  const std::vector<Shock> shocks{{ShockKind::financial_crisis, 10, 50, 3.0}};
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    cfg.seed = seed;
    for (const auto& f : run(cfg, shocks, sched)) {
      CHECK(f.unemployment >= 0.03);
      CHECK(f.unemployment <= 0.25);
      CHECK(f.economic_resistance >= kResistanceFloor);
    }
  }
}

TEST_CASE("balanced scenario matches the closed-form series") {
  const auto json = nlohmann::json::parse(testutil::slurp(testutil::source_path("scenarios/balanced.json")));
  const auto want = oracle::noise_free_series(json);
  const Scenario sc = load("balanced.json");
  const auto got = run(sc.config, sc.shocks, sc.schedule);
  REQUIRE(got.size() == want.size());
  REQUIRE(got.size() == 40);
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9; };
  for (std::size_t k = 0; k < got.size(); ++k) {
    CAPTURE(k);
    CHECK(close(got[k].gdp_growth, want[k].gdp_growth));
    CHECK(close(got[k].inflation, want[k].inflation));
    CHECK(close(got[k].unemployment, want[k].unemployment));
    CHECK(close(got[k].trade_balance, want[k].trade_balance));
    CHECK(close(got[k].economic_resistance, want[k].economic_resistance));
  }
}

TEST_CASE("bundled scenarios run") {
  for (const char* name : {"crisis_demo.json", "pandemic_demo.json", "green_transition.json", "balanced.json"}) {
    CAPTURE(name);
    const Scenario sc = load(name);
    const auto frames = run(sc.config, sc.shocks, sc.schedule);
    CHECK(frames.size() == static_cast<std::size_t>(sc.config.steps));
    for (const auto& f : frames) {
      CHECK(std::isfinite(f.gdp_growth));
      CHECK(f.unemployment >= sc.config.indicators.u_min);
      CHECK(f.unemployment <= sc.config.indicators.u_max);
    }
  }
}
