#include "tensecon/io_formats.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "tensecon/error.hpp"

namespace tensecon {

using nlohmann::json;

namespace {

std::string join_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError((path.empty() ? std::string("scenario") : path) + ": " + what);
}

// Reads fields of one JSON object and rejects whatever was not read.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const json& require(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr) fail(path(key), "missing required field");
    return *v;
  }

  std::string path(const std::string& key) const { return join_path(path_, key); }

  void finish() const {
    for (const auto& [key, _] : j_.items()) {
      if (!seen_.contains(key)) fail(path(key), "unknown key '" + key + "'");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

double as_real(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

std::int64_t as_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  if (j.is_number_unsigned()) {
    const auto u = j.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      fail(path, "integer out of range");
    }
    return static_cast<std::int64_t>(u);
  }
  return j.get<std::int64_t>();
}

int as_int(const json& j, const std::string& path) {
  const std::int64_t v = as_integer(j, path);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    fail(path, "integer out of range");
  }
  return static_cast<int>(v);
}

std::uint64_t as_seed(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) fail(path, "seed must be >= 0");
  fail(path, "expected an unsigned integer");
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::vector<std::string> as_strings(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_string(j[i], index_path(path, i)));
  return out;
}

// A number fills the grid; otherwise a rows x cols nested array.
Matrix as_grid(const json& j, std::size_t rows, std::size_t cols, const std::string& path) {
  if (j.is_number()) return Matrix(rows, cols, as_real(j, path));
  if (!j.is_array() || j.size() != rows) {
    fail(path, "expected a number or " + std::to_string(rows) + " rows of " +
                   std::to_string(cols) + " numbers");
  }
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rp = index_path(path, r);
    if (!j[r].is_array() || j[r].size() != cols) {
      fail(rp, "expected " + std::to_string(cols) + " numbers");
    }
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = as_real(j[r][c], index_path(rp, c));
  }
  return m;
}

json grid_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    rows.push_back(json(std::vector<double>(m.row(r).begin(), m.row(r).end())));
  }
  return rows;
}

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string(what) + ": malformed JSON: " + e.what());
  }
}

void append_real(std::string& out, double v) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.9g", v);
  out.append(buf, static_cast<std::size_t>(n));
}

}  // namespace

std::string write_indicator_csv(std::span<const IndicatorFrame> frames) {
  std::string out =
      "step,gdp_growth,inflation,unemployment,trade_balance,economic_resistance,actions\n";
  for (const auto& f : frames) {
    out += std::to_string(f.step);
    for (double v : {f.gdp_growth, f.inflation, f.unemployment, f.trade_balance,
                     f.economic_resistance}) {
      out += ',';
      append_real(out, v);
    }
    out += ',';
    for (std::size_t a = 0; a < f.actions.size(); ++a) {
      if (a > 0) out += ';';
      out += to_string(f.actions[a].kind);
      out += ':';
      append_real(out, f.actions[a].magnitude);
    }
    out += '\n';
  }
  return out;
}

// --- taxonomy / tensor ---

json taxonomy_to_json(const Taxonomy& tax) {
  json j{{"sectors", tax.sectors}, {"agents", tax.agents}, {"periods", tax.periods}};
  if (!tax.service_sectors.empty()) j["service_sectors"] = tax.service_sectors;
  if (!tax.brown_sectors.empty()) j["brown_sectors"] = tax.brown_sectors;
  if (!tax.green_sectors.empty()) j["green_sectors"] = tax.green_sectors;
  return j;
}

namespace {

// Shared by taxonomy_from_json and read_tensor_json, whose objects carry
// extra keys; the caller finishes the reader.
Taxonomy read_taxonomy_fields(ObjectReader& r, const std::vector<std::string>& default_periods) {
  Taxonomy tax;
  tax.sectors = as_strings(r.require("sectors"), r.path("sectors"));
  tax.agents = as_strings(r.require("agents"), r.path("agents"));
  if (const json* p = r.find("periods")) {
    tax.periods = as_strings(*p, r.path("periods"));
  } else if (!default_periods.empty()) {
    tax.periods = default_periods;
  } else {
    fail(r.path("periods"), "missing required field");
  }
  if (const json* v = r.find("service_sectors")) {
    tax.service_sectors = as_strings(*v, r.path("service_sectors"));
  }
  if (const json* v = r.find("brown_sectors")) {
    tax.brown_sectors = as_strings(*v, r.path("brown_sectors"));
  }
  if (const json* v = r.find("green_sectors")) {
    tax.green_sectors = as_strings(*v, r.path("green_sectors"));
  }
  return tax;
}

}  // namespace

Taxonomy taxonomy_from_json(const json& j, const std::string& path,
                            const std::vector<std::string>& default_periods) {
  ObjectReader r(j, path);
  Taxonomy tax = read_taxonomy_fields(r, default_periods);
  r.finish();
  try {
    tax.validate();
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
  return tax;
}

Taxonomy read_taxonomy_json(std::string_view text) {
  return taxonomy_from_json(parse_json(text, "taxonomy"), "taxonomy");
}

std::string write_tensor_json(const Tensor3& t, const Taxonomy& tax) {
  const Dims& d = t.dims();
  if (!(d == tax.dims())) throw InvalidArgument("write_tensor_json: taxonomy does not match dims");
  json j = taxonomy_to_json(tax);
  j["schema_version"] = "1";
  j["dims"] = {d.sectors, d.agents, d.periods};
  j["values"] = std::vector<double>(t.values().begin(), t.values().end());
  return j.dump() + "\n";
}

std::pair<Tensor3, Taxonomy> read_tensor_json(std::string_view text) {
  const json j = parse_json(text, "tensor");
  ObjectReader r(j, "tensor");
  if (const json* v = r.find("schema_version"); v != nullptr && *v != "1") {
    fail(r.path("schema_version"), "unsupported schema version");
  }
  Taxonomy tax = read_taxonomy_fields(r, {});
  const json& dims = r.require("dims");
  if (!dims.is_array() || dims.size() != 3) fail(r.path("dims"), "expected three extents");
  Dims d{};
  std::size_t* ext[] = {&d.sectors, &d.agents, &d.periods};
  for (std::size_t a = 0; a < 3; ++a) {
    const std::int64_t e = as_integer(dims[a], index_path(r.path("dims"), a));
    if (e < 1) fail(r.path("dims"), "extents must be >= 1");
    *ext[a] = static_cast<std::size_t>(e);
  }
  const json& values = r.require("values");
  r.finish();
  try {
    tax.validate();
  } catch (const ValidationError& e) {
    fail("tensor", e.what());
  }
  if (!(tax.dims() == d)) fail(r.path("dims"), "dims do not match the axis label counts");
  if (!values.is_array() || values.size() != d.count()) {
    fail(r.path("values"), "expected " + std::to_string(d.count()) + " values");
  }
  std::vector<double> v(values.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = as_real(values[i], index_path(r.path("values"), i));
  return {Tensor3(d, std::move(v)), std::move(tax)};
}

// --- actions / frames / feedback ---

json action_to_json(const PolicyAction& a, const Taxonomy& tax) {
  json sectors = json::array();
  json agents = json::array();
  for (std::size_t i : a.target_sectors) sectors.push_back(tax.sectors.at(i));
  for (std::size_t j : a.target_agents) agents.push_back(tax.agents.at(j));
  return {{"kind", std::string(to_string(a.kind))},
          {"magnitude", a.magnitude},
          {"sectors", sectors},
          {"agents", agents}};
}

PolicyAction action_from_json(const json& j, const Taxonomy& tax, const std::string& path) {
  ObjectReader r(j, path);
  PolicyAction a;
  const std::string kind = as_string(r.require("kind"), r.path("kind"));
  const auto parsed = parse_action_kind(kind);
  if (!parsed) fail(r.path("kind"), "unknown action kind '" + kind + "'");
  a.kind = *parsed;
  a.magnitude = as_real(r.require("magnitude"), r.path("magnitude"));
  try {
    for (const auto& s : as_strings(r.require("sectors"), r.path("sectors"))) {
      a.target_sectors.push_back(tax.sector_index(s));
    }
    for (const auto& s : as_strings(r.require("agents"), r.path("agents"))) {
      a.target_agents.push_back(tax.agent_index(s));
    }
    r.finish();
    a.validate(tax);
  } catch (const ValidationError& e) {
    if (std::string_view(e.what()).starts_with(path)) throw;
    fail(path, e.what());
  }
  return a;
}

json frame_to_json(const IndicatorFrame& f, const Taxonomy& tax) {
  json actions = json::array();
  for (const auto& a : f.actions) actions.push_back(action_to_json(a, tax));
  return {{"step", f.step},
          {"gdp_growth", f.gdp_growth},
          {"inflation", f.inflation},
          {"unemployment", f.unemployment},
          {"trade_balance", f.trade_balance},
          {"economic_resistance", f.economic_resistance},
          {"actions", actions}};
}

IndicatorFrame frame_from_json(const json& j, const Taxonomy& tax) {
  ObjectReader r(j, "frame");
  IndicatorFrame f;
  f.step = as_int(r.require("step"), "frame.step");
  f.gdp_growth = as_real(r.require("gdp_growth"), "frame.gdp_growth");
  f.inflation = as_real(r.require("inflation"), "frame.inflation");
  f.unemployment = as_real(r.require("unemployment"), "frame.unemployment");
  f.trade_balance = as_real(r.require("trade_balance"), "frame.trade_balance");
  f.economic_resistance = as_real(r.require("economic_resistance"), "frame.economic_resistance");
  const json& actions = r.require("actions");
  if (!actions.is_array()) fail("frame.actions", "expected an array");
  for (std::size_t i = 0; i < actions.size(); ++i) {
    f.actions.push_back(action_from_json(actions[i], tax, index_path("frame.actions", i)));
  }
  r.finish();
  return f;
}

FeedbackPlan feedback_from_json(const json& j, std::size_t rows, std::size_t cols,
                                const std::string& path) {
  ObjectReader r(j, path);
  FeedbackPlan plan;
  plan.gamma = as_real(r.require("gamma"), r.path("gamma"));
  const json* f = r.find("f");
  plan.f = f ? as_grid(*f, rows, cols, r.path("f")) : Matrix(rows, cols, 1.0);
  r.finish();
  return plan;
}

// --- scenario ---

namespace {

std::vector<std::string> step_labels(int steps) {
  std::vector<std::string> out;
  for (int k = 0; k < std::max(steps, 1); ++k) out.push_back("t" + std::to_string(k));
  return out;
}

IndicatorParams read_indicators(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  IndicatorParams p;
  auto real = [&](const char* key, double& field) {
    if (const json* v = r.find(key)) field = as_real(*v, r.path(key));
  };
  real("g_star", p.g_star);
  real("pi_star", p.pi_star);
  real("okun_b", p.okun_b);
  real("u0", p.u0);
  real("u_min", p.u_min);
  real("u_max", p.u_max);
  real("import_propensity", p.import_propensity);
  real("noise_sd", p.noise_sd);
  if (const json* v = r.find("export_sectors")) {
    p.export_sectors = as_strings(*v, r.path("export_sectors"));
  }
  r.finish();
  return p;
}

Shock read_shock(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  Shock s;
  const std::string kind = as_string(r.require("kind"), r.path("kind"));
  const auto parsed = parse_shock_kind(kind);
  if (!parsed) fail(r.path("kind"), "unknown shock kind '" + kind + "'");
  s.kind = *parsed;
  s.start_step = as_int(r.require("start_step"), r.path("start_step"));
  s.duration = as_int(r.require("duration"), r.path("duration"));
  s.severity = as_real(r.require("severity"), r.path("severity"));
  r.finish();
  try {
    s.validate();
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
  return s;
}

}  // namespace

Scenario read_scenario(std::string_view text) {
  const json j = parse_json(text, "scenario");
  ObjectReader r(j, "");
  Scenario s;
  SimConfig& cfg = s.config;
  if (const json* v = r.find("name")) cfg.name = as_string(*v, "name");
  if (const json* v = r.find("seed")) cfg.seed = as_seed(*v, "seed");
  cfg.steps = 40;
  if (const json* v = r.find("steps")) cfg.steps = as_int(*v, "steps");
  if (cfg.steps < 1) fail("steps", "must be >= 1");
  cfg.taxonomy = taxonomy_from_json(r.require("taxonomy"), "taxonomy", step_labels(cfg.steps));

  const std::size_t rows = cfg.taxonomy.sectors.size();
  const std::size_t cols = cfg.taxonomy.agents.size();
  cfg.initial.beta = 1.0;
  if (const json* v = r.find("beta")) cfg.initial.beta = as_real(*v, "beta");
  {
    MomentumInputs& in = cfg.initial;
    in.m1 = Matrix(rows, cols, 1.0);
    in.m2 = Matrix(rows, cols, 0.3);
    in.m3 = Matrix(rows, cols, 0.2);
    in.r1 = Matrix(rows, cols, 1.0);
    in.r2 = Matrix(rows, cols, 1.0);
    if (const json* v = r.find("inputs")) {
      ObjectReader ir(*v, "inputs");
      for (auto [key, m] : {std::pair{"m1", &in.m1}, {"m2", &in.m2}, {"m3", &in.m3},
                            {"r1", &in.r1}, {"r2", &in.r2}}) {
        if (const json* g = ir.find(key)) *m = as_grid(*g, rows, cols, ir.path(key));
      }
      ir.finish();
    }
  }
  if (const json* v = r.find("indicators")) cfg.indicators = read_indicators(*v, "indicators");
  if (const json* v = r.find("tax_cut_kappa")) cfg.tax_cut_kappa = as_real(*v, "tax_cut_kappa");

  if (const json* v = r.find("shocks")) {
    if (!v->is_array()) fail("shocks", "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      s.shocks.push_back(read_shock((*v)[i], index_path("shocks", i)));
    }
  }
  if (const json* v = r.find("schedule")) {
    if (!v->is_array()) fail("schedule", "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string path = index_path("schedule", i);
      ObjectReader er((*v)[i], path);
      const int step = as_int(er.require("step"), er.path("step"));
      if (step < 0 || step >= cfg.steps) fail(er.path("step"), "outside [0, steps)");
      StepInput in;
      if (const json* acts = er.find("actions")) {
        if (!acts->is_array()) fail(er.path("actions"), "expected an array");
        for (std::size_t a = 0; a < acts->size(); ++a) {
          in.actions.push_back(
              action_from_json((*acts)[a], cfg.taxonomy, index_path(er.path("actions"), a)));
        }
      }
      if (const json* fb = er.find("feedback")) {
        in.feedback = feedback_from_json(*fb, rows, cols, er.path("feedback"));
      }
      er.finish();
      if (!s.schedule.emplace(step, std::move(in)).second) {
        fail(er.path("step"), "duplicate schedule entry for step " + std::to_string(step));
      }
    }
  }
  r.finish();
  cfg.validate();
  return s;
}

std::string write_scenario(const Scenario& s) {
  const SimConfig& c = s.config;
  const IndicatorParams& p = c.indicators;
  json tax = taxonomy_to_json(c.taxonomy);
  tax["service_sectors"] = c.taxonomy.service_sectors;
  tax["brown_sectors"] = c.taxonomy.brown_sectors;
  tax["green_sectors"] = c.taxonomy.green_sectors;

  json shocks = json::array();
  for (const auto& sh : s.shocks) {
    shocks.push_back({{"kind", std::string(to_string(sh.kind))},
                      {"start_step", sh.start_step},
                      {"duration", sh.duration},
                      {"severity", sh.severity}});
  }
  json schedule = json::array();
  for (const auto& [step, in] : s.schedule) {
    json entry{{"step", step}};
    json actions = json::array();
    for (const auto& a : in.actions) actions.push_back(action_to_json(a, c.taxonomy));
    entry["actions"] = actions;
    if (in.feedback) entry["feedback"] = {{"gamma", in.feedback->gamma}, {"f", grid_to_json(in.feedback->f)}};
    schedule.push_back(entry);
  }

  json j{{"name", c.name},
         {"seed", c.seed},
         {"steps", c.steps},
         {"taxonomy", tax},
         {"beta", c.initial.beta},
         {"inputs",
          {{"m1", grid_to_json(c.initial.m1)},
           {"m2", grid_to_json(c.initial.m2)},
           {"m3", grid_to_json(c.initial.m3)},
           {"r1", grid_to_json(c.initial.r1)},
           {"r2", grid_to_json(c.initial.r2)}}},
         {"indicators",
          {{"g_star", p.g_star},
           {"pi_star", p.pi_star},
           {"okun_b", p.okun_b},
           {"u0", p.u0},
           {"u_min", p.u_min},
           {"u_max", p.u_max},
           {"export_sectors", p.export_sectors},
           {"import_propensity", p.import_propensity},
           {"noise_sd", p.noise_sd}}},
         {"tax_cut_kappa", c.tax_cut_kappa},
         {"shocks", shocks},
         {"schedule", schedule}};
  return j.dump(2) + "\n";
}

}  // namespace tensecon
