#include "tensecon/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "tensecon/api_server.hpp"
#include "tensecon/error.hpp"
#include "tensecon/io_formats.hpp"
#include "tensecon/ledger.hpp"
#include "tensecon/sim.hpp"
#include "tensecon/tensor_core.hpp"

namespace tensecon {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path);
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot write " + path);
    os << contents;
    os.close();
    if (!os) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("error writing " + path);
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot replace " + path);
  }
}

namespace {

struct Options {
  std::string transactions, taxonomy, out, tensor, scenario;
  int max_iters = AlsConfig{}.max_iters;
  double tol = AlsConfig{}.tol;
  bool pretty = false;
  std::optional<std::uint64_t> seed;
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string allow_origin;
  std::string scenario_dir = default_scenario_dir();
};

void emit(const std::string& out_path, const std::string& data, std::ostream& out) {
  if (out_path.empty()) {
    out << data;
  } else {
    write_file_atomic(out_path, data);
  }
}

int cmd_ingest(const Options& o, std::ostream& out) {
  const Taxonomy tax = read_taxonomy_json(read_file(o.taxonomy));
  const auto txns = parse_transactions_csv(read_file(o.transactions));
  const Tensor3 t = build_tensor(txns, tax);
  emit(o.out, write_tensor_json(t, tax), out);
  return kExitOk;
}

void print_pretty(std::ostream& out, const Rank1Result& r, const Taxonomy& tax) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "weight    %.9g\nresidual  %.9g\niterations %d\n",
                r.factors.weight, r.residual, r.iterations);
  out << buf;
  auto section = [&](const char* title, const std::vector<std::string>& labels,
                     const std::vector<double>& v) {
    out << title << '\n';
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::snprintf(buf, sizeof buf, "  %-24s %12.6f\n", labels[i].c_str(), v[i]);
      out << buf;
    }
  };
  section("sector factor", tax.sectors, r.factors.x);
  section("agent factor", tax.agents, r.factors.y);
  section("time factor", tax.periods, r.factors.z);
}

int cmd_decompose(const Options& o, std::ostream& out) {
  const auto [t, tax] = read_tensor_json(read_file(o.tensor));
  AlsConfig cfg;
  cfg.max_iters = o.max_iters;
  cfg.tol = o.tol;
  const Rank1Result r = rank1_approx(t, cfg);
  if (o.pretty) {
    print_pretty(out, r, tax);
    return kExitOk;
  }
  const nlohmann::json j{{"schema_version", "1"},
                         {"weight", r.factors.weight},
                         {"x", r.factors.x},
                         {"y", r.factors.y},
                         {"z", r.factors.z},
                         {"residual", r.residual},
                         {"iterations", r.iterations},
                         {"sectors", tax.sectors},
                         {"agents", tax.agents},
                         {"periods", tax.periods}};
  out << j.dump() << '\n';
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  Scenario s = read_scenario(read_file(o.scenario));
  if (o.seed) s.config.seed = *o.seed;
  const auto frames = run(s.config, s.shocks, s.schedule);
  emit(o.out, write_indicator_csv(frames), out);
  return kExitOk;
}

int cmd_serve(const Options& o, std::ostream& err) {
  ApiServer server(ApiOptions{o.scenario_dir, o.allow_origin, 256});
  err << "serving on http://" << o.host << ':' << o.port << " (" << server.scenarios().size()
      << " named scenarios)\n";
  if (!server.listen(o.host, o.port)) {
    throw IoError("cannot listen on " + o.host + ":" + std::to_string(o.port));
  }
  return kExitOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tensor-based macroeconomic flow modeling", "tensecon"};
  app.require_subcommand(1);
  Options o;

  auto* ingest = app.add_subcommand("ingest", "Build a money tensor from a transaction CSV");
  ingest->add_option("--transactions", o.transactions, "Transaction CSV")->required();
  ingest->add_option("--taxonomy", o.taxonomy, "Taxonomy JSON")->required();
  ingest->add_option("--out", o.out, "Tensor JSON output")->required();

  auto* decompose = app.add_subcommand("decompose", "Best rank-1 approximation of a tensor");
  decompose->add_option("--tensor", o.tensor, "Tensor JSON")->required();
  decompose->add_option("--max-iters", o.max_iters, "ALS sweep limit")->check(CLI::PositiveNumber);
  decompose->add_option("--tol", o.tol, "Relative residual-change tolerance")
      ->check(CLI::PositiveNumber);
  decompose->add_flag("--pretty", o.pretty, "Human-readable table instead of JSON");

  auto* simulate = app.add_subcommand("simulate", "Run a scenario, write indicator CSV");
  simulate->add_option("--scenario", o.scenario, "Scenario JSON")->required();
  simulate->add_option("--seed", o.seed, "Override the scenario seed");
  simulate->add_option("--out", o.out, "Indicator CSV output (stdout when omitted)");

  auto* serve = app.add_subcommand("serve", "Start the session API server");
  serve->add_option("--port", o.port, "TCP port")->check(CLI::Range(0, 65535));
  serve->add_option("--host", o.host, "Bind address");
  serve->add_option("--allow-origin", o.allow_origin, "CORS origin for the policy console");
  serve->add_option("--scenario-dir", o.scenario_dir, "Directory of named scenarios");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*ingest) return cmd_ingest(o, out);
    if (*decompose) return cmd_decompose(o, out);
    if (*simulate) return cmd_simulate(o, out);
    if (*serve) return cmd_serve(o, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace tensecon
