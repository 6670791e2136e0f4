// Command-line and configuration layer: JSON round trips, axis helpers, the
// circuit map, subcommand output formats, sweep determinism, and exit codes.
// Subprocess cases drive the installed binary through popen; QSYNC_CLI_PATH
// is injected by the build.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "qsync/circuit.hpp"
#include "qsync/config.hpp"
#include "qsync/lindblad.hpp"
#include "qsync/metrics.hpp"
#include "qsync/spectral.hpp"
#include "qsync/sweep.hpp"

#ifndef QSYNC_CLI_PATH
#error "QSYNC_CLI_PATH must point at the CLI binary"
#endif

using namespace qsync;
using nlohmann::json;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output; // captured stdout
};

CliResult run_cli(const std::string& args, const std::string& env = "") {
  std::string cmd;
  if (!env.empty()) cmd += env + " ";
  cmd += QSYNC_CLI_PATH;
  cmd += " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult res;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) res.output.append(buf, n);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("qsync_cli_" + name)).string();
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = temp_path(name);
  std::ofstream f(path, std::ios::binary);
  REQUIRE(f.good());
  f << text;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Split that keeps empty fields, so a trailing empty error column survives.
std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

struct Csv {
  std::string config_line;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

Csv parse_csv(const std::string& text) {
  Csv csv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# config: ", 0) == 0) {
      csv.config_line = line.substr(10);
    } else if (line.rfind("# columns: ", 0) == 0) {
      csv.columns = split(line.substr(11), ',');
    } else {
      REQUIRE(line[0] != '#');
      csv.rows.push_back(split(line, ','));
    }
  }
  return csv;
}

double field(const Csv& csv, const std::vector<std::string>& row,
             const std::string& name) {
  for (std::size_t i = 0; i < csv.columns.size(); ++i)
    if (csv.columns[i] == name) return std::stod(row.at(i));
  FAIL("missing column " << name);
  return 0.0;
}

SystemSpectra spectra_for(const ModelParams& model) {
  return diagonalize(block_decompose(build_liouvillian(compute_rates(model), model)));
}

} // namespace

TEST_CASE("config: canonical dump round-trips through the parser") {
  const AppConfig def = default_config();
  CHECK(def.model.omega1 == doctest::Approx(1.0));
  CHECK(def.model.omega2 == doctest::Approx(0.99));
  CHECK(def.model.g1 == doctest::Approx(1.0));
  CHECK(def.model.g2 == doctest::Approx(1.0));
  CHECK(def.model.bath.mu == doctest::Approx(std::pow(10.0, -1.5)));
  CHECK(def.model.bath.beta == doctest::Approx(10.0));
  CHECK(def.model.bath.omega_c == doctest::Approx(20.0));
  CHECK(def.model.t1_local == doctest::Approx(3.0e5));

  const std::string once = dump_config(def);
  CHECK(dump_config(load_config(once)) == once);

  // Infinities serialize as the "inf" sentinel and survive a round trip,
  // together with a full sweep section including per-merit probe states.
  AppConfig cfg = def;
  cfg.model.bath.beta = kInf;
  cfg.model.t1_local = kInf;
  SweepSpec sweep;
  sweep.axis1.name = "delta_omega";
  sweep.axis1.scale = "log10";
  sweep.axis1.min = 0.01;
  sweep.axis1.max = 0.3;
  sweep.axis1.points = 8;
  sweep.axis2.name = "mu";
  sweep.axis2.scale = "log10";
  sweep.axis2.min = 1e-3;
  sweep.axis2.max = std::pow(10.0, -1.5);
  sweep.axis2.points = 8;
  sweep.merits = {"neg", "coll"};
  sweep.states = {{"neg", "singlet"}};
  cfg.sweep = sweep;
  cfg.output.format = "json";

  const std::string dumped = dump_config(cfg);
  CHECK(dumped.find("\"inf\"") != std::string::npos);
  CHECK(dump_config(load_config(dumped)) == dumped);

  const AppConfig re = load_config(dumped);
  CHECK(std::isinf(re.model.bath.beta));
  CHECK(std::isinf(re.model.t1_local));
  REQUIRE(re.sweep.has_value());
  CHECK(re.sweep->axis1.name == "delta_omega");
  CHECK(re.sweep->axis2.points == 8);
  CHECK(re.sweep->merits == std::vector<std::string>{"neg", "coll"});
  CHECK(re.sweep->states.at("neg") == "singlet");
}

TEST_CASE("config: unknown keys and invalid values are rejected") {
  CHECK_THROWS_AS(load_config(R"({"model":{"mu":0.01,"bogus":1}})"), InvalidConfig);
  CHECK_THROWS_AS(load_config(R"({"extra":{}})"), InvalidConfig);
  CHECK_THROWS_AS(load_config(R"({"merit":{"grid":{"points":4}}})"), InvalidConfig);
  CHECK_THROWS_AS(load_config(R"({"merit":{"grid":{"t_min":0.0}}})"), InvalidConfig);

  AxisSpec bad_name;
  bad_name.name = "nonsense";
  bad_name.min = 1.0;
  bad_name.max = 2.0;
  bad_name.points = 3;
  CHECK_THROWS_AS(validate(bad_name), InvalidConfig);

  AxisSpec one_point;
  one_point.name = "mu";
  one_point.min = 1e-3;
  one_point.max = 1e-2;
  one_point.points = 1;
  CHECK_THROWS_AS(validate(one_point), InvalidConfig);

  AxisSpec bad_scale = one_point;
  bad_scale.points = 4;
  bad_scale.scale = "cubic";
  CHECK_THROWS_AS(validate(bad_scale), InvalidConfig);

  CHECK_THROWS_AS(probe_state("bogus"), InvalidConfig);
  CHECK(probe_state("singlet").trace().real() == doctest::Approx(1.0));
  CHECK(probe_state("gg")(3, 3).real() == doctest::Approx(1.0));
}

TEST_CASE("config: axis helpers apply sweep coordinates to the model") {
  const ModelParams m = default_config().model;

  const ModelParams a = apply_axis(m, "delta_omega", 0.05);
  CHECK(a.omega1 == doctest::Approx(m.omega1));
  CHECK(a.omega2 == doctest::Approx(m.omega1 - 0.05));

  // The g1 axis trades weight between the qubits at fixed total.
  const ModelParams b = apply_axis(m, "g1", 0.3);
  CHECK(b.g1 == doctest::Approx(0.3));
  CHECK(b.g2 == doctest::Approx(1.7));

  CHECK(apply_axis(m, "mu", 0.02).bath.mu == doctest::Approx(0.02));
  CHECK(apply_axis(m, "beta", 2.5).bath.beta == doctest::Approx(2.5));
  CHECK(apply_axis(m, "t1", 500.0).t1_local == doctest::Approx(500.0));
  CHECK_THROWS_AS(apply_axis(m, "nonsense", 1.0), InvalidConfig);

  AxisSpec ax;
  ax.name = "mu";
  ax.scale = "log10";
  ax.min = 1e-3;
  ax.max = 1e-1;
  ax.points = 3;
  const std::vector<double> vals = axis_values(ax);
  REQUIRE(vals.size() == 3);
  CHECK(vals[0] == doctest::Approx(1e-3));
  CHECK(vals[1] == doctest::Approx(1e-2));
  CHECK(vals[2] == doctest::Approx(1e-1));
}

TEST_CASE("circuit: capacitance network maps to dissipative weights") {
  const CircuitWeights sym = map_circuit({1.0, 1.0, 0.5, 0.5});
  CHECK(sym.g1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(sym.g2 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  const CircuitWeights asym = map_circuit({2.0, 1.0, 2.0, 1.0});
  CHECK(asym.g1 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(asym.g2 == doctest::Approx(0.5).epsilon(1e-12));

  // Balanced networks (CL C2 = CR C1) give equal weights whatever the
  // individual capacitances.
  std::mt19937 rng(7u);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (int k = 0; k < 5; ++k) {
    CircuitSpec c;
    c.cl = u(rng);
    c.cr = u(rng);
    c.c2 = u(rng);
    c.c1 = c.cl * c.c2 / c.cr;
    const CircuitWeights w = map_circuit(c);
    CHECK(w.g1 == doctest::Approx(w.g2).epsilon(1e-12));
  }

  // Closing one coupler removes that qubit from the bath.
  const CircuitWeights weak = map_circuit({1.0, 1.0, 1e-9, 0.5});
  CHECK(weak.g1 < 1e-8);
  CHECK(weak.g2 > 0.1);

  CHECK_THROWS_AS(map_circuit({0.0, 1.0, 1.0, 1.0}), InvalidCapacitance);
  CHECK_THROWS_AS(map_circuit({1.0, 1.0, -0.5, 1.0}), InvalidCapacitance);
}

TEST_CASE("cli: circuit subcommand emits the weights in both formats") {
  const CliResult jr =
      run_cli("circuit --c1 1 --c2 1 --cl 0.5 --cr 0.5 --format json");
  REQUIRE(jr.exit_code == 0);
  const json j = json::parse(jr.output);
  CHECK(j["circuit"]["cl"].get<double>() == doctest::Approx(0.5));
  CHECK(j["g1"].get<double>() == doctest::Approx(2.0 / 3.0));
  CHECK(j["g2"].get<double>() == doctest::Approx(2.0 / 3.0));

  const CliResult cr = run_cli("circuit --c1 2 --c2 1 --cl 2 --cr 1 --format csv");
  REQUIRE(cr.exit_code == 0);
  const Csv csv = parse_csv(cr.output);
  REQUIRE(csv.columns == std::vector<std::string>{"c1", "c2", "cl", "cr", "g1", "g2"});
  REQUIRE(csv.rows.size() == 1);
  CHECK(field(csv, csv.rows[0], "g1") == doctest::Approx(0.5));
  CHECK(field(csv, csv.rows[0], "g2") == doctest::Approx(0.5));
}

TEST_CASE("cli: merit flags override the configuration echo") {
  const CliResult res =
      run_cli("merits --mu 0.02 --beta 5 --merits syn --format json");
  REQUIRE(res.exit_code == 0);
  const json j = json::parse(res.output);
  CHECK(j["config"]["model"]["mu"].get<double>() == doctest::Approx(0.02));
  CHECK(j["config"]["model"]["beta"].get<double>() == doctest::Approx(5.0));
  REQUIRE(j["report"]["syn"].is_number());
  CHECK(j["report"]["syn"].get<double>() > 0.0);
  // Unrequested merits stay unset and serialize as the nan sentinel.
  CHECK(j["report"]["neg_max"].is_string());
  CHECK(j["report"]["neg_max"].get<std::string>() == "nan");
}

TEST_CASE("cli: merits at the default operating point match the study values") {
  const CliResult res = run_cli("merits --format csv");
  REQUIRE(res.exit_code == 0);
  const Csv csv = parse_csv(res.output);
  REQUIRE(csv.columns ==
          std::vector<std::string>{"syn", "t_sync", "sub", "t_sub", "neg_max",
                                   "t_neg_max", "coll_max", "t_coll_max"});
  REQUIRE(csv.rows.size() == 1);
  const auto& row = csv.rows[0];
  CHECK(field(csv, row, "syn") == doctest::Approx(394.4554).epsilon(0.03));
  CHECK(field(csv, row, "sub") == doctest::Approx(514.834).epsilon(0.03));
  CHECK(field(csv, row, "neg_max") == doctest::Approx(0.36975).epsilon(0.02));
  CHECK(field(csv, row, "t_neg_max") == doctest::Approx(22.295).epsilon(0.05));
  CHECK(field(csv, row, "coll_max") == doctest::Approx(0.80979).epsilon(0.02));
  CHECK(field(csv, row, "t_coll_max") == doctest::Approx(24.638).epsilon(0.08));
}

TEST_CASE("cli: evolve writes a trace-preserving Hermitian trajectory") {
  const CliResult res =
      run_cli("evolve --state coherent --t-max 50 --points 6 --format csv");
  REQUIRE(res.exit_code == 0);
  const Csv csv = parse_csv(res.output);
  REQUIRE(csv.columns.size() == 33); // t plus Re/Im of all 16 entries
  REQUIRE(csv.rows.size() == 6);
  CHECK(field(csv, csv.rows.front(), "t") == doctest::Approx(0.0));
  CHECK(field(csv, csv.rows.back(), "t") == doctest::Approx(50.0));

  // The coherent product probe starts uniform.
  CHECK(field(csv, csv.rows.front(), "rho_ee_gg_re") == doctest::Approx(0.25));
  CHECK(field(csv, csv.rows.front(), "rho_eg_ge_re") == doctest::Approx(0.25));

  for (const auto& row : csv.rows) {
    const double trace = field(csv, row, "rho_ee_ee_re") +
                         field(csv, row, "rho_eg_eg_re") +
                         field(csv, row, "rho_ge_ge_re") +
                         field(csv, row, "rho_gg_gg_re");
    CHECK(trace == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(field(csv, row, "rho_ee_ee_im")) < 1e-12);
    // Hermiticity ties mirrored off-diagonal entries together.
    CHECK(field(csv, row, "rho_eg_ge_re") ==
          doctest::Approx(field(csv, row, "rho_ge_eg_re")).epsilon(1e-10));
    CHECK(field(csv, row, "rho_eg_ge_im") ==
          doctest::Approx(-field(csv, row, "rho_ge_eg_im")).epsilon(1e-10));
  }
}

TEST_CASE("cli: sweep grid is complete and deterministic across worker counts") {
  const std::string config = R"({
    "sweep": {
      "axis1": {"name": "delta_omega", "scale": "linear", "min": 0.01, "max": 0.02, "points": 3},
      "axis2": {"name": "mu", "scale": "log10", "min": 1e-3, "max": 1e-2, "points": 3},
      "merits": ["syn", "sub"]
    }
  })";
  const std::string cfg_path = write_temp("sweep_small.json", config);
  const std::string out1 = temp_path("sweep_w1.csv");
  const std::string out4 = temp_path("sweep_w4.csv");

  const CliResult r1 = run_cli("sweep --config " + cfg_path + " --output " + out1,
                               "QSYNC_WORKERS=1");
  const CliResult r4 = run_cli("sweep --config " + cfg_path + " --output " + out4,
                               "QSYNC_WORKERS=4");
  REQUIRE(r1.exit_code == 0);
  REQUIRE(r4.exit_code == 0);

  // Byte-identical data whatever the pool size. The config echo embeds the
  // output path, so the comparison starts at the column header.
  const std::string text1 = slurp(out1);
  const std::string text4 = slurp(out4);
  const std::size_t body1 = text1.find("# columns:");
  const std::size_t body4 = text4.find("# columns:");
  REQUIRE(body1 != std::string::npos);
  REQUIRE(body4 != std::string::npos);
  CHECK(text1.substr(body1) == text4.substr(body4));

  const Csv csv = parse_csv(text1);
  REQUIRE(csv.columns ==
          std::vector<std::string>{
              "delta_omega", "mu", "syn", "t_sync", "sub", "t_sub", "neg_max",
              "t_neg_max", "coll_max", "t_coll_max", "slow_pop_re",
              "slow_pop_im", "slow_coh_re", "slow_coh_im", "error"});
  REQUIRE(csv.rows.size() == 9);

  // axis1-major ordering with exact grid coordinates.
  CHECK(field(csv, csv.rows[0], "delta_omega") == doctest::Approx(0.01));
  CHECK(field(csv, csv.rows[0], "mu") == doctest::Approx(1e-3));
  CHECK(field(csv, csv.rows[1], "delta_omega") == doctest::Approx(0.01));
  CHECK(field(csv, csv.rows[1], "mu") == doctest::Approx(std::pow(10.0, -2.5)));
  CHECK(field(csv, csv.rows[3], "delta_omega") == doctest::Approx(0.015));
  CHECK(field(csv, csv.rows.back(), "delta_omega") == doctest::Approx(0.02));
  CHECK(field(csv, csv.rows.back(), "mu") == doctest::Approx(1e-2));

  for (const auto& row : csv.rows) {
    CHECK(row.back().empty());          // error column
    CHECK(row[csv.columns.size() - 9] == "nan"); // neg_max not requested
    CHECK(field(csv, row, "syn") > 0.0);
    CHECK(field(csv, row, "slow_coh_re") < 0.0);
  }

  // A larger grid stays complete: one data row per lattice point.
  const std::string big = R"({
    "sweep": {
      "axis1": {"name": "delta_omega", "scale": "linear", "min": 0.01, "max": 0.1, "points": 10},
      "axis2": {"name": "mu", "scale": "log10", "min": 1e-3, "max": 1e-2, "points": 10},
      "merits": ["syn"]
    }
  })";
  const std::string big_path = write_temp("sweep_big.json", big);
  const std::string big_out = temp_path("sweep_big.csv");
  const CliResult rb = run_cli("sweep --config " + big_path + " --output " + big_out);
  REQUIRE(rb.exit_code == 0);
  const Csv big_csv = parse_csv(slurp(big_out));
  CHECK(big_csv.rows.size() == 100);
}

TEST_CASE("cli: sweep records per-point failures inline and still exits zero") {
  // The second detuning value pushes omega2 to zero, which the model
  // validation rejects; the point must fail in place without killing the run.
  const std::string config = R"({
    "sweep": {
      "axis1": {"name": "delta_omega", "scale": "linear", "min": 0.5, "max": 1.0, "points": 2},
      "axis2": {"name": "mu", "scale": "log10", "min": 1e-3, "max": 1e-2, "points": 2},
      "merits": ["syn"]
    },
    "output": {"format": "json"}
  })";
  const std::string cfg_path = write_temp("sweep_fail.json", config);
  const std::string out = temp_path("sweep_fail.json.out");
  const CliResult res = run_cli("sweep --config " + cfg_path + " --output " + out);
  REQUIRE(res.exit_code == 0);

  const json j = json::parse(slurp(out));
  CHECK(j["config"]["sweep"]["axis1"]["name"] == "delta_omega");
  REQUIRE(j["rows"].size() == 4);
  for (int k = 0; k < 2; ++k) {
    CHECK(j["rows"][k]["error"].get<std::string>().empty());
    CHECK(j["rows"][k]["syn"].is_number());
  }
  for (int k = 2; k < 4; ++k) {
    const std::string err = j["rows"][k]["error"].get<std::string>();
    CHECK(err.find("point:") != std::string::npos);
    CHECK(j["rows"][k]["syn"].get<std::string>() == "nan");
  }
}

TEST_CASE("cli: tradeoff grid spans the requested axes") {
  const CliResult res = run_cli(
      "tradeoff --gamma 0.05:0.2:3 --splus 0 --time 2:6:3:linear --format json");
  REQUIRE(res.exit_code == 0);
  const json j = json::parse(res.output);
  REQUIRE(j["rows"].size() == 9); // 3 gammas x 1 s_plus x 3 times

  const std::vector<double> gammas = {0.05, 0.125, 0.2};
  const std::vector<double> times = {2.0, 4.0, 6.0};
  for (int k = 0; k < 9; ++k) {
    const auto& row = j["rows"][k];
    CHECK(row["gamma"].get<double>() == doctest::Approx(gammas[k / 3]));
    CHECK(row["s_plus"].get<double>() == doctest::Approx(0.0));
    CHECK(row["t"].get<double>() == doctest::Approx(times[k % 3]));
    CHECK(row["error"].get<std::string>().empty());
    CHECK(row["negativity"].get<double>() >= 0.0);
    CHECK(row["collectiveness"].get<double>() >= -1e-12);
  }
  // Purely dissipative collective motion still correlates the pair.
  CHECK(j["rows"][8]["collectiveness"].get<double>() > 0.01);
}

TEST_CASE("cli: scenario writes the trajectory bundle") {
  const std::string outdir = temp_path("scenario_out");
  std::filesystem::remove_all(outdir);
  const CliResult res = run_cli("scenario --outdir " + outdir + " --format json");
  REQUIRE(res.exit_code == 0);

  const json j = json::parse(res.output);
  CHECK(j["outdir"].get<std::string>() == outdir);
  CHECK(j["report"]["syn"].get<double>() == doctest::Approx(394.4554).epsilon(0.03));
  CHECK(j["report"]["sub"].get<double>() == doctest::Approx(514.834).epsilon(0.03));
  CHECK(j["report"]["neg_max"].get<double>() == doctest::Approx(0.36975).epsilon(0.02));
  CHECK(j["report"]["coll_max"].get<double>() == doctest::Approx(0.80979).epsilon(0.02));
  const double lock = j["report"]["pearson_lock_time"].get<double>();
  CHECK(lock > 300.0);
  CHECK(lock < 520.0);

  for (const std::string name :
       {"sx_vs_time.csv", "pe_vs_time.csv", "pearson_vs_time.csv",
        "negativity_vs_time.csv", "collectiveness_vs_time.csv", "merits.json"}) {
    const std::string path = outdir + "/" + name;
    REQUIRE(std::filesystem::exists(path));
    CHECK(std::filesystem::file_size(path) > 0);
  }

  const Csv sx = parse_csv(slurp(outdir + "/sx_vs_time.csv"));
  REQUIRE(sx.columns == std::vector<std::string>{"t", "sx1", "sx2"});
  CHECK(sx.rows.size() == 2401); // t in [0, 1200] step 0.5

  const json merits = json::parse(slurp(outdir + "/merits.json"));
  CHECK(merits["report"]["pearson_lock_time"].get<double>() == doctest::Approx(lock));
}

TEST_CASE("cli: usage and configuration errors exit with code two") {
  CHECK(run_cli("merits --format xml").exit_code == 2);
  CHECK(run_cli("no-such-subcommand").exit_code == 2);
  CHECK(run_cli("merits --no-such-flag 1").exit_code == 2);
  CHECK(run_cli("circuit --c1 1 --c2 1").exit_code == 2); // missing required
  CHECK(run_cli("evolve --points 1").exit_code == 2);
  CHECK(run_cli("evolve --t-max=-3").exit_code == 2);
  CHECK(run_cli("merits --config /nonexistent/qsync.json").exit_code == 2);

  const std::string bad = write_temp("bad_config.json", R"({"model":{"bogus":1}})");
  CHECK(run_cli("merits --config " + bad).exit_code == 2);

  const std::string unparseable = write_temp("bad_syntax.json", "{not json");
  const int code = run_cli("merits --config " + unparseable).exit_code;
  CHECK((code == 2 || code == 3));
}

TEST_CASE("cli: verify suite passes") {
  const CliResult res = run_cli("verify");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("[PASS]") != std::string::npos);
  CHECK(res.output.find("[FAIL]") == std::string::npos);
}

TEST_CASE("sweep: per-merit probe-state overrides change the figures") {
  const AppConfig cfg = default_config();
  const SystemSpectra spectra = spectra_for(cfg.model);

  std::string err;
  const MeritReport def =
      compute_merit_report(spectra, cfg.model, cfg.merit, {"neg"}, {}, &err);
  CHECK(err.empty());
  const MeritReport sg = compute_merit_report(spectra, cfg.model, cfg.merit,
                                              {"neg"}, {{"neg", "singlet"}}, &err);
  CHECK(err.empty());

  CHECK(def.neg_max == doctest::Approx(0.36975).epsilon(0.02));
  // The singlet starts maximally entangled, so its peak sits at the grid
  // start near 1/2 instead of the pumped maximum of the coherent probe.
  CHECK(sg.neg_max > 0.45);
  CHECK(sg.t_neg_max < 1.0);
}

TEST_CASE("merits: weak coupling keeps synchronization and subradiance small") {
  ModelParams m = default_config().model;
  m.bath.mu = 1e-3;
  const SystemSpectra spectra = spectra_for(m);

  MeritConfig mc;
  mc.t1_hint = m.t1_local;
  const DecayMeasure syn = synchronization_measure(spectra, syn_probe_state(), mc);
  const DecayMeasure sub = subradiance_measure(spectra, singlet_state(), mc);

  CHECK(syn.measure == doctest::Approx(0.004659).epsilon(0.05));
  CHECK(sub.measure == doctest::Approx(0.002689).epsilon(0.05));
  CHECK(syn.measure < 1.0);
  CHECK(sub.measure < 1.0);
}
