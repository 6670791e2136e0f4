// Command-line front end: rates, spectrum, evolve, merits, sweep, scenario,
// circuit, tradeoff and verify subcommands over a single JSON config with
// per-flag overrides. Exit codes: 0 success, 2 invalid configuration,
// 3 numerical failure (sweeps record point failures inline and exit 0).

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsync/analytic.hpp"
#include "qsync/bath.hpp"
#include "qsync/circuit.hpp"
#include "qsync/config.hpp"
#include "qsync/lindblad.hpp"
#include "qsync/metrics.hpp"
#include "qsync/spectral.hpp"
#include "qsync/sweep.hpp"

using namespace qsync;
using ordered_json = nlohmann::ordered_json;

namespace {

double parse_extended(const std::string& text, const std::string& what) {
  if (text == "inf") return kInf;
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw InvalidConfig("config: cannot parse " + what + " value \"" + text + "\"");
  }
}

// Tradeoff axis token: "value" or "min:max:points[:scale]".
TradeoffAxis parse_axis_token(const std::string& token, const std::string& what) {
  std::vector<std::string> parts;
  std::stringstream ss(token);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  TradeoffAxis axis;
  if (parts.size() == 1) {
    axis.min = axis.max = parse_extended(parts[0], what);
    axis.points = 1;
    return axis;
  }
  if (parts.size() != 3 && parts.size() != 4)
    throw InvalidConfig("config: " + what +
                        " expects \"value\" or \"min:max:points[:scale]\"");
  axis.min = parse_extended(parts[0], what);
  axis.max = parse_extended(parts[1], what);
  try {
    axis.points = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw InvalidConfig("config: bad point count in " + what);
  }
  if (parts.size() == 4) axis.scale = parts[3];
  return axis;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

ordered_json matrix2_json(const Matrix2& m) {
  ordered_json rows = ordered_json::array();
  for (int r = 0; r < 2; ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < 2; ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json json_number(double x) {
  if (std::isnan(x)) return ordered_json("nan");
  if (std::isinf(x)) return ordered_json(x > 0.0 ? "inf" : "-inf");
  return ordered_json(x);
}

ordered_json report_json(const MeritReport& rep) {
  ordered_json j;
  j["syn"] = json_number(rep.syn);
  j["t_sync"] = json_number(rep.t_sync);
  j["sub"] = json_number(rep.sub);
  j["t_sub"] = json_number(rep.t_sub);
  j["neg_max"] = json_number(rep.neg_max);
  j["t_neg_max"] = json_number(rep.t_neg_max);
  j["coll_max"] = json_number(rep.coll_max);
  j["t_coll_max"] = json_number(rep.t_coll_max);
  j["choi_min_eigenvalue"] = json_number(rep.choi_defect);
  return j;
}

// Output sink: configured path or stdout. Binary mode keeps LF endings.
class OutputSink {
 public:
  explicit OutputSink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw InvalidConfig("config: cannot open output path " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void emit_csv_header(std::ostream& out, const AppConfig& cfg,
                     const std::string& columns) {
  out << "# config: " << dump_config(cfg) << "\n";
  out << "# columns: " << columns << "\n";
}

// --- subcommand bodies -------------------------------------------------------

int cmd_rates(const AppConfig& cfg) {
  validate(cfg.model);
  const RateSet r = compute_rates(cfg.model);
  OutputSink sink(cfg.output.path);
  std::ostream& out = sink.stream();
  if (cfg.output.format == "csv") {
    emit_csv_header(out, cfg, "matrix,j,k,re,im");
    const std::pair<const char*, const Matrix2*> mats[] = {
        {"gamma_down", &r.gamma_down},
        {"gamma_up", &r.gamma_up},
        {"s_down", &r.s_down},
        {"s_up", &r.s_up}};
    for (const auto& [name, m] : mats)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          out << name << ',' << j << ',' << k << ','
              << format_number((*m)(j, k).real()) << ','
              << format_number((*m)(j, k).imag()) << "\n";
  } else {
    ordered_json j;
    j["config"] = ordered_json::parse(dump_config(cfg));
    j["rates"]["gamma_down"] = matrix2_json(r.gamma_down);
    j["rates"]["gamma_up"] = matrix2_json(r.gamma_up);
    j["rates"]["s_down"] = matrix2_json(r.s_down);
    j["rates"]["s_up"] = matrix2_json(r.s_up);
    out << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_spectrum(const AppConfig& cfg) {
  validate(cfg.model);
  const RateSet r = compute_rates(cfg.model);
  const SystemSpectra spectra =
      diagonalize(block_decompose(build_liouvillian(r, cfg.model)));
  OutputSink sink(cfg.output.path);
  std::ostream& out = sink.stream();
  if (cfg.output.format == "csv") {
    emit_csv_header(out, cfg, "block,index,re,im");
    for (const auto& [d, spec] : spectra.blocks)
      for (int j = 0; j < spec.eigenvalues.size(); ++j)
        out << d << ',' << j << ',' << format_number(spec.eigenvalues(j).real())
            << ',' << format_number(spec.eigenvalues(j).imag()) << "\n";
  } else {
    ordered_json j;
    j["config"] = ordered_json::parse(dump_config(cfg));
    auto& rows = j["rows"];
    rows = ordered_json::array();
    for (const auto& [d, spec] : spectra.blocks)
      for (int k = 0; k < spec.eigenvalues.size(); ++k) {
        ordered_json row;
        row["block"] = d;
        row["index"] = k;
        row["re"] = json_number(spec.eigenvalues(k).real());
        row["im"] = json_number(spec.eigenvalues(k).imag());
        rows.push_back(std::move(row));
      }
    out << j.dump(2) << "\n";
  }
  return 0;
}

const char* kBasisLabels[4] = {"ee", "eg", "ge", "gg"};

int cmd_evolve(const AppConfig& cfg, const std::string& state_name, double t_max,
               int points) {
  validate(cfg.model);
  if (points < 2) throw InvalidConfig("config: evolve needs at least 2 points");
  if (!(t_max > 0.0)) throw InvalidConfig("config: evolve t-max must be positive");
  const Matrix4 rho0 = probe_state(state_name);
  const RateSet r = compute_rates(cfg.model);
  const SystemSpectra spectra =
      diagonalize(block_decompose(build_liouvillian(r, cfg.model)));

  std::vector<std::string> columns = {"t"};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const std::string base =
          std::string("rho_") + kBasisLabels[a] + "_" + kBasisLabels[b];
      columns.push_back(base + "_re");
      columns.push_back(base + "_im");
    }

  OutputSink sink(cfg.output.path);
  std::ostream& out = sink.stream();
  auto row_values = [&](double t) {
    const Matrix4 rho = evolve(spectra, rho0, t);
    std::vector<double> vals = {t};
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        vals.push_back(rho(a, b).real());
        vals.push_back(rho(a, b).imag());
      }
    return vals;
  };

  if (cfg.output.format == "csv") {
    std::string header;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i > 0) header += ',';
      header += columns[i];
    }
    emit_csv_header(out, cfg, header);
    for (int i = 0; i < points; ++i) {
      const double t = t_max * i / (points - 1);
      const auto vals = row_values(t);
      for (std::size_t c = 0; c < vals.size(); ++c) {
        if (c > 0) out << ',';
        out << format_number(vals[c]);
      }
      out << "\n";
    }
  } else {
    ordered_json j;
    j["config"] = ordered_json::parse(dump_config(cfg));
    j["columns"] = columns;
    auto& rows = j["rows"];
    rows = ordered_json::array();
    for (int i = 0; i < points; ++i) {
      const double t = t_max * i / (points - 1);
      const auto vals = row_values(t);
      ordered_json row;
      for (std::size_t c = 0; c < vals.size(); ++c) row[columns[c]] = json_number(vals[c]);
      rows.push_back(std::move(row));
    }
    out << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_merits(const AppConfig& cfg, const std::string& merit_list) {
  validate(cfg.model);
  std::vector<std::string> merits = split_list(merit_list);
  if (merits.empty()) merits = {"syn", "sub", "neg", "coll"};
  const RateSet r = compute_rates(cfg.model);
  const SystemSpectra spectra =
      diagonalize(block_decompose(build_liouvillian(r, cfg.model)));
  const MeritReport rep =
      compute_merit_report(spectra, cfg.model, cfg.merit, merits, {}, nullptr);

  OutputSink sink(cfg.output.path);
  std::ostream& out = sink.stream();
  if (cfg.output.format == "csv") {
    emit_csv_header(out, cfg,
                    "syn,t_sync,sub,t_sub,neg_max,t_neg_max,coll_max,t_coll_max");
    out << format_number(rep.syn) << ',' << format_number(rep.t_sync) << ','
        << format_number(rep.sub) << ',' << format_number(rep.t_sub) << ','
        << format_number(rep.neg_max) << ',' << format_number(rep.t_neg_max) << ','
        << format_number(rep.coll_max) << ',' << format_number(rep.t_coll_max)
        << "\n";
  } else {
    ordered_json j;
    j["config"] = ordered_json::parse(dump_config(cfg));
    j["report"] = report_json(rep);
    out << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_sweep(const AppConfig& cfg) {
  const SweepResult result = run_sweep(cfg);
  OutputSink sink(cfg.output.path);
  if (cfg.output.format == "csv")
    write_sweep_csv(sink.stream(), cfg, result);
  else
    write_sweep_json(sink.stream(), cfg, result);
  return 0;
}

int cmd_scenario(const AppConfig& cfg, const std::string& outdir) {
  const ScenarioResult res = run_scenario(cfg, outdir);
  ordered_json j;
  j["config"] = ordered_json::parse(dump_config(cfg));
  j["report"] = report_json(res.report);
  j["report"]["pearson_lock_time"] = json_number(res.pearson_lock_time);
  j["outdir"] = outdir;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_circuit(const AppConfig& cfg, double c1, double c2, double cl, double cr) {
  const CircuitWeights w = map_circuit({c1, c2, cl, cr});
  OutputSink sink(cfg.output.path);
  std::ostream& out = sink.stream();
  if (cfg.output.format == "csv") {
    emit_csv_header(out, cfg, "c1,c2,cl,cr,g1,g2");
    out << format_number(c1) << ',' << format_number(c2) << ','
        << format_number(cl) << ',' << format_number(cr) << ','
        << format_number(w.g1) << ',' << format_number(w.g2) << "\n";
  } else {
    ordered_json j;
    j["config"] = ordered_json::parse(dump_config(cfg));
    j["circuit"]["c1"] = c1;
    j["circuit"]["c2"] = c2;
    j["circuit"]["cl"] = cl;
    j["circuit"]["cr"] = cr;
    j["g1"] = w.g1;
    j["g2"] = w.g2;
    out << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_tradeoff(const AppConfig& cfg, const std::string& gamma_token,
                 const std::string& splus_token, const std::string& time_token,
                 double omega) {
  const TradeoffAxis gamma = parse_axis_token(gamma_token, "--gamma");
  const TradeoffAxis splus = parse_axis_token(splus_token, "--splus");
  const TradeoffAxis time = parse_axis_token(time_token, "--time");
  const auto rows = run_tradeoff(gamma, splus, time, omega);
  OutputSink sink(cfg.output.path);
  if (cfg.output.format == "csv")
    write_tradeoff_csv(sink.stream(), cfg, rows);
  else
    write_tradeoff_json(sink.stream(), cfg, rows);
  return 0;
}

// --- verify: quick closed-form oracle suite -----------------------------------

int cmd_verify() {
  int failures = 0;
  auto report = [&](const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++failures;
  };

  std::mt19937 rng(20260816u);
  auto uniform = [&](double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
  };

  // Cold-bath closed forms against numerical diagonalization.
  try {
    double worst_eig = 0.0, worst_gap = 0.0;
    for (int draw = 0; draw < 20; ++draw) {
      ModelParams m;
      m.omega1 = 1.0;
      m.omega2 = 1.0 - uniform(1e-4, 0.1);
      m.g1 = uniform(0.2, 1.8);
      m.g2 = uniform(0.2, 1.8);
      m.bath.mu = std::pow(10.0, uniform(-3.0, -1.0));
      m.bath.beta = kInf;
      const RateSet r = compute_rates(m);
      const SystemSpectra spectra =
          diagonalize(block_decompose(build_liouvillian(r, m)));
      const ZeroTempSpectrum zts = zero_temp_spectrum(r, m);

      std::vector<Complex> num0, num1, ana0(zts.block0.begin(), zts.block0.end()),
          ana1(zts.block1.begin(), zts.block1.end());
      const auto& e0 = spectra.blocks.at(0).eigenvalues;
      const auto& e1 = spectra.blocks.at(1).eigenvalues;
      for (int j = 0; j < e0.size(); ++j) num0.push_back(e0(j));
      for (int j = 0; j < e1.size(); ++j) num1.push_back(e1(j));
      worst_eig = std::max(worst_eig, spectrum_match_distance(num0, ana0));
      worst_eig = std::max(worst_eig, spectrum_match_distance(num1, ana1));

      // Slow-gap equality between the two blocks, evaluated on the
      // numerically matched eigenvalues.
      auto nearest = [](const Eigen::VectorXcd& v, Complex target) {
        Complex best = v(0);
        for (int j = 1; j < v.size(); ++j)
          if (std::abs(v(j) - target) < std::abs(best - target)) best = v(j);
        return best;
      };
      const Complex gap0 =
          nearest(e0, zts.block0[4]) - nearest(e0, zts.block0[3]);
      const Complex gap1 =
          nearest(e1, zts.block1[3]) - nearest(e1, zts.block1[2]);
      worst_gap = std::max(worst_gap, std::abs(gap0 - gap1));
    }
    report("cold-bath closed forms", worst_eig <= 1e-8,
           "worst eigenvalue mismatch " + format_number(worst_eig));
    report("cold-bath slow-gap equality", worst_gap <= 1e-10,
           "worst gap mismatch " + format_number(worst_gap));
  } catch (const std::exception& e) {
    report("cold-bath closed forms", false, e.what());
  }

  // Phase-sector conjugation and multiset equivalence at finite temperature.
  try {
    double worst_conj = 0.0, worst_multiset = 0.0;
    for (int draw = 0; draw < 10; ++draw) {
      ModelParams m;
      m.omega1 = 1.0;
      m.omega2 = 1.0 - uniform(0.0, 0.1);
      m.g1 = uniform(0.2, 1.8);
      m.g2 = uniform(0.2, 1.8);
      m.bath.mu = std::pow(10.0, uniform(-3.0, -1.0));
      m.bath.beta = std::pow(10.0, uniform(-0.5, 1.3));
      const Superop l = build_liouvillian(compute_rates(m), m);
      const BlockSet bs = block_decompose(l);
      worst_conj = std::max(
          worst_conj,
          (bs.blocks.at(-1) - bs.blocks.at(1).conjugate()).cwiseAbs().maxCoeff());
      worst_conj = std::max(
          worst_conj,
          (bs.blocks.at(-2) - bs.blocks.at(2).conjugate()).cwiseAbs().maxCoeff());

      const SystemSpectra spectra = diagonalize(bs);
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> full(l, false);
      std::vector<Complex> whole;
      for (int j = 0; j < 16; ++j) whole.push_back(full.eigenvalues()(j));
      worst_multiset =
          std::max(worst_multiset,
                   spectrum_match_distance(flat_spectrum(spectra), whole));
    }
    report("phase-sector conjugation", worst_conj <= 1e-13,
           "worst deviation " + format_number(worst_conj));
    report("block multiset equals full spectrum", worst_multiset <= 1e-9,
           "worst mismatch " + format_number(worst_multiset));
  } catch (const std::exception& e) {
    report("phase-sector conjugation", false, e.what());
  }

  // Uniform-rate generator closed forms.
  try {
    double worst = 0.0, worst_re = 0.0;
    for (const auto& [gamma, splus] : std::vector<std::pair<double, double>>{
             {0.1, 0.02}, {1.0, 0.3}}) {
      const double omega = 1.0;
      const SystemSpectra spectra = diagonalize(build_linf(omega, gamma, splus));
      const auto forms = infinite_temp_block1(omega, gamma, splus);
      std::vector<Complex> num, ana(forms.begin(), forms.end());
      const auto& e1 = spectra.blocks.at(1).eigenvalues;
      for (int j = 0; j < e1.size(); ++j) num.push_back(e1(j));
      worst = std::max(worst, spectrum_match_distance(num, ana));

      auto nearest = [&](Complex target) {
        Complex best = e1(0);
        for (int j = 1; j < e1.size(); ++j)
          if (std::abs(e1(j) - target) < std::abs(best - target)) best = e1(j);
        return best;
      };
      worst_re = std::max(
          worst_re, std::abs((nearest(forms[3]) - nearest(forms[2])).real()));
    }
    report("uniform-rate closed forms", worst <= 1e-10,
           "worst mismatch " + format_number(worst));
    report("uniform-rate slow gap purely imaginary", worst_re <= 1e-12,
           "worst Re " + format_number(worst_re));
  } catch (const std::exception& e) {
    report("uniform-rate closed forms", false, e.what());
  }

  // Emission/absorption balance at finite temperature.
  try {
    ModelParams m = default_config().model;
    m.t1_local = kInf;
    const RateSet r = compute_rates(m);
    double worst = 0.0;
    const double w_[2] = {m.omega1, m.omega2};
    for (int j = 0; j < 2; ++j) {
      const double ratio = r.gamma_up(j, j).real() / r.gamma_down(j, j).real();
      worst = std::max(worst,
                       std::abs(ratio - std::exp(-m.bath.beta * w_[j])) /
                           std::exp(-m.bath.beta * w_[j]));
    }
    report("emission/absorption balance", worst <= 1e-10,
           "worst relative deviation " + format_number(worst));
  } catch (const std::exception& e) {
    report("emission/absorption balance", false, e.what());
  }

  // Spot values of the half-Fourier transform against independently
  // computed dense-quadrature references.
  try {
    BathParams bath;
    bath.mu = std::pow(10.0, -1.5);
    bath.omega_c = 20.0;
    bath.beta = 10.0;
    const Complex got_pos = half_fourier(1.0, bath);
    const Complex ref_pos(0.0031339005368091837, -0.03389111580492688);
    const Complex got_neg = half_fourier(-1.0, bath);
    const Complex ref_neg(1.422788642537505e-07, -0.027984155728442855);
    bath.beta = kInf;
    const Complex got_cold = half_fourier(1.0, bath);
    const double ref_cold_im = -0.033925697426079454;
    const double worst = std::max(
        {std::abs(got_pos - ref_pos) / std::abs(ref_pos),
         std::abs(got_neg - ref_neg) / std::abs(ref_neg),
         std::abs(got_cold.imag() - ref_cold_im) / std::abs(ref_cold_im)});
    report("half-Fourier reference values", worst <= 1e-7,
           "worst relative deviation " + format_number(worst));
  } catch (const std::exception& e) {
    report("half-Fourier reference values", false, e.what());
  }

  if (failures == 0) {
    std::cout << "all checks passed\n";
    return 0;
  }
  std::cout << failures << " check(s) failed\n";
  return 3;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial-secular generator toolkit for two qubits in a common "
               "thermal bath: rates, block spectra, normal-mode evolution, "
               "figures of merit, parameter sweeps and the uniform-rate "
               "trade-off grid."};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON configuration file")
      ->check(CLI::ExistingFile);

  // Model overrides.
  double omega1 = 0, omega2 = 0, delta_omega = 0, g1 = 0, g2 = 0, mu = 0, omega_c = 0;
  std::string beta_text, t1_text;
  auto* o_omega1 = app.add_option("--omega1", omega1, "first qubit frequency");
  auto* o_omega2 = app.add_option("--omega2", omega2, "second qubit frequency");
  auto* o_dw = app.add_option("--delta-omega", delta_omega,
                              "detuning omega1 - omega2 (overrides --omega2)");
  auto* o_g1 = app.add_option("--g1", g1, "first dissipative weight");
  auto* o_g2 = app.add_option("--g2", g2, "second dissipative weight");
  auto* o_mu = app.add_option("--mu", mu, "bath coupling energy");
  auto* o_beta = app.add_option("--beta", beta_text, "inverse temperature (or inf)");
  auto* o_t1 = app.add_option("--t1", t1_text, "local relaxation time (or inf)");
  auto* o_wc = app.add_option("--omega-c", omega_c, "bath cutoff frequency");

  // Merit overrides.
  double dominance = 0, window = 0, grid_tmin = 0, grid_tmax = 0;
  int grid_points = 0;
  auto* o_dom = app.add_option("--dominance-factor", dominance,
                               "amplitude ratio defining dominance");
  auto* o_win = app.add_option("--pearson-window", window, "correlation window");
  auto* o_tmin = app.add_option("--grid-tmin", grid_tmin, "peak-search grid start");
  auto* o_tmax = app.add_option("--grid-tmax", grid_tmax,
                                "peak-search grid end (0 = automatic)");
  auto* o_pts = app.add_option("--grid-points", grid_points, "peak-search grid size");

  // Output overrides.
  std::string out_path, out_format;
  auto* o_out = app.add_option("--output", out_path, "output file (default stdout)");
  auto* o_fmt = app.add_option("--format", out_format, "output format: csv or json");

  auto* sc_rates = app.add_subcommand("rates", "emission/absorption rate matrices");
  auto* sc_spectrum = app.add_subcommand("spectrum", "block-resolved eigenvalues");

  auto* sc_evolve = app.add_subcommand("evolve", "density-matrix trajectory");
  std::string evolve_state = "coherent";
  double evolve_tmax = 100.0;
  int evolve_points = 501;
  sc_evolve->add_option("--state", evolve_state,
                        "initial state: syn_probe, singlet, coherent, ee, eg, ge, gg");
  sc_evolve->add_option("--t-max", evolve_tmax, "final time");
  sc_evolve->add_option("--points", evolve_points, "number of samples");

  auto* sc_merits = app.add_subcommand("merits", "figures of merit at one point");
  std::string merit_list = "syn,sub,neg,coll";
  sc_merits->add_option("--merits", merit_list, "comma-separated merit subset");

  auto* sc_sweep = app.add_subcommand("sweep", "two-axis parameter sweep");

  auto* sc_scenario = app.add_subcommand(
      "scenario", "reference study: merit report plus trajectory files");
  std::string outdir = "scenario_out";
  sc_scenario->add_option("--outdir", outdir, "directory for trajectory files");

  auto* sc_circuit =
      app.add_subcommand("circuit", "capacitive network to dissipative weights");
  double c1 = 0, c2 = 0, cl = 0, cr = 0;
  sc_circuit->add_option("--c1", c1, "qubit 1 coupling capacitance")->required();
  sc_circuit->add_option("--c2", c2, "qubit 2 coupling capacitance")->required();
  sc_circuit->add_option("--cl", cl, "left resistor capacitance")->required();
  sc_circuit->add_option("--cr", cr, "right resistor capacitance")->required();

  auto* sc_tradeoff = app.add_subcommand(
      "tradeoff", "(gamma, s_plus, t) grid over the uniform-rate generator");
  std::string gamma_token = "0.01:1:8:log10";
  std::string splus_token = "-0.02";
  std::string time_token = "5:15:8";
  double tradeoff_omega = 1.0;
  sc_tradeoff->add_option("--gamma", gamma_token,
                          "gamma axis: value or min:max:points[:scale]");
  sc_tradeoff->add_option("--splus", splus_token,
                          "s_plus axis: value or min:max:points[:scale]");
  sc_tradeoff->add_option("--time", time_token,
                          "time axis: value or min:max:points[:scale]");
  sc_tradeoff->add_option("--omega", tradeoff_omega, "qubit frequency");

  auto* sc_verify =
      app.add_subcommand("verify", "closed-form oracle suite (self-check)");

  // Global model/merit/output flags remain valid after the subcommand name.
  for (auto* sc : {sc_rates, sc_spectrum, sc_evolve, sc_merits, sc_sweep,
                   sc_scenario, sc_circuit, sc_tradeoff, sc_verify})
    sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    AppConfig cfg =
        config_path.empty() ? default_config() : load_config_file(config_path);

    if (*o_omega1) cfg.model.omega1 = omega1;
    if (*o_omega2) cfg.model.omega2 = omega2;
    if (*o_dw) cfg.model.omega2 = cfg.model.omega1 - delta_omega;
    if (*o_g1) cfg.model.g1 = g1;
    if (*o_g2) cfg.model.g2 = g2;
    if (*o_mu) cfg.model.bath.mu = mu;
    if (*o_beta) cfg.model.bath.beta = parse_extended(beta_text, "--beta");
    if (*o_t1) cfg.model.t1_local = parse_extended(t1_text, "--t1");
    if (*o_wc) cfg.model.bath.omega_c = omega_c;
    if (*o_dom) cfg.merit.dominance_factor = dominance;
    if (*o_win) cfg.merit.pearson_window = window;
    if (*o_tmin) cfg.merit.grid_t_min = grid_tmin;
    if (*o_tmax) cfg.merit.grid_t_max = grid_tmax;
    if (*o_pts) cfg.merit.grid_points = grid_points;
    if (*o_out) cfg.output.path = out_path;
    if (*o_fmt) cfg.output.format = out_format;
    if (cfg.output.format != "csv" && cfg.output.format != "json")
      throw InvalidConfig("config: output format must be csv or json");

    if (*sc_rates) return cmd_rates(cfg);
    if (*sc_spectrum) return cmd_spectrum(cfg);
    if (*sc_evolve) return cmd_evolve(cfg, evolve_state, evolve_tmax, evolve_points);
    if (*sc_merits) return cmd_merits(cfg, merit_list);
    if (*sc_sweep) return cmd_sweep(cfg);
    if (*sc_scenario) return cmd_scenario(cfg, outdir);
    if (*sc_circuit) return cmd_circuit(cfg, c1, c2, cl, cr);
    if (*sc_tradeoff)
      return cmd_tradeoff(cfg, gamma_token, splus_token, time_token, tradeoff_omega);
    if (*sc_verify) return cmd_verify();
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
