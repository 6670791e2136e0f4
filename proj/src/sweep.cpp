#include "qsync/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "qsync/lindblad.hpp"
#include "qsync/spectral.hpp"

namespace qsync {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string error_name(const std::exception& e) {
  if (dynamic_cast<const QuadratureFailure*>(&e)) return "QuadratureFailure";
  if (dynamic_cast<const NonDiagonalizable*>(&e)) return "NonDiagonalizable";
  if (dynamic_cast<const NotPhaseCovariant*>(&e)) return "NotPhaseCovariant";
  if (dynamic_cast<const NoSlowMode*>(&e)) return "NoSlowMode";
  if (dynamic_cast<const DegenerateWindow*>(&e)) return "DegenerateWindow";
  if (dynamic_cast<const DegenerateFrequency*>(&e)) return "DegenerateFrequency";
  if (dynamic_cast<const DegenerateDenominator*>(&e)) return "DegenerateDenominator";
  if (dynamic_cast<const CpViolation*>(&e)) return "CpViolation";
  if (dynamic_cast<const InvalidConfig*>(&e)) return "InvalidConfig";
  return "Error";
}

void append_error(std::string& error, const std::string& tag) {
  if (!error.empty()) error += ';';
  error += tag;
}

// Run fn; record a "<stage>:<Error>" tag when error is non-null, propagate
// otherwise.
template <class Fn>
void guarded(const std::string& stage, std::string* error, Fn&& fn) {
  if (error == nullptr) {
    fn();
    return;
  }
  try {
    fn();
  } catch (const std::exception& e) {
    append_error(*error, stage + ":" + error_name(e));
  }
}

void fill_diagnostics(const SystemSpectra& spectra, SweepRow& row) {
  const double tol = spectra.steady_tol();
  const auto& pop = spectra.blocks.at(0).eigenvalues;
  for (int j = 0; j < pop.size(); ++j) {
    if (std::abs(pop(j)) >= tol) {
      row.slow_pop = pop(j);
      break;
    }
  }
  row.slow_coh = spectra.blocks.at(1).eigenvalues(0);
}

const std::vector<std::string>& sweep_merit_columns() {
  static const std::vector<std::string> cols = {
      "syn",      "t_sync",     "sub",         "t_sub",
      "neg_max",  "t_neg_max",  "coll_max",    "t_coll_max",
      "slow_pop_re", "slow_pop_im", "slow_coh_re", "slow_coh_im"};
  return cols;
}

std::vector<double> sweep_row_values(const SweepRow& row) {
  return {row.report.syn,      row.report.t_sync,     row.report.sub,
          row.report.t_sub,    row.report.neg_max,    row.report.t_neg_max,
          row.report.coll_max, row.report.t_coll_max, row.slow_pop.real(),
          row.slow_pop.imag(), row.slow_coh.real(),   row.slow_coh.imag()};
}

ordered_json json_number(double x) {
  if (std::isnan(x)) return ordered_json("nan");
  if (std::isinf(x)) return ordered_json(x > 0.0 ? "inf" : "-inf");
  return ordered_json(x);
}

void write_csv_preamble(std::ostream& out, const AppConfig& cfg,
                        const std::vector<std::string>& columns) {
  out << "# config: " << dump_config(cfg) << "\n";
  out << "# columns: ";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i > 0) out << ',';
    out << columns[i];
  }
  out << "\n";
}

} // namespace

int worker_count() {
  if (const char* env = std::getenv("QSYNC_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

MeritReport compute_merit_report(const SystemSpectra& spectra,
                                 const ModelParams& model, MeritConfig cfg,
                                 const std::vector<std::string>& merits,
                                 const std::map<std::string, std::string>& states,
                                 std::string* error) {
  if (std::isfinite(model.t1_local)) cfg.t1_hint = model.t1_local;

  auto wanted = [&](const char* name) {
    return std::find(merits.begin(), merits.end(), name) != merits.end();
  };
  auto state_for = [&](const char* merit, Matrix4 (*fallback)()) {
    const auto it = states.find(merit);
    return it == states.end() ? fallback() : probe_state(it->second);
  };

  MeritReport rep;
  if (wanted("syn"))
    guarded("syn", error, [&] {
      const DecayMeasure d =
          synchronization_measure(spectra, state_for("syn", &syn_probe_state), cfg);
      rep.t_sync = d.threshold_time;
      rep.syn = d.measure;
    });
  if (wanted("sub"))
    guarded("sub", error, [&] {
      const DecayMeasure d =
          subradiance_measure(spectra, state_for("sub", &singlet_state), cfg);
      rep.t_sub = d.threshold_time;
      rep.sub = d.measure;
    });
  if (wanted("neg"))
    guarded("neg", error, [&] {
      const PeakMeasure p =
          max_negativity(spectra, state_for("neg", &coherent_probe_state), cfg);
      rep.neg_max = p.value;
      rep.t_neg_max = p.time;
    });
  if (wanted("coll"))
    guarded("coll", error, [&] {
      const PeakMeasure p = max_collectiveness(spectra, cfg);
      rep.coll_max = p.value;
      rep.t_coll_max = p.time;
      collectiveness(propagator(spectra, p.time), &rep.choi_defect);
      if (error != nullptr && rep.choi_defect < -1e-10)
        append_error(*error, "coll:CpDefect");
    });
  return rep;
}

SweepResult run_sweep(const AppConfig& cfg) {
  if (!cfg.sweep) throw InvalidConfig("config: sweep section required");
  const SweepSpec& spec = *cfg.sweep;
  validate(spec);

  const std::vector<double> v1 = axis_values(spec.axis1);
  const std::vector<double> v2 = axis_values(spec.axis2);
  const int n2 = static_cast<int>(v2.size());
  const int total = static_cast<int>(v1.size()) * n2;

  SweepResult result;
  result.axis1 = spec.axis1;
  result.axis2 = spec.axis2;
  result.rows.resize(static_cast<std::size_t>(total));

  std::atomic<int> next{0};
  auto work = [&] {
    for (int k = next.fetch_add(1); k < total; k = next.fetch_add(1)) {
      const std::size_t i = static_cast<std::size_t>(k / n2);
      const std::size_t j = static_cast<std::size_t>(k % n2);
      SweepRow row;
      row.a1 = v1[i];
      row.a2 = v2[j];
      try {
        ModelParams model = apply_axis(cfg.model, spec.axis1.name, v1[i]);
        model = apply_axis(model, spec.axis2.name, v2[j]);
        validate(model);
        const RateSet rates = compute_rates(model);
        const SystemSpectra spectra =
            diagonalize(block_decompose(build_liouvillian(rates, model)));
        fill_diagnostics(spectra, row);
        row.report = compute_merit_report(spectra, model, cfg.merit, spec.merits,
                                          spec.states, &row.error);
      } catch (const std::exception& e) {
        append_error(row.error, std::string("point:") + error_name(e));
      }
      result.rows[static_cast<std::size_t>(k)] = row;
    }
  };

  const int workers = std::max(1, std::min(worker_count(), total));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers - 1));
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return result;
}

void write_sweep_csv(std::ostream& out, const AppConfig& cfg, const SweepResult& result) {
  std::vector<std::string> columns = {result.axis1.name, result.axis2.name};
  for (const auto& c : sweep_merit_columns()) columns.push_back(c);
  columns.push_back("error");
  write_csv_preamble(out, cfg, columns);
  for (const auto& row : result.rows) {
    out << format_number(row.a1) << ',' << format_number(row.a2);
    for (double v : sweep_row_values(row)) out << ',' << format_number(v);
    out << ',' << row.error << "\n";
  }
}

void write_sweep_json(std::ostream& out, const AppConfig& cfg, const SweepResult& result) {
  std::vector<std::string> columns = {result.axis1.name, result.axis2.name};
  for (const auto& c : sweep_merit_columns()) columns.push_back(c);
  columns.push_back("error");

  ordered_json j;
  j["config"] = ordered_json::parse(dump_config(cfg));
  j["columns"] = columns;
  auto& rows = j["rows"];
  rows = ordered_json::array();
  for (const auto& row : result.rows) {
    ordered_json r;
    r[columns[0]] = json_number(row.a1);
    r[columns[1]] = json_number(row.a2);
    const auto values = sweep_row_values(row);
    for (std::size_t c = 0; c < values.size(); ++c)
      r[columns[c + 2]] = json_number(values[c]);
    r["error"] = row.error;
    rows.push_back(std::move(r));
  }
  out << j.dump(2) << "\n";
}

std::vector<double> tradeoff_values(const TradeoffAxis& axis) {
  if (axis.points < 1)
    throw InvalidConfig("tradeoff: axis needs at least 1 point");
  if (axis.scale != "linear" && axis.scale != "log10")
    throw InvalidConfig("tradeoff: axis scale must be linear or log10");
  if (axis.points == 1) return {axis.min};
  if (axis.scale == "log10" && (axis.min <= 0.0 || axis.max <= 0.0))
    throw InvalidConfig("tradeoff: log10 axis endpoints must be positive");
  std::vector<double> values(static_cast<std::size_t>(axis.points));
  const int n = axis.points;
  if (axis.scale == "log10") {
    const double la = std::log10(axis.min), lb = std::log10(axis.max);
    for (int i = 0; i < n; ++i)
      values[static_cast<std::size_t>(i)] = std::pow(10.0, la + (lb - la) * i / (n - 1));
  } else {
    for (int i = 0; i < n; ++i)
      values[static_cast<std::size_t>(i)] = axis.min + (axis.max - axis.min) * i / (n - 1);
  }
  return values;
}

std::vector<TradeoffRow> run_tradeoff(const TradeoffAxis& gamma,
                                      const TradeoffAxis& s_plus,
                                      const TradeoffAxis& time, double omega) {
  const auto gv = tradeoff_values(gamma);
  const auto sv = tradeoff_values(s_plus);
  const auto tv = tradeoff_values(time);

  std::vector<TradeoffRow> rows;
  rows.reserve(gv.size() * sv.size() * tv.size());
  const Matrix4 probe = coherent_probe_state();
  for (double g : gv) {
    for (double s : sv) {
      // The generator is fixed along the time axis; exponentiate once per
      // (gamma, s_plus) pair and reuse the eigenbasis through expm.
      for (double t : tv) {
        TradeoffRow row;
        row.gamma = g;
        row.s_plus = s;
        row.t = t;
        try {
          const Superop e = propagator(build_linf(omega, g, s), t);
          row.neg = negativity(unvectorize(Vector16(e * vectorize(probe))));
          row.coll = collectiveness(e);
        } catch (const std::exception& ex) {
          row.neg = std::numeric_limits<double>::quiet_NaN();
          row.coll = std::numeric_limits<double>::quiet_NaN();
          append_error(row.error, std::string("point:") + error_name(ex));
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

void write_tradeoff_csv(std::ostream& out, const AppConfig& cfg,
                        const std::vector<TradeoffRow>& rows) {
  write_csv_preamble(out, cfg, {"gamma", "s_plus", "t", "negativity",
                                "collectiveness", "error"});
  for (const auto& row : rows) {
    out << format_number(row.gamma) << ',' << format_number(row.s_plus) << ','
        << format_number(row.t) << ',' << format_number(row.neg) << ','
        << format_number(row.coll) << ',' << row.error << "\n";
  }
}

void write_tradeoff_json(std::ostream& out, const AppConfig& cfg,
                         const std::vector<TradeoffRow>& rows) {
  ordered_json j;
  j["config"] = ordered_json::parse(dump_config(cfg));
  j["columns"] = {"gamma", "s_plus", "t", "negativity", "collectiveness", "error"};
  auto& out_rows = j["rows"];
  out_rows = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json r;
    r["gamma"] = json_number(row.gamma);
    r["s_plus"] = json_number(row.s_plus);
    r["t"] = json_number(row.t);
    r["negativity"] = json_number(row.neg);
    r["collectiveness"] = json_number(row.coll);
    r["error"] = row.error;
    out_rows.push_back(std::move(r));
  }
  out << j.dump(2) << "\n";
}

namespace {

void write_trajectory_csv(const std::filesystem::path& path, const AppConfig& cfg,
                          const std::vector<std::string>& columns,
                          const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary); // binary keeps LF endings everywhere
  if (!out) throw std::runtime_error("cannot open " + path.string());
  write_csv_preamble(out, cfg, columns);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ',';
      out << format_number(row[i]);
    }
    out << "\n";
  }
}

std::vector<double> geometric_grid(double t_min, double t_max, int n) {
  std::vector<double> ts(static_cast<std::size_t>(n));
  const double la = std::log(t_min), lb = std::log(t_max);
  for (int i = 0; i < n; ++i)
    ts[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * i / (n - 1));
  return ts;
}

} // namespace

ScenarioResult run_scenario(const AppConfig& cfg, const std::string& outdir) {
  const ModelParams& model = cfg.model;
  validate(model);
  std::filesystem::create_directories(outdir);
  const std::filesystem::path dir(outdir);

  const RateSet rates = compute_rates(model);
  const SystemSpectra spectra =
      diagonalize(block_decompose(build_liouvillian(rates, model)));

  MeritConfig mc = cfg.merit;
  if (std::isfinite(model.t1_local)) mc.t1_hint = model.t1_local;

  ScenarioResult res;
  res.report = compute_merit_report(spectra, model, cfg.merit,
                                    {"syn", "sub", "neg", "coll"}, {}, nullptr);

  const auto coh = coherence_modes(spectra, syn_probe_state());
  const auto pop = population_modes(spectra, singlet_state());
  res.pearson_lock_time = pearson_locking_time(coh, 0.99, mc);

  // Local-coherence and excited-population trajectories on a linear grid
  // wide enough to cover the dominance times.
  {
    std::vector<std::vector<double>> rows;
    for (double t = 0.0; t <= 1200.0; t += 0.5)
      rows.push_back({t, mode_signal(coh, 0, t), mode_signal(coh, 1, t)});
    write_trajectory_csv(dir / "sx_vs_time.csv", cfg, {"t", "sx1", "sx2"}, rows);
  }
  {
    std::vector<std::vector<double>> rows;
    for (double t = 0.0; t <= 1200.0; t += 0.5)
      rows.push_back({t, mode_signal(pop, 0, t), mode_signal(pop, 1, t)});
    write_trajectory_csv(dir / "pe_vs_time.csv", cfg, {"t", "pe1", "pe2"}, rows);
  }
  {
    auto f1 = [&](double t) { return mode_signal(coh, 0, t); };
    auto f2 = [&](double t) { return mode_signal(coh, 1, t); };
    std::vector<std::vector<double>> rows;
    for (double t0 = 0.0; t0 <= 1000.0; t0 += 2.0) {
      double c;
      try {
        c = pearson_correlation(f1, f2, t0, mc.pearson_window);
      } catch (const DegenerateWindow&) {
        break; // signals decayed below the variance floor
      }
      rows.push_back({t0, c});
    }
    write_trajectory_csv(dir / "pearson_vs_time.csv", cfg, {"t", "pearson"}, rows);
  }
  {
    const Matrix4 probe = coherent_probe_state();
    std::vector<std::vector<double>> rows;
    for (double t : geometric_grid(1e-2, 1e4, 481))
      rows.push_back({t, negativity(evolve(spectra, probe, t))});
    write_trajectory_csv(dir / "negativity_vs_time.csv", cfg, {"t", "negativity"}, rows);
  }
  {
    std::vector<std::vector<double>> rows;
    for (double t : geometric_grid(1e-2, 1e4, 241))
      rows.push_back({t, collectiveness(propagator(spectra, t))});
    write_trajectory_csv(dir / "collectiveness_vs_time.csv", cfg,
                         {"t", "collectiveness"}, rows);
  }

  ordered_json j;
  j["config"] = ordered_json::parse(dump_config(cfg));
  auto& rep = j["report"];
  rep["syn"] = json_number(res.report.syn);
  rep["t_sync"] = json_number(res.report.t_sync);
  rep["sub"] = json_number(res.report.sub);
  rep["t_sub"] = json_number(res.report.t_sub);
  rep["neg_max"] = json_number(res.report.neg_max);
  rep["t_neg_max"] = json_number(res.report.t_neg_max);
  rep["coll_max"] = json_number(res.report.coll_max);
  rep["t_coll_max"] = json_number(res.report.t_coll_max);
  rep["choi_min_eigenvalue"] = json_number(res.report.choi_defect);
  rep["pearson_lock_time"] = json_number(res.pearson_lock_time);
  std::ofstream out(dir / "merits.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + (dir / "merits.json").string());
  out << j.dump(2) << "\n";

  return res;
}

} // namespace qsync
