#pragma once

// Parameter-sweep engine (deterministic axis1-major order, bounded worker
// pool, per-point errors recorded inline), the reference scenario runner,
// the infinite-temperature trade-off grid, and the CSV/JSON emitters.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qsync/config.hpp"
#include "qsync/metrics.hpp"

namespace qsync {

struct SweepRow {
  double a1 = 0.0;
  double a2 = 0.0;
  MeritReport report;
  Complex slow_pop{0.0, 0.0}; // slowest decaying population eigenvalue
  Complex slow_coh{0.0, 0.0}; // slowest coherence eigenvalue
  std::string error;          // empty on success, "<stage>:<Error>" tags otherwise
};

struct SweepResult {
  AxisSpec axis1, axis2;
  std::vector<SweepRow> rows; // axis1-major
};

// Worker pool size: QSYNC_WORKERS when set and positive, else the hardware
// concurrency. The pool only affects scheduling, never results or order.
int worker_count();

// Evaluate the requested merits on prepared spectra. When error is non-null,
// per-merit failures are appended there and the merit stays NaN; when null,
// failures propagate to the caller.
MeritReport compute_merit_report(const SystemSpectra& spectra,
                                 const ModelParams& model, MeritConfig cfg,
                                 const std::vector<std::string>& merits,
                                 const std::map<std::string, std::string>& states,
                                 std::string* error);

SweepResult run_sweep(const AppConfig& cfg);

void write_sweep_csv(std::ostream& out, const AppConfig& cfg, const SweepResult& result);
void write_sweep_json(std::ostream& out, const AppConfig& cfg, const SweepResult& result);

// One axis of the (gamma, s_plus, t) trade-off grid; points = 1 pins the
// axis at min.
struct TradeoffAxis {
  double min = 0.0;
  double max = 0.0;
  int points = 1;
  std::string scale = "linear"; // linear | log10
};

std::vector<double> tradeoff_values(const TradeoffAxis& axis);

struct TradeoffRow {
  double gamma = 0.0;
  double s_plus = 0.0;
  double t = 0.0;
  double neg = 0.0;
  double coll = 0.0;
  std::string error;
};

// Dense grid over the infinite-temperature generator, gamma-major then
// s_plus then t. Negativity is evaluated on the coherent product probe.
std::vector<TradeoffRow> run_tradeoff(const TradeoffAxis& gamma,
                                      const TradeoffAxis& s_plus,
                                      const TradeoffAxis& time,
                                      double omega = 1.0);

void write_tradeoff_csv(std::ostream& out, const AppConfig& cfg,
                        const std::vector<TradeoffRow>& rows);
void write_tradeoff_json(std::ostream& out, const AppConfig& cfg,
                         const std::vector<TradeoffRow>& rows);

struct ScenarioResult {
  MeritReport report;
  double pearson_lock_time = 0.0; // first sustained |C| >= 0.99
};

// Full single-point study at the configured parameters: merit report plus
// trajectory files (local coherences, excited populations, windowed Pearson
// coefficient, negativity, collectiveness) written into outdir.
ScenarioResult run_scenario(const AppConfig& cfg, const std::string& outdir);

} // namespace qsync
