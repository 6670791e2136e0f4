#pragma once

// Run configuration: a single JSON document with model, merit, sweep and
// output sections. Every field has a default (the reference two-transmon
// scenario), "inf" is accepted for beta and t1, and the effective config
// can be serialized back to a canonical one-line echo that re-parses to
// the identical parameter set.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsync/metrics.hpp"
#include "qsync/types.hpp"

namespace qsync {

struct InvalidConfig : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// One sweep axis. Valid names: delta_omega, mu, beta, t1, g1. The g1 axis
// moves along the fixed-total family g2 = 2 - g1 used by the unbalanced
// coupling maps.
struct AxisSpec {
  std::string name;
  std::string scale = "linear"; // linear | log10
  double min = 0.0;
  double max = 0.0;
  int points = 2;
};

struct SweepSpec {
  AxisSpec axis1;
  AxisSpec axis2;
  std::vector<std::string> merits = {"syn", "sub", "neg", "coll"};
  // Optional probe-state override per merit, e.g. {"neg": "singlet"}.
  std::map<std::string, std::string> states;
};

struct OutputSpec {
  std::string path;           // empty = stdout
  std::string format = "csv"; // csv | json
};

struct AppConfig {
  ModelParams model;
  MeritConfig merit;
  std::optional<SweepSpec> sweep;
  OutputSpec output;
};

void validate(const AxisSpec& axis);
void validate(const SweepSpec& sweep);

// Reference scenario defaults: delta_omega = 0.01, mu = 10^-1.5, beta = 10,
// T1 = 3e5, g1 = g2 = 1, omega_c = 20.
AppConfig default_config();

AppConfig load_config(const std::string& json_text);
AppConfig load_config_file(const std::string& path);

// Canonical one-line JSON echo of the effective configuration.
std::string dump_config(const AppConfig& cfg);

// The sampled grid of one axis, in declaration order.
std::vector<double> axis_values(const AxisSpec& axis);

// Apply one axis value to a model (g1 implies g2 = 2 - g1).
ModelParams apply_axis(ModelParams base, const std::string& name, double value);

// Probe-state registry for per-merit initial-state overrides. Known names:
// syn_probe, singlet, coherent, ee, eg, ge, gg.
Matrix4 probe_state(const std::string& name);

// Fixed-format numeric rendering shared by all writers: 12 significant
// digits, "inf"/"nan" literals for the sentinels.
std::string format_number(double x);

} // namespace qsync
