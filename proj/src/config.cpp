#include "qsync/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace qsync {

using ordered_json = nlohmann::ordered_json;

namespace {

const std::set<std::string>& axis_names() {
  static const std::set<std::string> names = {"delta_omega", "mu", "beta", "t1", "g1"};
  return names;
}

const std::set<std::string>& merit_names() {
  static const std::set<std::string> names = {"syn", "sub", "neg", "coll"};
  return names;
}

// beta and t1 carry an "inf" sentinel that JSON numbers cannot express.
double read_extended(const ordered_json& v, const std::string& key) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf") return kInf;
    throw InvalidConfig("config: non-numeric value for " + key + ": \"" + s + "\"");
  }
  if (!v.is_number())
    throw InvalidConfig("config: expected a number for " + key);
  return v.get<double>();
}

ordered_json write_extended(double x) {
  if (std::isinf(x)) return ordered_json("inf");
  return ordered_json(x);
}

void reject_unknown(const ordered_json& section, const std::string& where,
                    const std::set<std::string>& known) {
  for (auto it = section.begin(); it != section.end(); ++it)
    if (known.find(it.key()) == known.end())
      throw InvalidConfig("config: unknown key \"" + it.key() + "\" in " + where);
}

double number_at(const ordered_json& section, const std::string& key, double fallback) {
  if (!section.contains(key)) return fallback;
  const auto& v = section.at(key);
  if (!v.is_number())
    throw InvalidConfig("config: expected a number for " + key);
  return v.get<double>();
}

int int_at(const ordered_json& section, const std::string& key, int fallback) {
  if (!section.contains(key)) return fallback;
  const auto& v = section.at(key);
  if (!v.is_number_integer())
    throw InvalidConfig("config: expected an integer for " + key);
  return v.get<int>();
}

AxisSpec parse_axis(const ordered_json& j, const std::string& where) {
  reject_unknown(j, where, {"name", "scale", "min", "max", "points"});
  AxisSpec axis;
  if (!j.contains("name"))
    throw InvalidConfig("config: " + where + " needs a name");
  axis.name = j.at("name").get<std::string>();
  if (j.contains("scale")) axis.scale = j.at("scale").get<std::string>();
  axis.min = number_at(j, "min", axis.min);
  axis.max = number_at(j, "max", axis.max);
  axis.points = int_at(j, "points", axis.points);
  return axis;
}

ordered_json dump_axis(const AxisSpec& axis) {
  ordered_json j;
  j["name"] = axis.name;
  j["scale"] = axis.scale;
  j["min"] = axis.min;
  j["max"] = axis.max;
  j["points"] = axis.points;
  return j;
}

} // namespace

void validate(const AxisSpec& axis) {
  if (axis_names().find(axis.name) == axis_names().end())
    throw InvalidConfig("config: unknown axis parameter \"" + axis.name + "\"");
  if (axis.scale != "linear" && axis.scale != "log10")
    throw InvalidConfig("config: axis scale must be linear or log10");
  if (axis.points < 2)
    throw InvalidConfig("config: axis needs at least 2 points");
  if (!std::isfinite(axis.min) || !std::isfinite(axis.max))
    throw InvalidConfig("config: axis endpoints must be finite");
  if (axis.scale == "log10" && (axis.min <= 0.0 || axis.max <= 0.0))
    throw InvalidConfig("config: log10 axis endpoints must be positive");
}

void validate(const SweepSpec& sweep) {
  validate(sweep.axis1);
  validate(sweep.axis2);
  if (sweep.axis1.name == sweep.axis2.name)
    throw InvalidConfig("config: sweep axes must reference distinct parameters");
  if (sweep.merits.empty())
    throw InvalidConfig("config: sweep needs at least one merit");
  for (const auto& m : sweep.merits)
    if (merit_names().find(m) == merit_names().end())
      throw InvalidConfig("config: unknown merit \"" + m + "\"");
  for (const auto& [merit, state] : sweep.states) {
    if (merit_names().find(merit) == merit_names().end())
      throw InvalidConfig("config: state override for unknown merit \"" + merit + "\"");
    probe_state(state); // throws on unknown state names
  }
}

AppConfig default_config() {
  AppConfig cfg;
  cfg.model.omega1 = 1.0;
  cfg.model.omega2 = 0.99;
  cfg.model.g1 = 1.0;
  cfg.model.g2 = 1.0;
  cfg.model.bath.mu = std::pow(10.0, -1.5);
  cfg.model.bath.omega_c = 20.0;
  cfg.model.bath.beta = 10.0;
  cfg.model.t1_local = 3e5;
  return cfg;
}

AppConfig load_config(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig(std::string("config: JSON parse error: ") + e.what());
  }
  if (!j.is_object()) throw InvalidConfig("config: top level must be an object");
  reject_unknown(j, "config", {"model", "merit", "sweep", "output"});

  AppConfig cfg = default_config();
  try {
    if (j.contains("model")) {
      const auto& m = j.at("model");
      reject_unknown(m, "model",
                     {"omega1", "omega2", "g1", "g2", "mu", "beta", "t1", "omega_c"});
      cfg.model.omega1 = number_at(m, "omega1", cfg.model.omega1);
      cfg.model.omega2 = number_at(m, "omega2", cfg.model.omega2);
      cfg.model.g1 = number_at(m, "g1", cfg.model.g1);
      cfg.model.g2 = number_at(m, "g2", cfg.model.g2);
      cfg.model.bath.mu = number_at(m, "mu", cfg.model.bath.mu);
      cfg.model.bath.omega_c = number_at(m, "omega_c", cfg.model.bath.omega_c);
      if (m.contains("beta")) cfg.model.bath.beta = read_extended(m.at("beta"), "beta");
      if (m.contains("t1")) cfg.model.t1_local = read_extended(m.at("t1"), "t1");
    }
    if (j.contains("merit")) {
      const auto& m = j.at("merit");
      reject_unknown(m, "merit", {"dominance_factor", "pearson_window", "grid"});
      cfg.merit.dominance_factor = number_at(m, "dominance_factor", cfg.merit.dominance_factor);
      cfg.merit.pearson_window = number_at(m, "pearson_window", cfg.merit.pearson_window);
      if (m.contains("grid")) {
        const auto& g = m.at("grid");
        reject_unknown(g, "merit.grid", {"t_min", "t_max", "points"});
        cfg.merit.grid_t_min = number_at(g, "t_min", cfg.merit.grid_t_min);
        cfg.merit.grid_t_max = number_at(g, "t_max", cfg.merit.grid_t_max);
        cfg.merit.grid_points = int_at(g, "points", cfg.merit.grid_points);
      }
    }
    if (j.contains("sweep")) {
      const auto& s = j.at("sweep");
      reject_unknown(s, "sweep", {"axis1", "axis2", "merits", "states"});
      SweepSpec sweep;
      if (!s.contains("axis1") || !s.contains("axis2"))
        throw InvalidConfig("config: sweep needs axis1 and axis2");
      sweep.axis1 = parse_axis(s.at("axis1"), "sweep.axis1");
      sweep.axis2 = parse_axis(s.at("axis2"), "sweep.axis2");
      if (s.contains("merits"))
        sweep.merits = s.at("merits").get<std::vector<std::string>>();
      if (s.contains("states"))
        sweep.states = s.at("states").get<std::map<std::string, std::string>>();
      validate(sweep);
      cfg.sweep = sweep;
    }
    if (j.contains("output")) {
      const auto& o = j.at("output");
      reject_unknown(o, "output", {"path", "format"});
      if (o.contains("path")) cfg.output.path = o.at("path").get<std::string>();
      if (o.contains("format")) cfg.output.format = o.at("format").get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig(std::string("config: malformed value: ") + e.what());
  }

  if (cfg.output.format != "csv" && cfg.output.format != "json")
    throw InvalidConfig("config: output format must be csv or json");
  try {
    validate(cfg.model);
  } catch (const std::invalid_argument& e) {
    throw InvalidConfig(std::string("config: ") + e.what());
  }
  if (cfg.merit.grid_points < 8)
    throw InvalidConfig("config: merit.grid.points must be at least 8");
  if (!(cfg.merit.grid_t_min > 0.0))
    throw InvalidConfig("config: merit.grid.t_min must be positive");
  return cfg;
}

AppConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_config(buf.str());
}

std::string dump_config(const AppConfig& cfg) {
  ordered_json j;
  auto& m = j["model"];
  m["omega1"] = cfg.model.omega1;
  m["omega2"] = cfg.model.omega2;
  m["g1"] = cfg.model.g1;
  m["g2"] = cfg.model.g2;
  m["mu"] = cfg.model.bath.mu;
  m["beta"] = write_extended(cfg.model.bath.beta);
  m["t1"] = write_extended(cfg.model.t1_local);
  m["omega_c"] = cfg.model.bath.omega_c;
  auto& mer = j["merit"];
  mer["dominance_factor"] = cfg.merit.dominance_factor;
  mer["pearson_window"] = cfg.merit.pearson_window;
  mer["grid"]["t_min"] = cfg.merit.grid_t_min;
  mer["grid"]["t_max"] = cfg.merit.grid_t_max;
  mer["grid"]["points"] = cfg.merit.grid_points;
  if (cfg.sweep) {
    auto& s = j["sweep"];
    s["axis1"] = dump_axis(cfg.sweep->axis1);
    s["axis2"] = dump_axis(cfg.sweep->axis2);
    s["merits"] = cfg.sweep->merits;
    if (!cfg.sweep->states.empty()) s["states"] = cfg.sweep->states;
  }
  auto& o = j["output"];
  o["path"] = cfg.output.path;
  o["format"] = cfg.output.format;
  return j.dump();
}

std::vector<double> axis_values(const AxisSpec& axis) {
  validate(axis);
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

ModelParams apply_axis(ModelParams base, const std::string& name, double value) {
  if (name == "delta_omega") {
    base.omega2 = base.omega1 - value;
  } else if (name == "mu") {
    base.bath.mu = value;
  } else if (name == "beta") {
    base.bath.beta = value;
  } else if (name == "t1") {
    base.t1_local = value;
  } else if (name == "g1") {
    base.g1 = value;
    base.g2 = 2.0 - value;
  } else {
    throw InvalidConfig("config: unknown axis parameter \"" + name + "\"");
  }
  return base;
}

Matrix4 probe_state(const std::string& name) {
  if (name == "syn_probe") return syn_probe_state();
  if (name == "singlet") return singlet_state();
  if (name == "coherent") return coherent_probe_state();
  if (name == "ee") return basis_state(0);
  if (name == "eg") return basis_state(1);
  if (name == "ge") return basis_state(2);
  if (name == "gg") return basis_state(3);
  throw InvalidConfig("config: unknown probe state \"" + name + "\"");
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0.0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::string(buf);
}

} // namespace qsync
