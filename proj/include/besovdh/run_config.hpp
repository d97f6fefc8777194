#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "besovdh/experiments.hpp"

namespace besovdh {

/// Config-file failure with the offending line number baked into the message.
struct ConfigError : std::runtime_error {
  explicit ConfigError(int line, const std::string& what)
      : std::runtime_error("config line " + std::to_string(line) + ": " + what), line_no(line) {}
  int line_no;
};

/// Flat INI: [section] headers, key = value pairs, '#' or ';' comments.
class IniFile {
 public:
  static IniFile parse(std::istream& in) {
    IniFile ini;
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto comment = line.find_first_of("#;");
      if (comment != std::string::npos) line.erase(comment);
      const std::string t = trim(line);
      if (t.empty()) continue;
      if (t.front() == '[') {
        if (t.back() != ']' || t.size() < 3) throw ConfigError(line_no, "malformed section header");
        section = trim(t.substr(1, t.size() - 2));
        continue;
      }
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw ConfigError(line_no, "expected key = value");
      const std::string key = trim(t.substr(0, eq));
      const std::string value = trim(t.substr(eq + 1));
      if (key.empty()) throw ConfigError(line_no, "empty key");
      if (value.empty()) throw ConfigError(line_no, "empty value for key '" + key + "'");
      const std::string full = section.empty() ? key : section + "." + key;
      if (ini.values_.count(full)) throw ConfigError(line_no, "duplicate key '" + full + "'");
      ini.values_[full] = value;
      ini.lines_[full] = line_no;
    }
    return ini;
  }

  static IniFile parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path.string());
    return parse(in);
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }
  int line_of(const std::string& key) const { return lines_.at(key); }

  std::string get_string(const std::string& key, std::string fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
      std::size_t used = 0;
      const double v = std::stod(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      throw ConfigError(lines_.at(key), "'" + key + "' is not a number: " + it->second);
    }
  }

  long long get_int(const std::string& key, long long fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
      std::size_t used = 0;
      const long long v = std::stoll(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      throw ConfigError(lines_.at(key), "'" + key + "' is not an integer: " + it->second);
    }
  }

  bool get_bool(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
    if (it->second == "false" || it->second == "0" || it->second == "no") return false;
    throw ConfigError(lines_.at(key), "'" + key + "' is not a boolean: " + it->second);
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;
};

/// Parsed and validated run configuration: grid, solver, experiment and
/// output settings. Unknown keys are rejected with their line number.
struct RunConfig {
  ExperimentSpec experiment;  // also carries grid and solver fields
  bool dealias = true;
  bool auto_project = true;
  double picard_tol = 1e-9;
  int picard_max_iter = 40;
  int store_every = 1;
  std::string output_dir = "out";
  bool emit_svg = false;
  bool seed_was_set = false;

  Grid grid() const { return experiment.grid(); }

  SolverConfig solver() const {
    SolverConfig cfg = experiment.solver();
    cfg.dealias_products = dealias;
    cfg.auto_project = auto_project;
    cfg.picard_tol = picard_tol;
    cfg.picard_max_iter = picard_max_iter;
    cfg.store_every = store_every;
    return cfg;
  }

  static const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "grid.dim",           "grid.points",          "grid.length",
        "solver.dt",          "solver.horizon",       "solver.p",
        "solver.q",           "solver.r1",            "solver.dealias",
        "solver.auto_project", "solver.picard_tol",   "solver.picard_max_iter",
        "solver.store_every",
        "experiment.kind",    "experiment.seed",      "experiment.amplitude",
        "experiment.trials",  "experiment.tol_linear", "experiment.tol_nonlinear",
        "experiment.tol_profile", "experiment.constant_trials",
        "output.directory",   "output.svg"};
    return keys;
  }

  static RunConfig from_ini(const IniFile& ini) {
    for (const auto& [key, value] : ini.values())
      if (!known_keys().count(key))
        throw ConfigError(ini.line_of(key), "unknown key '" + key + "'");

    RunConfig rc;
    rc.experiment.dim = int(ini.get_int("grid.dim", rc.experiment.dim));
    rc.experiment.points = int(ini.get_int("grid.points", rc.experiment.points));
    rc.experiment.box = ini.get_double("grid.length", rc.experiment.box);
    rc.experiment.dt = ini.get_double("solver.dt", rc.experiment.dt);
    rc.experiment.horizon = ini.get_double("solver.horizon", rc.experiment.horizon);
    rc.experiment.p = ini.get_double("solver.p", rc.experiment.p);
    rc.experiment.q = ini.get_double("solver.q", rc.experiment.q);
    rc.experiment.r1 = ini.get_double("solver.r1", rc.experiment.r1);
    rc.dealias = ini.get_bool("solver.dealias", rc.dealias);
    rc.auto_project = ini.get_bool("solver.auto_project", rc.auto_project);
    rc.picard_tol = ini.get_double("solver.picard_tol", rc.picard_tol);
    rc.picard_max_iter = int(ini.get_int("solver.picard_max_iter", rc.picard_max_iter));
    rc.store_every = int(ini.get_int("solver.store_every", rc.store_every));
    if (ini.has("experiment.kind"))
      rc.experiment.kind = experiment_kind_from(ini.get_string("experiment.kind", ""));
    if (ini.has("experiment.seed")) {
      rc.experiment.seed = std::uint64_t(ini.get_int("experiment.seed", 0));
      rc.seed_was_set = true;
    }
    rc.experiment.amplitude = ini.get_double("experiment.amplitude", rc.experiment.amplitude);
    rc.experiment.trials = int(ini.get_int("experiment.trials", rc.experiment.trials));
    rc.experiment.tol_linear = ini.get_double("experiment.tol_linear", rc.experiment.tol_linear);
    rc.experiment.tol_nonlinear =
        ini.get_double("experiment.tol_nonlinear", rc.experiment.tol_nonlinear);
    rc.experiment.tol_profile = ini.get_double("experiment.tol_profile", rc.experiment.tol_profile);
    rc.experiment.constant_trials =
        int(ini.get_int("experiment.constant_trials", rc.experiment.constant_trials));
    rc.output_dir = ini.get_string("output.directory", rc.output_dir);
    rc.emit_svg = ini.get_bool("output.svg", rc.emit_svg);
    rc.validate();
    return rc;
  }

  void validate() const {
    experiment.grid();
    solver().validate();
    if (!(picard_tol > 0) || !(experiment.tol_linear > 0) || !(experiment.tol_nonlinear > 0) ||
        !(experiment.tol_profile > 0))
      throw std::invalid_argument("config: tolerances must be positive");
  }
};

}  // namespace besovdh
