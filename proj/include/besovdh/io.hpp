#pragma once

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "besovdh/audits.hpp"
#include "besovdh/bernstein.hpp"
#include "besovdh/experiments.hpp"

namespace besovdh {

// ---------------------------------------------------------------------------
// DHF1 field snapshots: 4-byte magic "DHF1", little-endian u32 dim, u32 M,
// f64 L, then M^n f64 physical values, row-major. (Writer assumes a
// little-endian host, which every supported target is.)
// ---------------------------------------------------------------------------

inline void write_dhf1(const std::filesystem::path& path, const SpectralField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("dhf1: cannot open for writing: " + path.string());
  const RealArray values = inverse_transform(f);
  out.write("DHF1", 4);
  const std::uint32_t n = std::uint32_t(f.grid.dim), m = std::uint32_t(f.grid.points);
  const double box = f.grid.length;
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(reinterpret_cast<const char*>(&m), 4);
  out.write(reinterpret_cast<const char*>(&box), 8);
  out.write(reinterpret_cast<const char*>(values.data()),
            std::streamsize(sizeof(double)) * values.size());
  if (!out) throw std::runtime_error("dhf1: short write: " + path.string());
}

inline SpectralField read_dhf1(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("dhf1: cannot open: " + path.string());
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "DHF1", 4) != 0)
    throw std::runtime_error("dhf1: bad magic in " + path.string());
  std::uint32_t n = 0, m = 0;
  double box = 0;
  in.read(reinterpret_cast<char*>(&n), 4);
  in.read(reinterpret_cast<char*>(&m), 4);
  in.read(reinterpret_cast<char*>(&box), 8);
  if (!in || m % 2 != 0) throw std::runtime_error("dhf1: non-even grid in " + path.string());
  Grid grid(int(n), int(m), box);
  RealArray values(grid.total());
  in.read(reinterpret_cast<char*>(values.data()), std::streamsize(sizeof(double)) * values.size());
  if (!in) throw std::runtime_error("dhf1: truncated payload in " + path.string());
  return forward_transform(grid, values);
}

// ---------------------------------------------------------------------------
// CSV shell report: per-shell L^p norms with their 2^{js} weights, the mean
// reported separately, and a summary row carrying the assembled Besov norm.
// ---------------------------------------------------------------------------

inline std::string shell_report_csv(const SpectralField& f, const BesovIndex& idx,
                                    const DyadicPartition& part) {
  std::ostringstream out;
  out.precision(17);
  out << "j,shell_lp_norm,weight_2js\n";
  const Eigen::ArrayXd norms = shell_norms(f, part, idx.p);
  const int j0 = f.grid.shell_min();
  for (int i = 0; i < norms.size(); ++i)
    out << (j0 + i) << ',' << norms[i] << ',' << std::exp2(idx.s * (j0 + i)) << '\n';
  out << "mean," << f.mean().real() << ",0\n";
  out << "besov," << shell_lq(norms, j0, idx.s, idx.q) << ",1\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Minimal SVG polyline chart, one series per column of ys.
// ---------------------------------------------------------------------------

inline void write_svg_lines(const std::filesystem::path& path, const std::vector<double>& xs,
                            const std::vector<std::vector<double>>& series,
                            const std::string& title) {
  if (xs.empty() || series.empty()) throw std::invalid_argument("svg: empty data");
  const int w = 640, h = 400, pad = 48;
  double xmin = xs.front(), xmax = xs.back();
  double ymin = series[0][0], ymax = ymin;
  for (const auto& s : series)
    for (double v : s) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  auto X = [&](double x) { return pad + (x - xmin) / (xmax - xmin) * (w - 2 * pad); };
  auto Y = [&](double y) { return h - pad - (y - ymin) / (ymax - ymin) * (h - 2 * pad); };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("svg: cannot open " + path.string());
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n"
      << "<text x='" << w / 2 << "' y='20' text-anchor='middle' font-size='14'>" << title
      << "</text>\n"
      << "<line x1='" << pad << "' y1='" << h - pad << "' x2='" << w - pad << "' y2='" << h - pad
      << "' stroke='black'/>\n"
      << "<line x1='" << pad << "' y1='" << pad << "' x2='" << pad << "' y2='" << h - pad
      << "' stroke='black'/>\n";
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  for (std::size_t s = 0; s < series.size(); ++s) {
    out << "<polyline fill='none' stroke='" << palette[s % 5] << "' points='";
    for (std::size_t i = 0; i < xs.size() && i < series[s].size(); ++i)
      out << X(xs[i]) << ',' << Y(series[s][i]) << ' ';
    out << "'/>\n";
  }
  out << "<text x='" << pad << "' y='" << h - pad + 16 << "' font-size='11'>" << xmin
      << "</text>\n"
      << "<text x='" << w - pad << "' y='" << h - pad + 16 << "' text-anchor='end' font-size='11'>"
      << xmax << "</text>\n"
      << "<text x='" << pad << "' y='" << pad - 6 << "' font-size='11'>" << ymax << "</text>\n"
      << "</svg>\n";
}

// ---------------------------------------------------------------------------
// Trajectory export: DHF1 snapshots plus a JSON index.
// ---------------------------------------------------------------------------

inline nlohmann::json export_trajectory(const std::filesystem::path& dir, const Trajectory& traj,
                                        const std::string& basename) {
  std::filesystem::create_directories(dir);
  nlohmann::json index;
  index["times"] = traj.times;
  index["fields"] = {"v", "w"};
  nlohmann::json files = nlohmann::json::array();
  for (std::size_t i = 0; i < traj.samples(); ++i) {
    char tag[32];
    std::snprintf(tag, sizeof tag, "%s_%04zu", basename.c_str(), i);
    const std::string fv = std::string(tag) + "_v.dhf1";
    const std::string fw = std::string(tag) + "_w.dhf1";
    write_dhf1(dir / fv, traj.states[i].v);
    write_dhf1(dir / fw, traj.states[i].w);
    files.push_back({{"t", traj.times[i]}, {"v", fv}, {"w", fw}});
  }
  index["snapshots"] = files;
  for (const auto& [key, table] : traj.shell_cache) {
    nlohmann::json cache;
    cache["field"] = key.first == int(FieldSel::V) ? "v" : "w";
    cache["p"] = key.second;
    cache["shell_min"] = traj.grid().shell_min();
    std::vector<std::vector<double>> rows;
    for (Eigen::Index r = 0; r < table.rows(); ++r)
      rows.emplace_back(table.row(r).begin(), table.row(r).end());
    cache["norms"] = rows;
    index["shell_norm_cache"].push_back(cache);
  }
  std::ofstream out(dir / (basename + "_index.json"));
  out << index.dump(2) << '\n';
  return index;
}

// ---------------------------------------------------------------------------
// JSON serialization of the report structs.
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const BesovIndex& idx) {
  return {{"s", idx.s}, {"p", idx.p}, {"q", idx.q}};
}

inline nlohmann::json to_json(const BernsteinReport& r) {
  return {{"kind", "bernstein_audit"},
          {"s", r.s},
          {"p", r.p},
          {"q", r.q},
          {"seed", r.seed},
          {"trials", r.trials},
          {"shells", r.shells},
          {"max_ratio_per_shell", r.max_ratio_per_shell},
          {"max_ratio", r.max_ratio},
          {"spread", r.spread},
          {"stable", r.stable}};
}

inline nlohmann::json to_json(const HeatSmoothingReport& r) {
  std::vector<std::vector<double>> grid;
  for (Eigen::Index i = 0; i < r.max_ratio.rows(); ++i)
    grid.emplace_back(r.max_ratio.row(i).begin(), r.max_ratio.row(i).end());
  return {{"kind", "heat_audit"},       {"base", to_json(r.base)},
          {"rs", r.rs},                 {"horizons", r.horizons},
          {"seed", r.seed},             {"trials", r.trials},
          {"samples", r.samples},       {"max_ratio", grid},
          {"spread_per_r", r.spread_per_r}, {"overall_max", r.overall_max},
          {"max_spread", r.max_spread}, {"stable", r.stable}};
}

inline nlohmann::json to_json(const ProductEstimateReport& r) {
  return {{"kind", "product_audit"},
          {"s1", r.s1},
          {"s2", r.s2},
          {"product_s", r.product_s},
          {"r1", r.r1},
          {"seed", r.seed},
          {"trials", r.trials},
          {"ratios", r.ratios},
          {"max_ratio", r.max_ratio}};
}

inline nlohmann::json to_json(const ConvergenceReport& r, bool with_wall_time = false) {
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& it : r.history)
    hist.push_back({{"iterate", it.index},
                    {"norm", it.norm},
                    {"step_change", it.step_change},
                    {"contraction_ratio", it.ratio},
                    {"in_ball", it.in_ball}});
  nlohmann::json j{{"converged", r.converged},
                   {"iterations", r.iterations},
                   {"heat_flow_norm", r.heat_flow_norm},
                   {"final_norm", r.final_norm},
                   {"final_change", r.final_change},
                   {"max_contraction_ratio", r.max_ratio},
                   {"all_in_ball", r.all_in_ball},
                   {"tolerance", r.tolerance},
                   {"history", hist}};
  if (with_wall_time) j["wall_seconds"] = r.wall_seconds;
  return j;
}

inline nlohmann::json to_json(const EmpiricalConstants& k) {
  return {{"c0", k.c0}, {"c1", k.c1}, {"c2", k.c2}, {"c_prod", k.c_prod}};
}

inline nlohmann::json to_json(const HorizonSelection& s) {
  return {{"ok", s.ok},
          {"cutoff", s.cutoff},
          {"horizon", s.horizon},
          {"eps", s.eps},
          {"high_norm", s.high_norm},
          {"certificate_norm", s.certificate_norm},
          {"certified", s.certified}};
}

inline nlohmann::json to_json(const EquivarianceReport& r) {
  return {{"kind", "equivariance"},
          {"deviation_linear", r.deviation_linear},
          {"deviation_nonlinear", r.deviation_nonlinear},
          {"pass", r.pass}};
}

inline nlohmann::json to_json(const StabilityReport& r) {
  std::vector<std::vector<double>> ratios;
  for (Eigen::Index i = 0; i < r.ratios.rows(); ++i)
    ratios.emplace_back(r.ratios.row(i).begin(), r.ratios.row(i).end());
  return {{"kind", "stability"}, {"constants", {{"c0", r.c0}}},
          {"deltas", r.deltas},   {"rs", r.rs},
          {"ratios", ratios},    {"max_ratio", r.max_ratio},
          {"worst_spread", r.worst_spread}, {"converged", r.converged},
          {"pass", r.pass}};
}

inline nlohmann::json to_json(const ThresholdSweepReport& r) {
  nlohmann::json probes = nlohmann::json::array();
  for (const auto& [amp, ok] : r.probes) probes.push_back({{"amplitude", amp}, {"converged", ok}});
  return {{"kind", "threshold_sweep"},
          {"constants", to_json(r.constants)},
          {"horizon", r.horizon},
          {"predicted", r.predicted},
          {"critical_low", r.critical_low},
          {"critical_high", r.critical_high},
          {"monotone", r.monotone},
          {"probes", probes},
          {"pass", r.pass}};
}

inline nlohmann::json to_json(const SelfSimilarReport& r) {
  return {{"kind", "self_similar"},
          {"constants", to_json(r.constants)},
          {"t0", r.t0},
          {"sample_times", r.sample_times},
          {"max_deviation", r.max_deviation},
          {"heat_deviation", r.heat_deviation},
          {"amplitude_threshold", r.amplitude_threshold},
          {"pass", r.pass}};
}

/// Deterministic report next to a separate metadata file: identical
/// (config, seed) pairs produce byte-identical report files, while wall time
/// and timestamps live in <name>.meta.json.
inline void write_report(const std::filesystem::path& dir, const std::string& name,
                         const nlohmann::json& payload, double wall_seconds) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / (name + ".json"));
    out << payload.dump(2) << '\n';
  }
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  nlohmann::json meta{
      {"wall_seconds", wall_seconds},
      {"unix_time", std::chrono::duration_cast<std::chrono::seconds>(now).count()}};
  std::ofstream out(dir / (name + ".meta.json"));
  out << meta.dump(2) << '\n';
}

}  // namespace besovdh
