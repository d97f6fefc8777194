// Command-line front end: Littlewood-Paley decompositions, Besov norms,
// direct evolution, Picard solves, inequality audits, experiments and the
// smallness-threshold sweep. Reports are deterministic per (config, seed);
// wall times go to the sibling .meta.json.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "besovdh/besovdh.hpp"

using namespace besovdh;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct CommonOpts {
  std::string config_path;
  std::string output_dir;
  std::int64_t seed_flag = -1;  // -1 = unset
  bool have_run_config = false;
  RunConfig rc;

  void load() {
    if (!config_path.empty()) {
      rc = RunConfig::from_ini(IniFile::parse_file(config_path));
      have_run_config = true;
    }
    // seed priority: flag > config > BESOV_DH_SEED > 0
    if (seed_flag >= 0) {
      rc.experiment.seed = std::uint64_t(seed_flag);
    } else if (!rc.seed_was_set) {
      if (const char* env = std::getenv("BESOV_DH_SEED")) rc.experiment.seed = std::strtoull(env, nullptr, 10);
    }
    if (!output_dir.empty()) rc.output_dir = output_dir;
  }
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_config = true) {
  if (with_config) cmd->add_option("--config", opts.config_path, "INI config file");
  cmd->add_option("--out", opts.output_dir, "output directory (overrides config)");
  cmd->add_option("--seed", opts.seed_flag, "RNG seed (overrides config and BESOV_DH_SEED)");
}

/// Seeded neutral random data scaled so that its free heat-flow norm sits at
/// amplitude * 1/(8 c0), i.e. amplitude = 1 is the measured smallness level.
StatePair standard_data(const Grid& g, const SolverConfig& cfg, const DyadicPartition& part,
                        std::uint64_t seed, double amplitude, int constant_trials,
                        double* c0_out = nullptr) {
  StatePair data(zero_mean(random_field_band(g, seed, 0, 3)),
                 zero_mean(random_field_band(g, seed + 7777, 0, 3)));
  const double c0 = estimate_C0(g, cfg, part, constant_trials, seed + 515);
  Trajectory flow =
      heat_flow_trajectory(data, uniform_times(cfg.horizon, cfg.steps_for(cfg.horizon)));
  const double n0 = chemin_lerner_pair_norm(flow, cfg.r1, cfg.monitor_index(), part);
  data *= amplitude / (8.0 * c0 * n0);
  if (c0_out) *c0_out = c0;
  return data;
}

nlohmann::json spec_json(const ExperimentSpec& s) {
  return {{"kind", to_string(s.kind)},
          {"seed", s.seed},
          {"dim", s.dim},
          {"points", s.points},
          {"box", s.box},
          {"amplitude", s.amplitude},
          {"dt", s.dt},
          {"horizon", s.horizon},
          {"r1", s.r1},
          {"p", s.p},
          {"q", s.q},
          {"trials", s.trials},
          {"tol_linear", s.tol_linear},
          {"tol_nonlinear", s.tol_nonlinear},
          {"tol_profile", s.tol_profile}};
}

int run_decompose(const std::string& input, double s, double p, double q, const CommonOpts& opts,
                  bool svg) {
  SpectralField f = read_dhf1(input);
  const auto part = build_partition<double>();
  const BesovIndex idx{s, p, q};
  const std::string csv = shell_report_csv(f, idx, part);
  std::filesystem::create_directories(opts.rc.output_dir);
  const auto path = std::filesystem::path(opts.rc.output_dir) / "shells.csv";
  std::ofstream(path) << csv;
  std::cout << "wrote " << path.string() << "\n";
  std::cout << "besov_norm = " << besov_norm(f, idx, part) << "\n";
  if (svg) {
    const Eigen::ArrayXd norms = shell_norms(f, part, p);
    std::vector<double> xs(norms.size()), weighted(norms.size());
    for (int i = 0; i < norms.size(); ++i) {
      xs[i] = f.grid.shell_min() + i;
      weighted[i] = std::exp2(s * xs[i]) * norms[i];
    }
    write_svg_lines(std::filesystem::path(opts.rc.output_dir) / "shells.svg", xs,
                    {std::vector<double>(norms.begin(), norms.end()), weighted},
                    "per-shell norms (raw, weighted)");
  }
  return kExitPass;
}

int run_norm(const std::string& input, double s, double p, double q) {
  SpectralField f = read_dhf1(input);
  const auto part = build_partition<double>();
  const BesovIndex idx{s, p, q};
  std::cout << "besov_norm = " << besov_norm(f, idx, part) << "\n";
  std::cout << shell_report_csv(f, idx, part);
  return kExitPass;
}

int run_evolve(CommonOpts& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig& rc = opts.rc;
  Grid g = rc.grid();
  SolverConfig cfg = rc.solver();
  const auto part = build_partition<double>();
  StatePair data = standard_data(g, cfg, part, rc.experiment.seed, rc.experiment.amplitude,
                                 rc.experiment.constant_trials);
  EvolveResult er = evolve(data, cfg);
  export_trajectory(rc.output_dir, er.trajectory, "evolve");
  nlohmann::json rep{{"spec", spec_json(rc.experiment)},
                     {"max_zero_mode_drift", er.max_zero_mode_drift},
                     {"blew_up", er.blowup.has_value()},
                     {"steps", er.amplitude_history.size()}};
  if (er.blowup) {
    rep["blowup"] = {{"last_finite_time", er.blowup->last_finite_time},
                     {"last_finite_step", er.blowup->last_finite_step},
                     {"max_amplitude_history", er.amplitude_history}};
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_report(rc.output_dir, "evolve_report", rep, wall);
  std::cout << (er.blowup ? "blow-up detected\n" : "evolution complete\n");
  return er.blowup ? kExitFail : kExitPass;
}

int run_picard(CommonOpts& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig& rc = opts.rc;
  Grid g = rc.grid();
  SolverConfig cfg = rc.solver();
  const auto part = build_partition<double>();
  double c0 = 0;
  StatePair data = standard_data(g, cfg, part, rc.experiment.seed, rc.experiment.amplitude,
                                 rc.experiment.constant_trials, &c0);
  auto [traj, rep] = fixed_point_solve(data, cfg, part);
  nlohmann::json j{{"spec", spec_json(rc.experiment)},
                   {"constants", {{"c0", c0}}},
                   {"report", to_json(rep)}};
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_report(rc.output_dir, "picard_report", j, wall);
  std::cout << (rep.converged ? "converged" : "did not converge") << " in " << rep.iterations
            << " iterations, final norm " << rep.final_norm << "\n";
  return rep.converged ? kExitPass : kExitFail;
}

int run_audit(const std::string& kind, CommonOpts& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig& rc = opts.rc;
  const auto part = build_partition<double>();
  nlohmann::json payload;
  bool pass = false;
  if (kind == "bernstein") {
    Grid g(rc.experiment.dim, std::max(rc.experiment.points, 64), 8 * Grid::pi());
    nlohmann::json cases = nlohmann::json::array();
    pass = true;
    for (auto [p, q] : std::vector<std::pair<double, double>>{{2, 2}, {2, kInf}, {1, 2}}) {
      BernsteinReport r =
          bernstein_audit(g, 1.0, p, q, rc.experiment.trials, rc.experiment.seed, 1, 3);
      cases.push_back(to_json(r));
      pass = pass && r.stable;
    }
    payload = {{"kind", "bernstein_audit"}, {"cases", cases}, {"stable", pass}};
  } else if (kind == "heat") {
    Grid g = rc.grid();
    HeatSmoothingReport r =
        heat_smoothing_audit(g, BesovIndex{-2.0 + rc.experiment.dim / rc.experiment.p,
                                           rc.experiment.p, rc.experiment.q},
                             {2.0, 4.0, kInf}, {0.1, 1.0, 10.0}, rc.experiment.trials,
                             rc.experiment.seed, part);
    payload = to_json(r);
    pass = r.stable;
  } else if (kind == "product") {
    Grid g = rc.grid();
    ProductEstimateReport r =
        product_estimate_audit(g, rc.solver(), rc.experiment.trials, rc.experiment.seed, part);
    payload = to_json(r);
    pass = std::isfinite(r.max_ratio) && r.max_ratio > 0;
  } else {
    std::cerr << "unknown audit kind: " << kind << " (expected bernstein|heat|product)\n";
    return kExitUsage;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_report(rc.output_dir, kind + "_audit", payload, wall);
  std::cout << kind << " audit " << (pass ? "stable" : "NOT stable") << "\n";
  return pass ? kExitPass : kExitFail;
}

void write_csv(const std::filesystem::path& dir, const std::string& name,
               const std::string& content) {
  std::filesystem::create_directories(dir);
  std::ofstream(dir / name) << content;
}

int run_experiment(CommonOpts& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  RunConfig& rc = opts.rc;
  const auto part = build_partition<double>();
  const ExperimentSpec& spec = rc.experiment;
  nlohmann::json metrics;
  bool pass = false;
  switch (spec.kind) {
    case ExperimentKind::Equivariance: {
      EquivarianceReport r = equivariance_experiment(spec);
      metrics = to_json(r);
      pass = r.pass;
      break;
    }
    case ExperimentKind::Stability: {
      StabilityReport r = stability_experiment(spec, part);
      metrics = to_json(r);
      pass = r.pass;
      std::ostringstream csv;
      csv.precision(17);
      csv << "delta";
      for (double rr : r.rs) csv << ",ratio_r" << rr;
      csv << "\n";
      for (std::size_t di = 0; di < r.deltas.size(); ++di) {
        csv << r.deltas[di];
        for (std::size_t ri = 0; ri < r.rs.size(); ++ri) csv << ',' << r.ratios(ri, di);
        csv << "\n";
      }
      write_csv(rc.output_dir, "stability_ratios.csv", csv.str());
      if (rc.emit_svg && r.converged) {
        std::vector<std::vector<double>> rows(r.rs.size());
        for (std::size_t ri = 0; ri < r.rs.size(); ++ri)
          rows[ri].assign(r.ratios.row(ri).begin(), r.ratios.row(ri).end());
        write_svg_lines(std::filesystem::path(rc.output_dir) / "stability_ratios.svg",
                        {1, 2, 3, 4}, rows, "difference ratio per perturbation decade");
      }
      break;
    }
    case ExperimentKind::SelfSimilar: {
      SelfSimilarReport r = self_similar_experiment(spec, part);
      metrics = to_json(r);
      pass = r.pass;
      std::ostringstream csv;
      csv.precision(17);
      csv << "sample_time,max_deviation,heat_deviation\n";
      for (double t : r.sample_times)
        csv << t << ',' << r.max_deviation << ',' << r.heat_deviation << "\n";
      write_csv(rc.output_dir, "self_similar_times.csv", csv.str());
      break;
    }
    case ExperimentKind::ThresholdSweep: {
      ThresholdSweepReport r = threshold_sweep(spec, part);
      metrics = to_json(r);
      pass = r.pass;
      std::ostringstream csv;
      csv.precision(17);
      csv << "amplitude,converged\n";
      for (const auto& [amp, ok] : r.probes) csv << amp << ',' << (ok ? 1 : 0) << "\n";
      write_csv(rc.output_dir, "threshold_probes.csv", csv.str());
      break;
    }
    case ExperimentKind::ProductAudit: {
      ProductEstimateReport r =
          product_estimate_audit(spec.grid(), spec.solver(), spec.trials, spec.seed, part);
      metrics = to_json(r);
      pass = std::isfinite(r.max_ratio) && r.max_ratio > 0;
      break;
    }
    case ExperimentKind::HeatAudit: {
      HeatSmoothingReport r = heat_smoothing_audit(
          spec.grid(), BesovIndex{-2.0 + spec.dim / spec.p, spec.p, spec.q}, {2.0, 4.0, kInf},
          {0.1, 1.0, 10.0}, spec.trials, spec.seed, part);
      metrics = to_json(r);
      pass = r.stable;
      break;
    }
    case ExperimentKind::BernsteinAudit: {
      Grid g(spec.dim, std::max(spec.points, 64), 8 * Grid::pi());
      BernsteinReport r = bernstein_audit(g, 1.0, spec.p, spec.q, spec.trials, spec.seed, 1, 3);
      metrics = to_json(r);
      pass = r.stable;
      break;
    }
  }
  nlohmann::json verdict{{"spec", spec_json(spec)}, {"metrics", metrics}, {"pass", pass}};
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_report(rc.output_dir, std::string("experiment_") + to_string(spec.kind), verdict, wall);
  std::cout << to_string(spec.kind) << ": " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Debye-Huckel pseudospectral solver and Besov-space toolkit"};
  app.require_subcommand(1);
  int jobs = 1;
  app.add_option("--jobs", jobs, "worker thread cap for audits and sweeps");

  CommonOpts decompose_opts, norm_opts, evolve_opts, picard_opts, audit_opts, exp_opts, sweep_opts;
  std::string input, audit_kind, exp_kind;
  double s = -1.0, p = 2.0, q = 2.0;
  bool svg = false;

  auto* cmd_decompose = app.add_subcommand("decompose", "per-shell norm report of a DHF1 field");
  cmd_decompose->add_option("--input", input, "DHF1 field file")->required();
  cmd_decompose->add_option("--s", s, "regularity index");
  cmd_decompose->add_option("--p", p, "integrability exponent");
  cmd_decompose->add_option("--q", q, "shell summability exponent");
  cmd_decompose->add_flag("--svg", svg, "also draw the shell profile");
  add_common(cmd_decompose, decompose_opts, false);

  auto* cmd_norm = app.add_subcommand("norm", "print the Besov norm of a DHF1 field");
  cmd_norm->add_option("--input", input, "DHF1 field file")->required();
  cmd_norm->add_option("--s", s, "regularity index")->required();
  cmd_norm->add_option("--p", p, "integrability exponent")->required();
  cmd_norm->add_option("--q", q, "shell summability exponent");

  auto* cmd_evolve = app.add_subcommand("evolve", "direct ETD2RK evolution, trajectory export");
  add_common(cmd_evolve, evolve_opts);

  auto* cmd_picard = app.add_subcommand("picard", "fixed-point solve with contraction monitoring");
  add_common(cmd_picard, picard_opts);

  auto* cmd_audit = app.add_subcommand("audit", "inequality audits");
  cmd_audit->add_option("--kind", audit_kind, "bernstein|heat|product")->required();
  add_common(cmd_audit, audit_opts);

  auto* cmd_exp = app.add_subcommand("experiment", "scripted verification experiments");
  cmd_exp->add_option("--kind", exp_kind, "experiment kind");
  add_common(cmd_exp, exp_opts);

  auto* cmd_sweep = app.add_subcommand("sweep", "smallness-threshold amplitude sweep");
  add_common(cmd_sweep, sweep_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  worker_cap() = jobs;

  try {
    if (cmd_decompose->parsed()) {
      decompose_opts.load();
      return run_decompose(input, s, p, q, decompose_opts, svg);
    }
    if (cmd_norm->parsed()) return run_norm(input, s, p, q);
    if (cmd_evolve->parsed()) {
      evolve_opts.load();
      return run_evolve(evolve_opts);
    }
    if (cmd_picard->parsed()) {
      picard_opts.load();
      return run_picard(picard_opts);
    }
    if (cmd_audit->parsed()) {
      audit_opts.load();
      return run_audit(audit_kind, audit_opts);
    }
    if (cmd_exp->parsed()) {
      exp_opts.load();
      if (!exp_kind.empty()) exp_opts.rc.experiment.kind = experiment_kind_from(exp_kind);
      return run_experiment(exp_opts);
    }
    if (cmd_sweep->parsed()) {
      sweep_opts.load();
      sweep_opts.rc.experiment.kind = ExperimentKind::ThresholdSweep;
      return run_experiment(sweep_opts);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
