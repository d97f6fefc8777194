#pragma once

#include "besovdh/solver.hpp"

namespace besovdh {

/// Smoothing of the free heat flow in the time-space norms: for data f and
/// exponent r, the audited ratio is
///   ||e^{t Lap} f||_{CL^r(0,T; B^{s+2/r}_{p,q})} / ||f||_{B^s_{p,q}}.
struct HeatSmoothingReport {
  BesovIndex base;  // (s, p, q) of the data norm
  std::vector<double> rs, horizons;
  std::uint64_t seed = 0;
  int trials = 0;
  int samples = 0;
  Eigen::ArrayXXd max_ratio;          // rs x horizons
  std::vector<double> spread_per_r;   // (max - min)/max across horizons
  double overall_max = 0;
  double max_spread = 0;
  bool stable = false;

  static constexpr double kStableSpread = 0.30;
};

inline HeatSmoothingReport heat_smoothing_audit(const Grid& grid, const BesovIndex& base,
                                                std::vector<double> rs,
                                                std::vector<double> horizons, int trials,
                                                std::uint64_t seed,
                                                const DyadicPartition& part, int samples = 97) {
  if (trials < 1 || rs.empty() || horizons.empty())
    throw std::invalid_argument("heat_smoothing_audit: empty parameter set");
  HeatSmoothingReport rep;
  rep.base = base;
  rep.rs = std::move(rs);
  rep.horizons = std::move(horizons);
  rep.seed = seed;
  rep.trials = trials;
  rep.samples = samples;
  rep.max_ratio = Eigen::ArrayXXd::Zero(rep.rs.size(), rep.horizons.size());

  std::vector<Eigen::ArrayXXd> per_trial(trials,
                                         Eigen::ArrayXXd::Zero(rep.rs.size(), rep.horizons.size()));
  parallel_for(trials, [&](std::int64_t t) {
    // mid-band draws: every active shell is past its diffusion time by T=0.1
    SpectralField data = zero_mean(random_field_band(grid, seed + t, 2, 5));
    const double data_norm = besov_norm(data, base, part);
    if (data_norm == 0) return;
    for (std::size_t ti = 0; ti < rep.horizons.size(); ++ti) {
      Trajectory flow = heat_flow_trajectory(StatePair(data, data),
                                             graded_times(rep.horizons[ti], samples - 1));
      cache_shell_history(flow, FieldSel::V, base.p, part);
      for (std::size_t ri = 0; ri < rep.rs.size(); ++ri) {
        const double r = rep.rs[ri];
        const BesovIndex smoothed{base.s + (r == kInf ? 0.0 : 2.0 / r), base.p, base.q};
        const double value = chemin_lerner_norm(flow, FieldSel::V, r, smoothed, part);
        per_trial[t](ri, ti) = value / data_norm;
      }
    }
  });
  for (const auto& m : per_trial) rep.max_ratio = rep.max_ratio.max(m);
  for (std::size_t ri = 0; ri < rep.rs.size(); ++ri) {
    const double hi = rep.max_ratio.row(ri).maxCoeff();
    const double lo = rep.max_ratio.row(ri).minCoeff();
    rep.spread_per_r.push_back(hi > 0 ? (hi - lo) / hi : 0.0);
    rep.max_spread = std::max(rep.max_spread, rep.spread_per_r.back());
  }
  rep.overall_max = rep.max_ratio.maxCoeff();
  rep.stable = rep.max_spread <= HeatSmoothingReport::kStableSpread;
  return rep;
}

/// Time-space product estimate with the exponent pair of the bilinear bound:
///   s1 = -2 + n/p + 2/r1,  s2 = -1 + n/p + 2/r1,
///   ||fg||_{CL^{r1/2}(B^{s1+s2-n/p})} <= C ||f||_{CL^{r1}(B^{s1})} ||g||_{CL^{r1}(B^{s2})}.
struct ProductEstimateReport {
  double s1 = 0, s2 = 0, product_s = 0, r1 = 0;
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<double> ratios;
  double max_ratio = 0;
};

inline ProductEstimateReport product_estimate_audit(const Grid& grid, const SolverConfig& cfg,
                                                    int trials, std::uint64_t seed,
                                                    const DyadicPartition& part,
                                                    int steps = 16) {
  cfg.validate();
  if (trials < 1) throw std::invalid_argument("product_estimate_audit: need trials >= 1");
  ProductEstimateReport rep;
  rep.r1 = cfg.r1;
  rep.s1 = -2.0 + cfg.dim / cfg.p + 2.0 / cfg.r1;
  rep.s2 = -1.0 + cfg.dim / cfg.p + 2.0 / cfg.r1;
  rep.product_s = rep.s1 + rep.s2 - cfg.dim / cfg.p;
  rep.seed = seed;
  rep.trials = trials;

  const auto times = uniform_times(cfg.horizon, steps);
  std::vector<double> ratios(trials, 0.0);
  parallel_for(trials, [&](std::int64_t t) {
    SpectralField f0 = zero_mean(random_field_band(grid, seed + 2 * t, 0, 4));
    SpectralField g0 = zero_mean(random_field_band(grid, seed + 2 * t + 1, 0, 4));
    Trajectory ftraj = heat_flow_trajectory(StatePair(f0, f0), times);
    Trajectory gtraj = heat_flow_trajectory(StatePair(g0, g0), times);

    std::vector<StatePair> prod_states;
    prod_states.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
      const SpectralField& fi = ftraj.states[i].v;
      const SpectralField& gi = gtraj.states[i].v;
      const RealArray fp = inverse_transform(cfg.dealias_products ? dealias(fi) : fi);
      const RealArray gp = inverse_transform(cfg.dealias_products ? dealias(gi) : gi);
      SpectralField prod = forward_transform(grid, (fp * gp).eval());
      if (cfg.dealias_products) prod = dealias(prod);
      prod_states.emplace_back(prod, prod);
    }
    Trajectory ptraj(times, std::move(prod_states));

    const double nf =
        chemin_lerner_norm(ftraj, FieldSel::V, cfg.r1, BesovIndex{rep.s1, cfg.p, cfg.q}, part);
    const double ng =
        chemin_lerner_norm(gtraj, FieldSel::V, cfg.r1, BesovIndex{rep.s2, cfg.p, cfg.q}, part);
    const double np = chemin_lerner_norm(ptraj, FieldSel::V, cfg.r1 / 2,
                                         BesovIndex{rep.product_s, cfg.p, cfg.q}, part);
    if (nf == 0 || ng == 0) return;
    ratios[t] = np / (nf * ng);
  });
  rep.ratios = std::move(ratios);
  rep.max_ratio = *std::max_element(rep.ratios.begin(), rep.ratios.end());
  return rep;
}

/// Constant of the low-frequency horizon bound: the largest measured value of
///   ||e^{t Lap} P_{<=N} f||_{X_T} / (2^{2N/r1} T^{1/r1} ||f||_{B^{s0}}).
inline double horizon_constant_audit(const Grid& grid, const SolverConfig& cfg,
                                     const DyadicPartition& part, int trials,
                                     std::uint64_t seed) {
  cfg.validate();
  const BesovIndex s0 = cfg.data_index();
  const BesovIndex mon = cfg.monitor_index();
  double worst = 0;
  for (int t = 0; t < trials; ++t) {
    SpectralField data = zero_mean(random_field_band(grid, seed + t, 0, 5));
    const double dn = besov_norm(data, s0, part);
    if (dn == 0) continue;
    for (int cutoff : {1, 2, 3}) {
      SpectralField low = frequency_split(data, cutoff).second;
      low.coeffs[0] = 0;
      for (double T : {cfg.horizon / 16, cfg.horizon / 4, cfg.horizon}) {
        Trajectory flow = heat_flow_trajectory(StatePair(low, low), graded_times(T, 96));
        const double value = chemin_lerner_norm(flow, FieldSel::V, cfg.r1, mon, part);
        const double bound = std::exp2(2.0 * cutoff / cfg.r1) * std::pow(T, 1.0 / cfg.r1) * dn;
        worst = std::max(worst, value / bound);
      }
    }
  }
  return worst;
}

/// One-stop measurement of the empirical constants the solver thresholds
/// need. Deterministic per seed.
inline EmpiricalConstants measure_constants(const Grid& grid, const SolverConfig& cfg,
                                            const DyadicPartition& part, int trials,
                                            std::uint64_t seed) {
  EmpiricalConstants k;
  k.c0 = estimate_C0(grid, cfg, part, trials, seed);
  HeatSmoothingReport heat = heat_smoothing_audit(
      grid, cfg.data_index(), {cfg.r1}, {cfg.horizon}, trials, seed + 101, part, 65);
  k.c1 = heat.overall_max;
  k.c2 = horizon_constant_audit(grid, cfg, part, std::max(1, trials / 2), seed + 202);
  k.c_prod = product_estimate_audit(grid, cfg, std::max(1, trials / 2), seed + 303, part).max_ratio;
  return k;
}

}  // namespace besovdh
