#pragma once

#include <algorithm>
#include <chrono>
#include <optional>

#include "besovdh/chemin_lerner.hpp"
#include "besovdh/duhamel.hpp"
#include "besovdh/parallel.hpp"
#include "besovdh/random_fields.hpp"

namespace besovdh {

/// Parameters of the mild-solution machinery. The monitor index carries the
/// smoothing gain 2/r1 on top of the critical data regularity -2 + n/p.
struct SolverConfig {
  int dim = 2;
  double p = 2;
  double q = 2;
  double r1 = 3;  // Chemin-Lerner exponent, 2 < r1, with 2/r1 + n/p > 3/2

  double dt = 1.0 / 64;
  double horizon = 1.0;
  bool dealias_products = true;
  bool auto_project = false;
  double picard_tol = 1e-9;
  int picard_max_iter = 40;
  int store_every = 1;
  double blowup_threshold = 1e10;

  BesovIndex data_index() const { return BesovIndex{-2.0 + dim / p, p, q}; }
  BesovIndex monitor_index() const { return BesovIndex{-2.0 + dim / p + 2.0 / r1, p, q}; }

  void validate() const {
    if (!(r1 > 2.0)) throw std::invalid_argument("solver config: need r1 > 2");
    if (!(2.0 / r1 + dim / p > 1.5))
      throw std::invalid_argument("solver config: need 2/r1 + n/p > 3/2");
    if (!(p >= 2.0 && p < 2.0 * dim)) throw std::invalid_argument("solver config: need 2 <= p < 2n");
    if (!(q >= 1.0)) throw std::invalid_argument("solver config: need q >= 1");
    if (!(dt > 0 && horizon > 0 && picard_tol > 0 && picard_max_iter > 0 && store_every > 0))
      throw std::invalid_argument("solver config: positive dt, horizon, tolerances required");
  }

  int steps_for(double T) const {
    return std::max(1, int(std::llround(T / dt)));
  }
};

/// Electric potential phi = (-Laplacian)^{-1}(w - v): coefficients
/// (w_hat - v_hat)/|k|^2, zero mode 0. Laplacian(phi) = v - w on the
/// nonzero modes.
template <typename Scalar>
SpectralFieldT<Scalar> potential(const StatePairT<Scalar>& state, bool auto_project = false) {
  StatePairT<Scalar> s = state;
  if (!is_neutral(s)) {
    if (!auto_project) throw std::invalid_argument("potential: state is not charge-neutral");
    s = project_neutral(std::move(s));
  }
  SpectralFieldT<Scalar> phi(s.grid());
  for (std::int64_t i = 1; i < s.grid().total(); ++i)
    phi.coeffs[i] = (s.w.coeffs[i] - s.v.coeffs[i]) / s.grid().k_squared(i);
  return phi;
}

namespace detail {

/// grad (-Laplacian)^{-1} (w - v), the drift field both species share.
template <typename Scalar>
std::vector<SpectralFieldT<Scalar>> drift_field(const StatePairT<Scalar>& s) {
  SpectralFieldT<Scalar> diff = s.w - s.v;
  return inverse_laplacian_gradient(diff);
}

/// -div(density * drift) assembled pseudospectrally: the product in physical
/// space (2/3-dealiased on request), the divergence in spectral space. The
/// result has an exactly zero mean.
template <typename Scalar>
SpectralFieldT<Scalar> flux_divergence(const SpectralFieldT<Scalar>& density,
                                       const std::vector<SpectralFieldT<Scalar>>& drift,
                                       bool dealias_products) {
  const auto& g = density.grid;
  const auto dens_phys =
      inverse_transform(dealias_products ? dealias(density) : density);
  SpectralFieldT<Scalar> div(g);
  for (int a = 0; a < g.dim; ++a) {
    const auto drift_phys =
        inverse_transform(dealias_products ? dealias(drift[a]) : drift[a]);
    SpectralFieldT<Scalar> prod = forward_transform(g, (dens_phys * drift_phys).eval());
    if (dealias_products) prod = dealias(prod);
    for (std::int64_t i = 0; i < g.total(); ++i)
      div.coeffs[i] += std::complex<Scalar>(0, g.wavenumber(i, a)) * prod.coeffs[i];
  }
  return div;
}

}  // namespace detail

/// The quadratic tendency pair of the reduced system:
///   d/dt v - Lap v = -div(v grad psi),  d/dt w - Lap w = +div(w grad psi),
/// with psi = (-Lap)^{-1}(w - v). Only the nonlinear part; the heat part is
/// handled exactly by the integrators.
template <typename Scalar>
StatePairT<Scalar> rhs(const StatePairT<Scalar>& state, bool dealias_products = true,
                       bool auto_project = false) {
  StatePairT<Scalar> s = state;
  if (!is_neutral(s)) {
    if (!auto_project) throw std::invalid_argument("rhs: state is not charge-neutral");
    s = project_neutral(std::move(s));
  }
  const auto drift = detail::drift_field(s);
  return StatePairT<Scalar>(-detail::flux_divergence(s.v, drift, dealias_products),
                            detail::flux_divergence(s.w, drift, dealias_products));
}

/// The underlying (non-symmetric) bilinear tendency: densities from a,
/// drift from b.
template <typename Scalar>
StatePairT<Scalar> bilinear_tendency(const StatePairT<Scalar>& a, const StatePairT<Scalar>& b,
                                     bool dealias_products = true) {
  const auto drift = detail::drift_field(b);
  return StatePairT<Scalar>(-detail::flux_divergence(a.v, drift, dealias_products),
                            detail::flux_divergence(a.w, drift, dealias_products));
}

/// Symmetrized Duhamel bilinear operator
///   B(a,b)(t) = 1/2 int_0^t e^{(t-s) Lap} [N(a,b) + N(b,a)](s) ds
/// on uniform sample times, exponential-trapezoid in s. B(u,u) is exactly
/// the integral term of the mild formulation, and the Picard map is
/// heat flow of data + B.
template <typename Scalar>
TrajectoryT<Scalar> bilinear_B(const TrajectoryT<Scalar>& a, const TrajectoryT<Scalar>& b,
                               const SolverConfig& cfg) {
  if (a.samples() != b.samples()) throw std::invalid_argument("bilinear_B: sample counts differ");
  for (std::size_t i = 0; i < a.samples(); ++i)
    if (a.times[i] != b.times[i]) throw std::invalid_argument("bilinear_B: time grids differ");
  if (!a.uniform()) throw std::invalid_argument("bilinear_B: time grid must be uniform");
  if (a.samples() < 2) throw std::invalid_argument("bilinear_B: need at least one step");

  const Scalar dt = a.times[1] - a.times[0];
  std::vector<SpectralFieldT<Scalar>> src_v, src_w;
  src_v.reserve(a.samples());
  src_w.reserve(a.samples());
  for (std::size_t i = 0; i < a.samples(); ++i) {
    StatePairT<Scalar> g = bilinear_tendency(a.states[i], b.states[i], cfg.dealias_products);
    if (&a != &b) {
      g += bilinear_tendency(b.states[i], a.states[i], cfg.dealias_products);
      g *= Scalar(0.5);
    }
    src_v.push_back(std::move(g.v));
    src_w.push_back(std::move(g.w));
  }
  auto int_v = duhamel_trapezoid(src_v, dt);
  auto int_w = duhamel_trapezoid(src_w, dt);
  std::vector<StatePairT<Scalar>> states;
  states.reserve(a.samples());
  for (std::size_t i = 0; i < a.samples(); ++i)
    states.emplace_back(std::move(int_v[i]), std::move(int_w[i]));
  return TrajectoryT<Scalar>(a.times, std::move(states));
}

/// One Picard sweep: solves the linear heat problems with sources frozen
/// from traj, i.e. heat flow of the data plus B(traj, traj).
template <typename Scalar>
TrajectoryT<Scalar> picard_map(const TrajectoryT<Scalar>& traj, const StatePairT<Scalar>& data,
                               const SolverConfig& cfg) {
  TrajectoryT<Scalar> out = bilinear_B(traj, traj, cfg);
  for (std::size_t i = 0; i < out.samples(); ++i) {
    out.states[i].v += heat_propagator(data.v, out.times[i]);
    out.states[i].w += heat_propagator(data.w, out.times[i]);
  }
  return out;
}

struct PicardIterate {
  int index = 0;
  double norm = 0;         // monitor Chemin-Lerner norm of the iterate
  double step_change = 0;  // monitor norm of the difference to the previous iterate
  double ratio = 0;        // contraction ratio against the previous difference
  bool in_ball = true;     // norm <= 2 * heat-flow norm
};

struct ConvergenceReport {
  bool converged = false;
  int iterations = 0;
  double heat_flow_norm = 0;
  double final_norm = 0;
  double final_change = 0;
  double max_ratio = 0;
  bool all_in_ball = true;
  double tolerance = 0;
  double wall_seconds = 0;
  std::vector<PicardIterate> history;
};

/// Picard iteration u^{m+1} = heat flow + B(u^m, u^m), monitored in the
/// Chemin-Lerner norm of the config. Non-convergence is a diagnostic result
/// (report.converged = false), not an exception: it is the expected outcome
/// for data outside the smallness regime at this horizon.
template <typename Scalar>
std::pair<TrajectoryT<Scalar>, ConvergenceReport> fixed_point_solve(
    const StatePairT<Scalar>& data_in, const SolverConfig& cfg,
    const DyadicPartitionT<Scalar>& part) {
  cfg.validate();
  StatePairT<Scalar> data = data_in;
  if (!is_neutral(data)) {
    if (!cfg.auto_project) throw std::invalid_argument("fixed_point_solve: data not neutral");
    data = project_neutral(std::move(data));
  }
  const auto t0 = std::chrono::steady_clock::now();
  const BesovIndex mon = cfg.monitor_index();
  const int steps = cfg.steps_for(cfg.horizon);
  const auto times = uniform_times<Scalar>(Scalar(cfg.horizon), steps);

  TrajectoryT<Scalar> u = heat_flow_trajectory(data, times);
  ConvergenceReport rep;
  rep.tolerance = cfg.picard_tol;
  rep.heat_flow_norm = chemin_lerner_pair_norm(u, cfg.r1, mon, part);
  double prev_change = -1;
  const double ball_radius = 2 * rep.heat_flow_norm;

  for (int m = 1; m <= cfg.picard_max_iter; ++m) {
    TrajectoryT<Scalar> next = picard_map(u, data, cfg);
    const TrajectoryT<Scalar> diff = trajectory_difference(next, u);
    PicardIterate it;
    it.index = m;
    it.step_change = chemin_lerner_pair_norm(diff, cfg.r1, mon, part);
    it.norm = chemin_lerner_pair_norm(next, cfg.r1, mon, part);
    it.ratio = prev_change > 0 ? it.step_change / prev_change : 0.0;
    it.in_ball = it.norm <= ball_radius * (1 + 1e-12) + 1e-300;
    rep.history.push_back(it);
    rep.max_ratio = std::max(rep.max_ratio, it.ratio);
    rep.all_in_ball = rep.all_in_ball && it.in_ball;
    rep.iterations = m;
    rep.final_norm = it.norm;
    rep.final_change = it.step_change;
    u = std::move(next);
    if (!std::isfinite(it.norm)) break;
    if (it.step_change <= cfg.picard_tol * std::max(it.norm, 1e-300)) {
      rep.converged = true;
      break;
    }
    prev_change = it.step_change;
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(u), std::move(rep)};
}

/// Monitor-norm residual of the mild formulation u = heat flow + B(u, u),
/// with the Duhamel integral re-evaluated by the exponential-Simpson rule.
/// For a trajectory converged under the trapezoid rule this isolates the
/// quadrature defect, which shrinks at second order in dt.
template <typename Scalar>
double mild_residual(const TrajectoryT<Scalar>& traj, const StatePairT<Scalar>& data,
                     const SolverConfig& cfg, const DyadicPartitionT<Scalar>& part) {
  if (!traj.uniform() || traj.samples() < 3 || traj.samples() % 2 == 0)
    throw std::invalid_argument("mild_residual: need a uniform grid with an even step count");
  const Scalar dt = traj.times[1] - traj.times[0];
  std::vector<SpectralFieldT<Scalar>> src_v, src_w;
  for (std::size_t i = 0; i < traj.samples(); ++i) {
    StatePairT<Scalar> g = rhs(traj.states[i], cfg.dealias_products, cfg.auto_project);
    src_v.push_back(std::move(g.v));
    src_w.push_back(std::move(g.w));
  }
  auto int_v = duhamel_simpson(src_v, dt);
  auto int_w = duhamel_simpson(src_w, dt);
  std::vector<Scalar> times;
  std::vector<StatePairT<Scalar>> states;
  for (std::size_t e = 0; e < int_v.size(); ++e) {
    const Scalar t = traj.times[2 * e];
    SpectralFieldT<Scalar> rv = traj.states[2 * e].v - heat_propagator(data.v, t) - int_v[e];
    SpectralFieldT<Scalar> rw = traj.states[2 * e].w - heat_propagator(data.w, t) - int_w[e];
    times.push_back(t);
    states.emplace_back(std::move(rv), std::move(rw));
  }
  TrajectoryT<Scalar> res(times, std::move(states));
  return chemin_lerner_pair_norm(res, cfg.r1, cfg.monitor_index(), part);
}

/// Empirical bilinear constant: max over random normalized heat-flow
/// trajectories of ||B(u,u)|| / ||u||^2 in the monitor norm.
template <typename Scalar>
double estimate_C0(const GridT<Scalar>& grid, const SolverConfig& cfg,
                   const DyadicPartitionT<Scalar>& part, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("estimate_C0: need trials >= 1");
  cfg.validate();
  const BesovIndex mon = cfg.monitor_index();
  const auto times = uniform_times<Scalar>(Scalar(cfg.horizon), cfg.steps_for(cfg.horizon));
  std::vector<double> ratios(trials, 0.0);
  parallel_for(trials, [&](std::int64_t t) {
    StatePairT<Scalar> data(zero_mean(random_field_band(grid, seed + 2 * t, 0, 4)),
                            zero_mean(random_field_band(grid, seed + 2 * t + 1, 0, 4)));
    TrajectoryT<Scalar> u = heat_flow_trajectory(data, times);
    const double nu = chemin_lerner_pair_norm(u, cfg.r1, mon, part);
    if (nu == 0) return;
    TrajectoryT<Scalar> b = bilinear_B(u, u, cfg);
    ratios[t] = chemin_lerner_pair_norm(b, cfg.r1, mon, part) / (nu * nu);
  });
  return *std::max_element(ratios.begin(), ratios.end());
}

struct BlowupDiagnostic {
  double last_finite_time = 0;
  int last_finite_step = 0;
};

struct EvolveResult {
  TrajectoryT<double> trajectory;
  double max_zero_mode_drift = 0;       // per-step drift of either zero mode
  std::vector<double> amplitude_history;  // per step, sum_k |coeff| bound on sup norm
  std::optional<BlowupDiagnostic> blowup;
};

/// Direct time stepping: two-stage exponential time differencing (ETD2RK)
/// with the heat multiplier exact and the quadratic tendency dealiased.
/// The stage weights are the same exponential-trapezoid pair used by the
/// Duhamel quadrature.
inline EvolveResult evolve(const StatePair& data_in, const SolverConfig& cfg) {
  cfg.validate();
  StatePair state = data_in;
  if (!is_neutral(state)) {
    if (!cfg.auto_project) throw std::invalid_argument("evolve: data not neutral");
    state = project_neutral(std::move(state));
  }
  const Grid grid = state.grid();
  const int steps = cfg.steps_for(cfg.horizon);
  const double dt = cfg.horizon / steps;
  const StepWeightsT<double> sw = make_step_weights(grid, dt);

  EvolveResult result;
  std::vector<double> times{0.0};
  std::vector<StatePair> stored{state};
  const std::complex<double> mean_v0 = state.v.mean(), mean_w0 = state.w.mean();

  auto amplitude = [](const StatePair& s) {
    return std::max(s.v.coeffs.abs().sum(), s.w.coeffs.abs().sum());
  };

  for (int step = 1; step <= steps; ++step) {
    const StatePair tends = rhs(state, cfg.dealias_products);
    StatePair predictor(grid);
    predictor.v.coeffs = sw.decay * state.v.coeffs + sw.w0 * tends.v.coeffs;
    predictor.w.coeffs = sw.decay * state.w.coeffs + sw.w0 * tends.w.coeffs;
    const StatePair tends_p = rhs(predictor, cfg.dealias_products);
    StatePair next(grid);
    next.v.coeffs =
        sw.decay * state.v.coeffs + (sw.w0 - sw.w1) * tends.v.coeffs + sw.w1 * tends_p.v.coeffs;
    next.w.coeffs =
        sw.decay * state.w.coeffs + (sw.w0 - sw.w1) * tends.w.coeffs + sw.w1 * tends_p.w.coeffs;

    const double amp = amplitude(next);
    result.amplitude_history.push_back(amp);
    if (!std::isfinite(amp) || amp > cfg.blowup_threshold) {
      result.blowup = BlowupDiagnostic{times.back(), step - 1};
      break;
    }
    result.max_zero_mode_drift =
        std::max({result.max_zero_mode_drift, std::abs(next.v.mean() - mean_v0),
                  std::abs(next.w.mean() - mean_w0)});
    state = std::move(next);
    if (step % cfg.store_every == 0 || step == steps) {
      times.push_back(dt * step);
      stored.push_back(state);
    }
  }
  result.trajectory = Trajectory(std::move(times), std::move(stored));
  return result;
}

/// Empirical stand-ins for the abstract constants of the fixed-point argument,
/// each measured by a seeded audit:
///   c0      - bilinear estimate ||B(u,u)|| <= c0 ||u||^2
///   c1      - heat smoothing ||e^{t Lap} f||_{X_T} <= c1 ||f||_{data}
///   c2      - low-frequency horizon bound, together with 2^{2N/r1} T^{1/r1}
///   c_prod  - time-space product estimate constant
struct EmpiricalConstants {
  double c0 = 0;
  double c1 = 0;
  double c2 = 0;
  double c_prod = 0;
};

struct HorizonSelection {
  bool ok = false;
  int cutoff = 0;        // N
  double horizon = 0;    // T
  double eps = 0;
  double high_norm = 0;  // data norm of the high part at the chosen N
  double certificate_norm = 0;  // measured heat-flow norm on [0, T]
  bool certified = false;
};

/// Local-existence horizon: split the data at 2^N so the high part is small
/// in the critical norm, then shrink T until the low part's heat flow fits
/// under eps as well. The returned certificate re-measures the full
/// heat-flow norm directly.
template <typename Scalar>
HorizonSelection select_local_horizon(const StatePairT<Scalar>& data_in, const SolverConfig& cfg,
                                      const DyadicPartitionT<Scalar>& part,
                                      const EmpiricalConstants& constants, double eps) {
  cfg.validate();
  if (!(eps > 0)) throw std::invalid_argument("select_local_horizon: eps must be positive");
  StatePairT<Scalar> data = data_in;
  if (!is_neutral(data)) {
    if (!cfg.auto_project) throw std::invalid_argument("select_local_horizon: data not neutral");
    data = project_neutral(std::move(data));
  }
  const auto& grid = data.grid();
  const BesovIndex s0 = cfg.data_index();

  HorizonSelection sel;
  sel.eps = eps;
  bool found = false;
  for (int cutoff = grid.shell_min() - 1; cutoff <= grid.shell_max(); ++cutoff) {
    const double high = std::max(besov_norm(frequency_split(data.v, cutoff).first, s0, part),
                                 besov_norm(frequency_split(data.w, cutoff).first, s0, part));
    if (constants.c1 * high <= eps / 2) {
      sel.cutoff = cutoff;
      sel.high_norm = high;
      found = true;
      break;
    }
  }
  if (!found) return sel;  // no admissible N in the representable range

  const double data_norm =
      std::max(besov_norm(data.v, s0, part), besov_norm(data.w, s0, part));
  double horizon = cfg.horizon;
  if (data_norm > 0) {
    const double bound = eps / (2 * constants.c2 * std::exp2(2.0 * sel.cutoff / cfg.r1) * data_norm);
    horizon = std::min(cfg.horizon, std::pow(bound, cfg.r1));
  }
  if (!(horizon > 0)) return sel;
  sel.horizon = horizon;

  const int steps = std::clamp(cfg.steps_for(horizon), 96, 1024);
  TrajectoryT<Scalar> flow = heat_flow_trajectory(data, graded_times<Scalar>(horizon, steps));
  sel.certificate_norm = chemin_lerner_pair_norm(flow, cfg.r1, cfg.monitor_index(), part);
  sel.certified = sel.certificate_norm <= eps * (1 + 1e-9);
  sel.ok = sel.certified;
  return sel;
}

}  // namespace besovdh
