#pragma once

#include "besovdh/trajectory.hpp"

namespace besovdh {

namespace detail {

/// Trapezoid weights on the trajectory's own (not necessarily uniform) times.
template <typename Scalar>
Eigen::ArrayXd trapezoid_weights(const std::vector<Scalar>& times) {
  const int n = int(times.size());
  Eigen::ArrayXd w = Eigen::ArrayXd::Zero(n);
  for (int i = 0; i + 1 < n; ++i) {
    const double h = double(times[i + 1] - times[i]);
    w[i] += h / 2;
    w[i + 1] += h / 2;
  }
  return w;
}

/// L^r(0,T) norm of one sampled scalar history under trapezoid quadrature;
/// r = infinity gives the max over samples.
inline double time_lr(const Eigen::ArrayXd& values, const Eigen::ArrayXd& weights, double r) {
  if (r == kInf) return values.maxCoeff();
  if (r == 2.0) return std::sqrt((weights * values.square()).sum());
  return std::pow((weights * values.pow(r)).sum(), 1.0 / r);
}

}  // namespace detail

/// Chemin-Lerner norm: l^q over shells of 2^{js} ||Delta_j f||_{L^r(0,T;L^p)},
/// time integrals by trapezoid on the sample times. Requires r > 1 (the
/// bookkeeping exponent r1/2 stays above 1 since r1 > 2).
template <typename Scalar>
double chemin_lerner_norm(const TrajectoryT<Scalar>& traj, FieldSel sel, double r,
                          const BesovIndex& idx, const DyadicPartitionT<Scalar>& part) {
  if (!(r > 1.0)) throw std::invalid_argument("chemin_lerner_norm: need r in (1, inf]");
  traj.validate();
  Eigen::ArrayXXd scratch;
  const Eigen::ArrayXXd& table = shell_history(traj, sel, idx.p, part, scratch);
  const Eigen::ArrayXd tw = detail::trapezoid_weights(traj.times);
  Eigen::ArrayXd per_shell(table.rows());
  for (int s = 0; s < table.rows(); ++s)
    per_shell[s] = detail::time_lr(table.row(s).transpose(), tw, r);
  return shell_lq(per_shell, traj.grid().shell_min(), idx.s, idx.q);
}

/// The ordinary L^r(0,T; Besov) norm: integral and shell sum exchanged.
template <typename Scalar>
double lr_besov_norm(const TrajectoryT<Scalar>& traj, FieldSel sel, double r,
                     const BesovIndex& idx, const DyadicPartitionT<Scalar>& part) {
  if (!(r > 1.0)) throw std::invalid_argument("lr_besov_norm: need r in (1, inf]");
  traj.validate();
  Eigen::ArrayXXd scratch;
  const Eigen::ArrayXXd& table = shell_history(traj, sel, idx.p, part, scratch);
  const Eigen::ArrayXd tw = detail::trapezoid_weights(traj.times);
  Eigen::ArrayXd per_time(table.cols());
  for (int i = 0; i < table.cols(); ++i)
    per_time[i] = shell_lq(table.col(i), traj.grid().shell_min(), idx.s, idx.q);
  return detail::time_lr(per_time, tw, r);
}

/// max over the (v, w) components.
template <typename Scalar>
double chemin_lerner_pair_norm(const TrajectoryT<Scalar>& traj, double r, const BesovIndex& idx,
                               const DyadicPartitionT<Scalar>& part) {
  return std::max(chemin_lerner_norm(traj, FieldSel::V, r, idx, part),
                  chemin_lerner_norm(traj, FieldSel::W, r, idx, part));
}

struct MinkowskiReport {
  double r = 0, q = 0;
  double cl_norm = 0;  // Chemin-Lerner value
  double lr_norm = 0;  // exchanged-order value
  bool expected_order_known = false;
  bool holds = true;

  static constexpr double kSlack = 1e-10;
};

/// Checks the Minkowski ordering between the two time-space norms:
/// CL <= L when r <= q, L <= CL when q <= r (equality at r = q).
template <typename Scalar>
MinkowskiReport minkowski_ordering_audit(const TrajectoryT<Scalar>& traj, FieldSel sel, double r,
                                         const BesovIndex& idx,
                                         const DyadicPartitionT<Scalar>& part) {
  MinkowskiReport rep;
  rep.r = r;
  rep.q = idx.q;
  rep.cl_norm = chemin_lerner_norm(traj, sel, r, idx, part);
  rep.lr_norm = lr_besov_norm(traj, sel, r, idx, part);
  const double slack = MinkowskiReport::kSlack * std::max(rep.cl_norm, rep.lr_norm);
  rep.expected_order_known = true;
  if (r <= rep.q) rep.holds = rep.cl_norm <= rep.lr_norm + slack;
  if (rep.q <= r) rep.holds = rep.holds && rep.lr_norm <= rep.cl_norm + slack;
  return rep;
}

}  // namespace besovdh
