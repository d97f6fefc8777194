#pragma once

#include <Eigen/Core>
#include <cmath>
#include <limits>
#include <utility>

#include "besovdh/operators.hpp"
#include "besovdh/transforms.hpp"

namespace besovdh {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace detail {

// e^{-1/s} continued by 0, the standard mollifier ingredient.
template <typename Scalar>
Scalar bump_h(Scalar s) {
  return s > Scalar(0) ? std::exp(-Scalar(1) / s) : Scalar(0);
}

}  // namespace detail

/// Radial dyadic partition of unity. chi is 1 on [0,1] and 0 beyond 4/3;
/// the raw annular bump chi(r/2) - chi(r) telescopes over dyadic scalings,
/// and phi divides it by the computed telescoping sum so that both partition
/// identities hold to machine precision. Supports:
///   phi in {1 <= r <= 8/3} (inside the 3/4..8/3 annulus), psi in {r <= 4/3}.
template <typename Scalar>
struct DyadicPartitionT {
  /// Smooth cutoff: 1 for r <= 1, 0 for r >= 4/3.
  Scalar chi(Scalar r) const {
    r = std::abs(r);
    if (r <= Scalar(1)) return Scalar(1);
    if (r >= Scalar(4.0 / 3.0)) return Scalar(0);
    const Scalar a = detail::bump_h(Scalar(4.0 / 3.0) - r);
    const Scalar b = detail::bump_h(r - Scalar(1));
    return a / (a + b);
  }

  Scalar phi_raw(Scalar r) const { return chi(r / Scalar(2)) - chi(r); }

  /// Sum of phi_raw over all dyadic rescalings touching radius r (at most
  /// two terms are nonzero).
  Scalar telescoping_sum(Scalar r) const {
    r = std::abs(r);
    if (!(r > Scalar(0))) return Scalar(0);
    const int jc = int(std::floor(std::log2(double(r))));
    Scalar s = 0;
    for (int j = jc - 2; j <= jc + 2; ++j) s += phi_raw(std::ldexp(r, -j));
    return s;
  }

  Scalar phi(Scalar r) const {
    r = std::abs(r);
    const Scalar raw = phi_raw(r);
    if (raw == Scalar(0)) return Scalar(0);
    return raw / telescoping_sum(r);
  }

  Scalar psi(Scalar r) const {
    r = std::abs(r);
    if (r <= Scalar(1)) return Scalar(1);
    const int jc = int(std::floor(std::log2(double(r))));
    Scalar s = 0;
    for (int j = 0; j <= jc + 2; ++j) s += phi(std::ldexp(r, -j));
    return Scalar(1) - s;
  }
};

template <typename Scalar>
DyadicPartitionT<Scalar> build_partition() {
  return DyadicPartitionT<Scalar>{};
}

using DyadicPartition = DyadicPartitionT<double>;

/// Frequency projection onto the dyadic annulus {3/4 * 2^j <= |k| <= 8/3 * 2^j},
/// acting on raw wavenumber magnitude. The zero mode is always excluded.
template <typename Scalar>
SpectralFieldT<Scalar> dyadic_block(const SpectralFieldT<Scalar>& f, int j,
                                    const DyadicPartitionT<Scalar>& part) {
  SpectralFieldT<Scalar> out(f.grid);
  for (std::int64_t i = 1; i < f.grid.total(); ++i) {
    const Scalar r = std::ldexp(std::sqrt(f.grid.k_squared(i)), -j);
    const Scalar w = part.phi(r);
    if (w != Scalar(0)) out.coeffs[i] = w * f.coeffs[i];
  }
  return out;
}

/// Low-pass S_j with multiplier psi(2^{-j}|k|); keeps the mean.
template <typename Scalar>
SpectralFieldT<Scalar> low_pass(const SpectralFieldT<Scalar>& f, int j,
                                const DyadicPartitionT<Scalar>& part) {
  SpectralFieldT<Scalar> out(f.grid);
  out.coeffs[0] = f.coeffs[0];
  for (std::int64_t i = 1; i < f.grid.total(); ++i) {
    const Scalar w = part.psi(std::ldexp(std::sqrt(f.grid.k_squared(i)), -j));
    if (w != Scalar(0)) out.coeffs[i] = w * f.coeffs[i];
  }
  return out;
}

/// Sharp split at |k| = 2^N: (high: |k| > 2^N, low: |k| <= 2^N). high + low = f.
template <typename Scalar>
std::pair<SpectralFieldT<Scalar>, SpectralFieldT<Scalar>> frequency_split(
    const SpectralFieldT<Scalar>& f, int cutoff_exponent) {
  SpectralFieldT<Scalar> high(f.grid), low(f.grid);
  const Scalar c2 = std::ldexp(Scalar(1), 2 * cutoff_exponent);  // (2^N)^2
  for (std::int64_t i = 0; i < f.grid.total(); ++i) {
    if (f.grid.k_squared(i) > c2)
      high.coeffs[i] = f.coeffs[i];
    else
      low.coeffs[i] = f.coeffs[i];
  }
  return {std::move(high), std::move(low)};
}

/// Dyadic dilation f -> lambda^2 f(lambda x) with lambda = 2^m, realized
/// exactly on the companion box of edge L / lambda: the coefficient array is
/// unchanged up to the lambda^2 amplitude because wavenumbers at fixed index
/// double with the halved box. Shell content moves from j to j + m.
template <typename Scalar>
SpectralFieldT<Scalar> dyadic_dilate(const SpectralFieldT<Scalar>& f, int m) {
  GridT<Scalar> g(f.grid.dim, f.grid.points, std::ldexp(f.grid.length, -m));
  const Scalar amp = std::ldexp(Scalar(1), 2 * m);  // lambda^2
  return SpectralFieldT<Scalar>(g, amp * f.coeffs);
}

/// Regularity / integrability / summability triple (s, p, q); p or q may be
/// infinity.
struct BesovIndex {
  double s = 0;
  double p = 2;
  double q = 2;

  /// Critical index of the well-posedness range: s = -2 + n/p with
  /// 2 <= p < 2n and 1 <= q <= infinity.
  static BesovIndex critical(int n, double p, double q) {
    if (!(p >= 2.0 && p < 2.0 * n)) throw std::invalid_argument("besov index: need 2 <= p < 2n");
    if (!(q >= 1.0)) throw std::invalid_argument("besov index: need q >= 1");
    return BesovIndex{-2.0 + double(n) / p, p, q};
  }
};

/// True when (s, p) sits in the well-posedness range: -3/2 < s <= -2 + n/2 and
/// p = n/(s+2).
inline bool in_wellposed_range(int n, const BesovIndex& idx) {
  if (!(idx.s > -1.5 && idx.s <= -2.0 + 0.5 * n)) return false;
  if (!(idx.q >= 1.0)) return false;
  return std::abs(idx.p - double(n) / (idx.s + 2.0)) <= 1e-12 * idx.p;
}

/// L^p norm over the normalized torus measure: ((1/M^n) sum |f(x)|^p)^{1/p};
/// p = infinity gives max |f(x)|.
template <typename Scalar>
Scalar lp_norm_physical(const Eigen::Array<Scalar, Eigen::Dynamic, 1>& values, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be in [1, inf]");
  if (p == kInf) return values.abs().maxCoeff();
  if (p == 2.0) return std::sqrt(values.square().mean());
  return std::pow(values.abs().pow(Scalar(p)).mean(), Scalar(1.0 / p));
}

template <typename Scalar>
Scalar lp_norm(const SpectralFieldT<Scalar>& f, double p) {
  return lp_norm_physical<Scalar>(inverse_transform(f), p);
}

/// L^p norm with the true box Lebesgue measure, L^{n/p} * lp_norm. Dyadic
/// shell norms use this measure so the R^n dilation identities hold exactly;
/// p = infinity carries no volume factor.
template <typename Scalar>
Scalar lebesgue_volume_factor(const GridT<Scalar>& g, double p) {
  return p == kInf ? Scalar(1) : std::pow(g.length, Scalar(g.dim / p));
}

template <typename Scalar>
Scalar lebesgue_norm(const SpectralFieldT<Scalar>& f, double p) {
  return lebesgue_volume_factor(f.grid, p) * lp_norm(f, p);
}

/// Lebesgue L^p norm of one dyadic block. For p = 2 this goes through
/// Parseval (no transform); otherwise through physical-space quadrature.
template <typename Scalar>
Scalar block_norm(const SpectralFieldT<Scalar>& f, int j, const DyadicPartitionT<Scalar>& part,
                  double p) {
  if (p == 2.0) {
    Scalar sum2 = 0;
    for (std::int64_t i = 1; i < f.grid.total(); ++i) {
      const Scalar w = part.phi(std::ldexp(std::sqrt(f.grid.k_squared(i)), -j));
      if (w != Scalar(0)) sum2 += w * w * std::norm(f.coeffs[i]);
    }
    return lebesgue_volume_factor(f.grid, p) * std::sqrt(sum2);
  }
  return lebesgue_norm(dyadic_block(f, j, part), p);
}

/// Precomputed sparse multiplier weights of every representable shell on one
/// grid (each mode touches at most two shells). Shared by the norm routines
/// so trajectory-sized evaluations do not re-evaluate the bumps per sample.
template <typename Scalar>
struct ShellWeightTable {
  GridT<Scalar> grid;
  int j0 = 0;
  std::vector<std::vector<std::pair<std::int64_t, Scalar>>> entries;  // per shell

  ShellWeightTable(const GridT<Scalar>& g, const DyadicPartitionT<Scalar>& part)
      : grid(g), j0(g.shell_min()), entries(g.shell_count()) {
    for (std::int64_t i = 1; i < g.total(); ++i) {
      const Scalar kn = std::sqrt(g.k_squared(i));
      for (int j = g.shell_min(); j <= g.shell_max(); ++j) {
        const Scalar w = part.phi(std::ldexp(kn, -j));
        if (w != Scalar(0)) entries[j - j0].emplace_back(i, w);
      }
    }
  }

  SpectralFieldT<Scalar> block(const SpectralFieldT<Scalar>& f, int j) const {
    SpectralFieldT<Scalar> out(grid);
    for (const auto& [i, w] : entries[j - j0]) out.coeffs[i] = w * f.coeffs[i];
    return out;
  }

  Scalar block_norm(const SpectralFieldT<Scalar>& f, int j, double p) const {
    if (p == 2.0) {
      Scalar sum2 = 0;
      for (const auto& [i, w] : entries[j - j0]) sum2 += w * w * std::norm(f.coeffs[i]);
      return lebesgue_volume_factor(grid, p) * std::sqrt(sum2);
    }
    return lebesgue_norm(block(f, j), p);
  }
};

/// Per-shell Lebesgue L^p norms over the grid's representable range.
template <typename Scalar>
Eigen::ArrayXd shell_norms(const SpectralFieldT<Scalar>& f, const ShellWeightTable<Scalar>& table,
                           double p) {
  if (f.grid != table.grid) throw std::invalid_argument("shell_norms: table grid mismatch");
  Eigen::ArrayXd out(f.grid.shell_count());
  for (int j = table.j0; j <= f.grid.shell_max(); ++j)
    out[j - table.j0] = double(table.block_norm(f, j, p));
  return out;
}

template <typename Scalar>
Eigen::ArrayXd shell_norms(const SpectralFieldT<Scalar>& f, const DyadicPartitionT<Scalar>& part,
                           double p) {
  return shell_norms(f, ShellWeightTable<Scalar>(f.grid, part), p);
}

/// Combine per-shell values with weights 2^{js} in l^q over the shell range
/// j0, j0+1, ...; q = infinity gives the sup.
inline double shell_lq(const Eigen::ArrayXd& norms, int j0, double s, double q) {
  if (q == kInf) {
    double best = 0;
    for (int i = 0; i < norms.size(); ++i)
      best = std::max(best, std::exp2(s * double(j0 + i)) * norms[i]);
    return best;
  }
  double acc = 0;
  for (int i = 0; i < norms.size(); ++i)
    acc += std::pow(std::exp2(s * double(j0 + i)) * norms[i], q);
  return std::pow(acc, 1.0 / q);
}

/// Homogeneous Besov norm, truncated to the representable shell range. The
/// mean is excluded from every block and reported separately by callers that
/// need it.
template <typename Scalar>
double besov_norm(const SpectralFieldT<Scalar>& f, const BesovIndex& idx,
                  const DyadicPartitionT<Scalar>& part) {
  return shell_lq(shell_norms(f, part, idx.p), f.grid.shell_min(), idx.s, idx.q);
}

}  // namespace besovdh
