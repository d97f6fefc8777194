#pragma once

#include <cstdint>
#include <vector>

#include "besovdh/littlewood_paley.hpp"
#include "besovdh/parallel.hpp"
#include "besovdh/random_fields.hpp"

namespace besovdh {

/// One audited inequality: the empirical constant per cutoff shell and the
/// stability of the constant across shells.
struct BernsteinReport {
  double s = 0;
  double p = 2;
  double q = 2;
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<int> shells;
  std::vector<double> max_ratio_per_shell;
  double max_ratio = 0;
  double spread = 0;  // (max - min) / min over shells
  bool stable = false;

  static constexpr double kStableSpread = 0.20;
};

namespace detail {

/// Random low-pass trial field for the Bernstein audit: a Gaussian-profile
/// wave packet with random center and width, truncated to {|k| <= 2^j} where
/// the profile is already below 2e-3. Packets are near-extremal for the
/// inequality at every scale and their kernel stays positive, so the L^1
/// norms (and hence the audited constants) are comparable across shells;
/// fully delocalized random-phase data would let the p < q ratios decay
/// with j.
inline SpectralField bernstein_trial_field(const Grid& grid, int j, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::array<double, 3> center{};
  for (int a = 0; a < grid.dim; ++a) center[a] = grid.length * unif(rng);
  const double cutoff = std::exp2(j);
  const double sigma = cutoff * (0.22 + 0.06 * unif(rng));
  SpectralField f(grid);
  for (std::int64_t i = 0; i < grid.total(); ++i) {
    const double k2 = grid.k_squared(i);
    if (k2 > cutoff * cutoff) continue;
    double phase = 0;
    for (int a = 0; a < grid.dim; ++a) phase -= grid.wavenumber(i, a) * center[a];
    f.coeffs[i] = std::exp(-k2 / (2 * sigma * sigma)) *
                  std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return f;
}

}  // namespace detail

/// Measures ||D^s f||_{L^q} / (2^{js + jn(1/p - 1/q)} ||f||_{L^p}) over random
/// low-pass packets with Fourier support in {|k| <= 2^j}, for j in
/// [j_lo, j_hi]. Norms use the box Lebesgue measure (the constant absorbs the
/// box factor; only stability across j is asserted).
inline BernsteinReport bernstein_audit(const Grid& grid, double s, double p, double q, int trials,
                                       std::uint64_t seed, int j_lo = 1, int j_hi = 4) {
  if (!(p >= 1.0 && q >= 1.0 && p <= q))
    throw std::invalid_argument("bernstein_audit: need 1 <= p <= q <= inf");
  if (!(s >= 0.0)) throw std::invalid_argument("bernstein_audit: need s >= 0");
  if (trials < 1) throw std::invalid_argument("bernstein_audit: need trials >= 1");

  BernsteinReport rep;
  rep.s = s;
  rep.p = p;
  rep.q = q;
  rep.seed = seed;
  rep.trials = trials;

  const double qinv = q == kInf ? 0.0 : 1.0 / q;
  const double pinv = p == kInf ? 0.0 : 1.0 / p;
  for (int j = j_lo; j <= j_hi; ++j) {
    std::vector<double> ratios(trials, 0.0);
    parallel_for(trials, [&](std::int64_t t) {
      std::mt19937_64 rng(seed + 1000 * std::uint64_t(j - j_lo) + std::uint64_t(t));
      SpectralField f = detail::bernstein_trial_field(grid, j, rng);
      const double denom = std::exp2(j * (s + grid.dim * (pinv - qinv))) * lebesgue_norm(f, p);
      if (denom == 0) return;
      ratios[t] = lebesgue_norm(riesz_derivative(f, s), q) / denom;
    });
    rep.shells.push_back(j);
    rep.max_ratio_per_shell.push_back(*std::max_element(ratios.begin(), ratios.end()));
  }
  double lo = rep.max_ratio_per_shell.front(), hi = lo;
  for (double v : rep.max_ratio_per_shell) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  rep.max_ratio = hi;
  rep.spread = lo > 0 ? (hi - lo) / lo : kInf;
  rep.stable = rep.spread <= BernsteinReport::kStableSpread;
  return rep;
}

}  // namespace besovdh
