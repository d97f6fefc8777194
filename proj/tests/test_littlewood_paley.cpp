#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "besovdh/bernstein.hpp"
#include "besovdh/littlewood_paley.hpp"
#include "besovdh/random_fields.hpp"
#include "test_util.hpp"

using namespace besovdh;
using namespace besovdh::testing;

namespace {
std::vector<double> log_spaced_radii(int count, double lo, double hi) {
  std::vector<double> r(count);
  for (int i = 0; i < count; ++i)
    r[i] = lo * std::pow(hi / lo, double(i) / double(count - 1));
  return r;
}
}  // namespace

TEST_CASE("partition of unity identities at sampled radii") {
  auto part = build_partition<double>();
  // psi + sum_{j>=0} phi(2^{-j} xi) = 1 everywhere; sum_{j in Z} phi = 1 away from 0
  for (double r : log_spaced_radii(10000, std::exp2(-10), std::exp2(10))) {
    double inhom = part.psi(r);
    for (int j = 0; j <= 14; ++j) inhom += part.phi(std::ldexp(r, -j));
    CHECK(std::abs(inhom - 1.0) < 1e-12);

    double hom = 0;
    const int jc = int(std::floor(std::log2(r)));
    for (int j = jc - 3; j <= jc + 3; ++j) hom += part.phi(std::ldexp(r, -j));
    CHECK(std::abs(hom - 1.0) < 1e-12);
  }
}

TEST_CASE("partition values at dyadic radii and support constraints") {
  auto part = build_partition<double>();
  CHECK(part.phi(1.0) + part.phi(2.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(part.phi(0.5) == 0.0);
  CHECK(part.phi(0.74) == 0.0);   // below the 3/4..8/3 annulus
  CHECK(part.phi(8.0 / 3.0 + 1e-9) == 0.0);
  CHECK(part.psi(0.9) == 1.0);
  CHECK(part.psi(4.0 / 3.0 + 1e-9) < 1e-12);
  // disjoint supports two shells apart: phi(r) * phi(r/4) = 0 for all r
  for (double r : log_spaced_radii(2000, 0.5, 16.0))
    CHECK(part.phi(r) * part.phi(r / 4.0) == 0.0);
}

TEST_CASE("dyadic block of a single mode carries the partition weight") {
  Grid g(2, 32, 2 * Grid::pi());
  auto part = build_partition<double>();
  SpectralField mode(g);
  mode.coeffs[g.stride(0) * 4] = 1.0;  // |k| = 4 = 2^2
  for (int j = g.shell_min(); j <= g.shell_max(); ++j) {
    SpectralField bj = dyadic_block(mode, j, part);
    const double expected = part.phi(std::ldexp(4.0, -j));
    CHECK(std::abs(bj.coeffs[g.stride(0) * 4] - std::complex<double>(expected, 0)) < 1e-14);
  }
}

TEST_CASE("block almost-orthogonality and resummation") {
  Grid g(2, 32, 2 * Grid::pi());
  auto part = build_partition<double>();
  SpectralField f = random_field(g, 5150);

  SpectralField sum(g);
  for (int j = g.shell_min(); j <= g.shell_max(); ++j) {
    SpectralField bj = dyadic_block(f, j, part);
    sum += bj;
    for (int jp = j + 2; jp <= g.shell_max(); ++jp) {
      SpectralField bb = dyadic_block(bj, jp, part);
      CHECK(bb.coeffs.abs().maxCoeff() <= 1e-12);
    }
  }
  SpectralField want = f;
  want.coeffs[0] = 0;  // mean excluded from every block
  CHECK((sum.coeffs - want.coeffs).abs().maxCoeff() / max_abs_coeff(f) < 1e-12);
}

TEST_CASE("low pass limits and telescoping") {
  Grid g(2, 32, 2 * Grid::pi());
  auto part = build_partition<double>();
  SpectralField f = random_field(g, 61);

  SpectralField all = low_pass(f, g.shell_max() + 3, part);
  CHECK((all.coeffs - f.coeffs).abs().maxCoeff() == 0.0);

  SpectralField none = low_pass(f, g.shell_min() - 2, part);
  CHECK(std::abs(none.coeffs[0] - f.coeffs[0]) == 0.0);
  none.coeffs[0] = 0;
  CHECK(none.coeffs.abs().maxCoeff() < 1e-12);

  for (int j : {0, 2, 4}) {
    SpectralField lhs = dyadic_block(f, j, part);
    SpectralField rhs = low_pass(f, j + 1, part) - low_pass(f, j, part);
    rhs.coeffs[0] = 0;
    CHECK((lhs.coeffs - rhs.coeffs).abs().maxCoeff() / max_abs_coeff(f) < 1e-12);
  }

  // S_j = mean + sum_{k <= j-1} Delta_k
  const int j = 3;
  SpectralField acc(g);
  acc.coeffs[0] = f.coeffs[0];
  for (int k = g.shell_min() - 2; k <= j - 1; ++k) acc += dyadic_block(f, k, part);
  SpectralField sj = low_pass(f, j, part);
  CHECK((acc.coeffs - sj.coeffs).abs().maxCoeff() / max_abs_coeff(f) < 1e-12);
}

TEST_CASE("lp_norm closed forms") {
  Grid g(2, 32, 1.7);
  SpectralField c(g);
  c.coeffs[0] = -2.5;
  for (double p : {1.0, 2.0, 3.0, kInf}) CHECK(rel_err(lp_norm(c, p), 2.5) < 1e-13);

  Grid gc(2, 32, 2 * Grid::pi());
  SpectralField f = forward_transform(gc, cosine_samples(gc, 0));
  CHECK(rel_err(lp_norm(f, 2.0), 1.0 / std::sqrt(2.0)) < 1e-13);
  // integral of cos^4 over a period is 3/8
  CHECK(rel_err(lp_norm(f, 4.0), std::pow(3.0 / 8.0, 0.25)) < 1e-13);
  CHECK(rel_err(lp_norm(f, kInf), 1.0) < 1e-13);
  CHECK_THROWS_AS(lp_norm(f, 0.5), std::invalid_argument);
}

TEST_CASE("besov norm: zero field and single-mode shell summation oracle") {
  Grid g(2, 32, 2 * Grid::pi());
  auto part = build_partition<double>();
  CHECK(besov_norm(SpectralField(g), BesovIndex{0, 2, 2}, part) == 0.0);

  // f = cos(x): |k| = 1 touches shells j = -1 (weight phi(2)) and j = 0
  // (weight phi(1)). Block j has physical field phi(2^{-j}) cos(x) with
  // Lebesgue L^2 norm phi * L^{n/2} / sqrt(2).
  SpectralField f = forward_transform(g, cosine_samples(g, 0));
  const double vol = std::pow(g.length, g.dim / 2.0);
  double want2 = 0;
  for (int j : {-1, 0}) {
    const double w = part.phi(std::ldexp(1.0, -j));
    want2 += std::pow(w * vol / std::sqrt(2.0), 2);
  }
  CHECK(rel_err(besov_norm(f, BesovIndex{0, 2, 2}, part), std::sqrt(want2)) < 1e-12);
}

TEST_CASE("critical-norm dyadic scale invariance and general-s exponent") {
  auto part = build_partition<double>();
  struct Case {
    int n, m;
    double p;
  };
  for (const Case c : {Case{2, 32, 2.0}, Case{3, 16, 2.0}, Case{3, 16, 4.0}}) {
    Grid g(c.n, c.m, 2 * Grid::pi());
    SpectralField f = zero_mean(random_field(g, 900 + c.n + int(c.p)));
    SpectralField f2 = dyadic_dilate(f, 1);

    const double s_crit = -2.0 + c.n / c.p;
    const BesovIndex crit{s_crit, c.p, 2.0};
    const double a = besov_norm(f, crit, part);
    const double b = besov_norm(f2, crit, part);
    CHECK(rel_err(b, a) < 1e-10);

    for (double s : {0.0, -1.2, 0.7}) {
      const BesovIndex idx{s, c.p, 3.0};
      const double expo = 2.0 + s - c.n / c.p;
      CHECK(rel_err(besov_norm(f2, idx, part), std::exp2(expo) * besov_norm(f, idx, part)) <
            1e-10);
    }
  }
}

TEST_CASE("besov norm is a norm: homogeneity and triangle inequality") {
  Grid g(2, 32, 2.0);
  auto part = build_partition<double>();
  const BesovIndex idx{-1.0, 2.0, 2.0};
  for (int trial = 0; trial < 5; ++trial) {
    SpectralField a = zero_mean(random_field(g, 100 + trial));
    SpectralField b = zero_mean(random_field(g, 200 + trial));
    const double na = besov_norm(a, idx, part);
    const double nb = besov_norm(b, idx, part);
    CHECK(rel_err(besov_norm(3.5 * a, idx, part), 3.5 * na) < 1e-12);
    CHECK(besov_norm(a + b, idx, part) <= na + nb + 1e-12 * (na + nb));
  }
}

TEST_CASE("besov index well-posedness range validator") {
  CHECK_THROWS_AS(BesovIndex::critical(2, 1.5, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(BesovIndex::critical(2, 4.0, 2.0), std::invalid_argument);
  BesovIndex idx = BesovIndex::critical(3, 4.0, kInf);
  CHECK(idx.s == doctest::Approx(-1.25));
  CHECK(in_wellposed_range(3, idx));
  CHECK(!in_wellposed_range(2, BesovIndex{-1.7, 2.0 / 0.3, 2.0}));
  CHECK(!in_wellposed_range(2, BesovIndex{-1.0, 3.0, 2.0}));  // p != n/(s+2)
}

TEST_CASE("frequency split: complements, trivial cutoffs, tail decay") {
  Grid g(2, 32, 2 * Grid::pi());
  auto part = build_partition<double>();
  SpectralField f = random_field(g, 303);

  auto [high, low] = frequency_split(f, 2);
  CHECK(((high.coeffs + low.coeffs) - f.coeffs).abs().maxCoeff() == 0.0);
  for (std::int64_t i = 0; i < g.total(); ++i) {
    if (std::sqrt(g.k_squared(i)) > 4.0)
      CHECK(std::abs(low.coeffs[i]) == 0.0);
    else
      CHECK(std::abs(high.coeffs[i]) == 0.0);
  }

  auto [h2, l2] = frequency_split(f, 12);  // above Nyquist
  CHECK(h2.coeffs.abs().maxCoeff() == 0.0);

  auto [h3, l3] = frequency_split(f, -4);  // below lowest nonzero |k|
  CHECK(std::abs(l3.coeffs[0] - f.coeffs[0]) == 0.0);
  SpectralField hm = h3;
  hm.coeffs[0] = f.coeffs[0];
  CHECK((hm.coeffs - f.coeffs).abs().maxCoeff() == 0.0);

  // high-part norm decays monotonically in N for p = 2, q = 1
  const BesovIndex idx{-1.0, 2.0, 1.0};
  double prev = kInf;
  for (int cutoff = 0; cutoff <= 6; ++cutoff) {
    const double val = besov_norm(frequency_split(f, cutoff).first, idx, part);
    CHECK(val <= prev + 1e-12);
    prev = val;
  }
  CHECK(prev == 0.0);
}

TEST_CASE("bernstein audit: pinned cases and shell stability") {
  // k-lattice fine enough for the j = 1 ball to hold many modes
  Grid g(2, 64, 8 * Grid::pi());
  CHECK_THROWS_AS(bernstein_audit(g, 1.0, 4.0, 2.0, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(bernstein_audit(g, -0.5, 2.0, 2.0, 1, 0), std::invalid_argument);

  // single mode |k| = 2^j, p = q = 2, s = 1: ratio is exactly |k| / 2^j = 1;
  // the audit over random low-pass packets stays <= 1 and is shell-stable.
  BernsteinReport rep = bernstein_audit(g, 1.0, 2.0, 2.0, 20, 42, 1, 3);
  CHECK(rep.max_ratio <= 1.0 + 1e-12);
  CHECK(rep.stable);

  BernsteinReport id = bernstein_audit(g, 0.0, 2.0, 2.0, 5, 7, 1, 3);
  for (double v : id.max_ratio_per_shell) CHECK(rel_err(v, 1.0) < 1e-12);

  BernsteinReport mixed = bernstein_audit(g, 1.0, 2.0, kInf, 20, 42, 1, 3);
  CHECK(mixed.stable);
  BernsteinReport l1 = bernstein_audit(g, 1.0, 1.0, 2.0, 20, 42, 1, 3);
  CHECK(l1.stable);
}
