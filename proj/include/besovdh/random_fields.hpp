#pragma once

#include <random>

#include "besovdh/operators.hpp"
#include "besovdh/transforms.hpp"

namespace besovdh {

/// Keep only modes with |k| inside [k_lo, k_hi] (the zero mode is dropped
/// unless k_lo <= 0).
template <typename Scalar>
SpectralFieldT<Scalar> band_limit(const SpectralFieldT<Scalar>& f, Scalar k_lo, Scalar k_hi) {
  SpectralFieldT<Scalar> out(f.grid);
  for (std::int64_t i = 0; i < f.grid.total(); ++i) {
    const Scalar kn = std::sqrt(f.grid.k_squared(i));
    if (kn >= k_lo && kn <= k_hi) out.coeffs[i] = f.coeffs[i];
  }
  return out;
}

/// Gaussian white noise in physical space, transformed; conjugate symmetry
/// holds by construction. Optional dyadic band [j_lo, j_hi] keeps
/// |k| in [2^{j_lo}, 2^{j_hi}].
inline SpectralField random_field(const Grid& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  RealArray values(grid.total());
  for (std::int64_t i = 0; i < grid.total(); ++i) values[i] = gauss(rng);
  return forward_transform(grid, values);
}

inline SpectralField random_field_band(const Grid& grid, std::uint64_t seed, int j_lo, int j_hi) {
  return band_limit(random_field(grid, seed), std::exp2(double(j_lo)), std::exp2(double(j_hi)));
}

inline SpectralField zero_mean(SpectralField f) {
  f.coeffs[0] = {0.0, 0.0};
  return f;
}

}  // namespace besovdh
