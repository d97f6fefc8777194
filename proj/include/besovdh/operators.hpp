#pragma once

#include <cmath>
#include <vector>

#include "besovdh/field.hpp"

namespace besovdh {

/// Wavenumber handed to multiplier callables: components (zero-padded to 3)
/// and |k|^2.
template <typename Scalar>
struct ModeT {
  std::array<Scalar, 3> k;
  Scalar k2;
};

/// coeff_out(k) = m(k) * coeff_in(k). A non-finite multiplier value at k != 0
/// is rejected; a non-finite value at the zero mode maps that mode to 0
/// (the caller's convention for inverse symbols).
template <typename Scalar, typename Multiplier>
SpectralFieldT<Scalar> apply_multiplier(const SpectralFieldT<Scalar>& f, Multiplier&& m) {
  SpectralFieldT<Scalar> out(f.grid);
  for (std::int64_t i = 0; i < f.grid.total(); ++i) {
    ModeT<Scalar> mode{f.grid.wavevector(i), f.grid.k_squared(i)};
    const std::complex<Scalar> mi = m(mode);
    if (!std::isfinite(mi.real()) || !std::isfinite(mi.imag())) {
      if (i == 0) {
        out.coeffs[0] = std::complex<Scalar>(0, 0);
        continue;
      }
      throw std::invalid_argument("apply_multiplier: non-finite multiplier away from the zero mode");
    }
    out.coeffs[i] = mi * f.coeffs[i];
  }
  return out;
}

/// e^{t Laplacian}: coeff(k) *= e^{-|k|^2 t}. Semigroup in t.
template <typename Scalar>
SpectralFieldT<Scalar> heat_propagator(const SpectralFieldT<Scalar>& f, Scalar t) {
  if (!(t >= Scalar(0))) throw std::invalid_argument("heat_propagator: t must be >= 0");
  SpectralFieldT<Scalar> out(f.grid);
  for (std::int64_t i = 0; i < f.grid.total(); ++i)
    out.coeffs[i] = std::exp(-f.grid.k_squared(i) * t) * f.coeffs[i];
  return out;
}

/// Partial derivative along one axis: multiplier i k_axis.
template <typename Scalar>
SpectralFieldT<Scalar> derivative(const SpectralFieldT<Scalar>& f, int axis) {
  SpectralFieldT<Scalar> out(f.grid);
  for (std::int64_t i = 0; i < f.grid.total(); ++i)
    out.coeffs[i] = std::complex<Scalar>(0, f.grid.wavenumber(i, axis)) * f.coeffs[i];
  return out;
}

template <typename Scalar>
std::vector<SpectralFieldT<Scalar>> gradient(const SpectralFieldT<Scalar>& f) {
  std::vector<SpectralFieldT<Scalar>> g;
  g.reserve(f.grid.dim);
  for (int a = 0; a < f.grid.dim; ++a) g.push_back(derivative(f, a));
  return g;
}

template <typename Scalar>
SpectralFieldT<Scalar> divergence(const std::vector<SpectralFieldT<Scalar>>& v) {
  if (v.empty()) throw std::invalid_argument("divergence: empty component list");
  if (int(v.size()) != v.front().grid.dim)
    throw std::invalid_argument("divergence: component count does not match grid dimension");
  SpectralFieldT<Scalar> out(v.front().grid);
  for (int a = 0; a < out.grid.dim; ++a) {
    v[a].require_same_grid(v.front());
    for (std::int64_t i = 0; i < out.grid.total(); ++i)
      out.coeffs[i] += std::complex<Scalar>(0, out.grid.wavenumber(i, a)) * v[a].coeffs[i];
  }
  return out;
}

template <typename Scalar>
SpectralFieldT<Scalar> laplacian(const SpectralFieldT<Scalar>& f) {
  SpectralFieldT<Scalar> out(f.grid);
  for (std::int64_t i = 0; i < f.grid.total(); ++i) out.coeffs[i] = -f.grid.k_squared(i) * f.coeffs[i];
  return out;
}

/// grad (-Laplacian)^{-1} f: component a has symbol i k_a / |k|^2, zero mode 0.
template <typename Scalar>
std::vector<SpectralFieldT<Scalar>> inverse_laplacian_gradient(const SpectralFieldT<Scalar>& f) {
  std::vector<SpectralFieldT<Scalar>> g(f.grid.dim, SpectralFieldT<Scalar>(f.grid));
  for (std::int64_t i = 1; i < f.grid.total(); ++i) {
    const Scalar k2 = f.grid.k_squared(i);
    for (int a = 0; a < f.grid.dim; ++a)
      g[a].coeffs[i] = std::complex<Scalar>(0, f.grid.wavenumber(i, a) / k2) * f.coeffs[i];
  }
  return g;
}

/// |k|^s multiplier (Riesz derivative); |0|^s := 0 for s != 0, identity for s = 0.
template <typename Scalar>
SpectralFieldT<Scalar> riesz_derivative(const SpectralFieldT<Scalar>& f, Scalar s) {
  SpectralFieldT<Scalar> out(f.grid);
  out.coeffs[0] = s == Scalar(0) ? f.coeffs[0] : std::complex<Scalar>(0, 0);
  for (std::int64_t i = 1; i < f.grid.total(); ++i)
    out.coeffs[i] = std::pow(f.grid.k_squared(i), s / Scalar(2)) * f.coeffs[i];
  return out;
}

/// 2/3-rule dealiasing: zero every coefficient with |k_a| > (2/3) * (pi M / L)
/// in any direction. Equivalent integer test: 3 |freq_a| > M.
template <typename Scalar>
SpectralFieldT<Scalar> dealias(const SpectralFieldT<Scalar>& f) {
  SpectralFieldT<Scalar> out(f.grid);
  const int m = f.grid.points;
  for (std::int64_t i = 0; i < f.grid.total(); ++i) {
    bool keep = true;
    for (int a = 0; a < f.grid.dim; ++a) {
      const int fr = f.grid.freq(i, a);
      if (3 * std::abs(fr) > m) {
        keep = false;
        break;
      }
    }
    out.coeffs[i] = keep ? f.coeffs[i] : std::complex<Scalar>(0, 0);
  }
  return out;
}

}  // namespace besovdh
