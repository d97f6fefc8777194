#pragma once

#include <Eigen/Core>
#include <complex>
#include <stdexcept>

#include "besovdh/grid.hpp"

namespace besovdh {

/// A real scalar field on the torus, stored as its full complex Fourier
/// coefficient array. The forward transform divides by M^n, so coeffs[0]
/// is the spatial mean. Values are immutable by convention: operations
/// return new fields.
template <typename Scalar>
struct SpectralFieldT {
  using Complex = std::complex<Scalar>;
  using CoeffArray = Eigen::Array<Complex, Eigen::Dynamic, 1>;

  GridT<Scalar> grid;
  CoeffArray coeffs;

  SpectralFieldT() = default;
  explicit SpectralFieldT(const GridT<Scalar>& g) : grid(g), coeffs(CoeffArray::Zero(g.total())) {}
  SpectralFieldT(const GridT<Scalar>& g, CoeffArray c) : grid(g), coeffs(std::move(c)) {
    if (coeffs.size() != grid.total())
      throw std::invalid_argument("spectral field: coefficient count does not match grid");
  }

  Complex mean() const { return coeffs[0]; }
  std::int64_t size() const { return coeffs.size(); }

  SpectralFieldT& operator+=(const SpectralFieldT& o) {
    require_same_grid(o);
    coeffs += o.coeffs;
    return *this;
  }
  SpectralFieldT& operator-=(const SpectralFieldT& o) {
    require_same_grid(o);
    coeffs -= o.coeffs;
    return *this;
  }
  SpectralFieldT& operator*=(Scalar a) {
    coeffs *= a;
    return *this;
  }

  void require_same_grid(const SpectralFieldT& o) const {
    if (grid != o.grid) throw std::invalid_argument("spectral field: grid mismatch");
  }
};

template <typename Scalar>
SpectralFieldT<Scalar> operator+(SpectralFieldT<Scalar> a, const SpectralFieldT<Scalar>& b) {
  a += b;
  return a;
}
template <typename Scalar>
SpectralFieldT<Scalar> operator-(SpectralFieldT<Scalar> a, const SpectralFieldT<Scalar>& b) {
  a -= b;
  return a;
}
template <typename Scalar>
SpectralFieldT<Scalar> operator*(Scalar a, SpectralFieldT<Scalar> f) {
  f *= a;
  return f;
}
template <typename Scalar>
SpectralFieldT<Scalar> operator-(SpectralFieldT<Scalar> f) {
  f *= Scalar(-1);
  return f;
}

template <typename Scalar>
Scalar max_abs_coeff(const SpectralFieldT<Scalar>& f) {
  return f.coeffs.abs().maxCoeff();
}

/// Largest violation of coeff(-k) = conj(coeff(k)), relative to the
/// largest coefficient magnitude.
template <typename Scalar>
Scalar conjugate_symmetry_defect(const SpectralFieldT<Scalar>& f) {
  const auto& g = f.grid;
  const int m = g.points;
  Scalar worst = 0;
  for (std::int64_t flat = 0; flat < g.total(); ++flat) {
    std::int64_t mirror = 0;
    for (int a = 0; a < g.dim; ++a) {
      const int i = int((flat / g.stride(a)) % m);
      const int ri = (m - i) % m;  // Nyquist index is its own mirror mod M
      mirror += std::int64_t(ri) * g.stride(a);
    }
    const auto d = f.coeffs[flat] - std::conj(f.coeffs[mirror]);
    worst = std::max(worst, std::abs(d));
  }
  const Scalar scale = std::max(Scalar(1e-300), max_abs_coeff(f));
  return worst / scale;
}

using SpectralField = SpectralFieldT<double>;

}  // namespace besovdh
