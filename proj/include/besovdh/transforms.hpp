#pragma once

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>
#include <vector>

#include "besovdh/field.hpp"

namespace besovdh {

namespace detail {

/// In-place complex n-D DFT along every axis, one 1-D transform per line.
/// kissfft (Eigen's default backend) does the per-length planning; plans are
/// cached inside the FFT object for the duration of the call.
template <typename Scalar>
void transform_all_axes(const GridT<Scalar>& grid, std::complex<Scalar>* data, bool inverse) {
  using Complex = std::complex<Scalar>;
  Eigen::FFT<Scalar> fft;
  fft.SetFlag(Eigen::FFT<Scalar>::Unscaled);
  const int m = grid.points;
  std::vector<Complex> line(m), out(m);
  for (int axis = 0; axis < grid.dim; ++axis) {
    const std::int64_t s = grid.stride(axis);
    const std::int64_t block = s * m;
    for (std::int64_t base = 0; base < grid.total(); base += block) {
      for (std::int64_t off = 0; off < s; ++off) {
        Complex* first = data + base + off;
        for (int t = 0; t < m; ++t) line[t] = first[t * s];
        if (inverse)
          fft.inv(out.data(), line.data(), m);
        else
          fft.fwd(out.data(), line.data(), m);
        for (int t = 0; t < m; ++t) first[t * s] = out[t];
      }
    }
  }
}

}  // namespace detail

using RealArray = Eigen::ArrayXd;

/// Physical samples (row-major over the grid) -> Fourier coefficients.
/// Normalization: divides by M^n, so coeffs[0] is the spatial mean.
template <typename Scalar>
SpectralFieldT<Scalar> forward_transform(const GridT<Scalar>& grid,
                                         const Eigen::Array<Scalar, Eigen::Dynamic, 1>& values) {
  if (values.size() != grid.total())
    throw std::invalid_argument("forward_transform: sample count does not match grid");
  SpectralFieldT<Scalar> f(grid);
  for (std::int64_t i = 0; i < grid.total(); ++i) f.coeffs[i] = std::complex<Scalar>(values[i], 0);
  detail::transform_all_axes(grid, f.coeffs.data(), false);
  f.coeffs /= std::complex<Scalar>(Scalar(grid.total()), 0);
  return f;
}

/// Fourier coefficients -> physical samples. Inverse of forward_transform;
/// the imaginary residue (roundoff for conjugate-symmetric input) is dropped.
template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> inverse_transform(const SpectralFieldT<Scalar>& f) {
  Eigen::Array<std::complex<Scalar>, Eigen::Dynamic, 1> work = f.coeffs;
  detail::transform_all_axes(f.grid, work.data(), true);
  Eigen::Array<Scalar, Eigen::Dynamic, 1> values(f.grid.total());
  for (std::int64_t i = 0; i < f.grid.total(); ++i) values[i] = work[i].real();
  return values;
}

/// Evaluate the trigonometric interpolant at an arbitrary point of the box.
template <typename Scalar>
Scalar evaluate_at(const SpectralFieldT<Scalar>& f, const std::array<Scalar, 3>& x) {
  using Complex = std::complex<Scalar>;
  const auto& g = f.grid;
  const int m = g.points;
  // Per-axis phase tables e^{i k x_a}.
  std::array<std::vector<Complex>, 3> phase;
  for (int a = 0; a < g.dim; ++a) {
    phase[a].resize(m);
    for (int i = 0; i < m; ++i) {
      const int fr = i < m / 2 ? i : i - m;
      const Scalar arg = g.k_step() * Scalar(fr) * x[a];
      phase[a][i] = Complex(std::cos(arg), std::sin(arg));
    }
  }
  Complex acc(0, 0);
  for (std::int64_t flat = 0; flat < g.total(); ++flat) {
    Complex ph = phase[0][(flat / g.stride(0)) % m];
    for (int a = 1; a < g.dim; ++a) ph *= phase[a][(flat / g.stride(a)) % m];
    acc += f.coeffs[flat] * ph;
  }
  return acc.real();
}

}  // namespace besovdh
