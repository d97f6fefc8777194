#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace besovdh {

/// Uniform periodic grid on the torus [0,L)^n with the full complex
/// wavenumber lattice k in (2*pi/L)*{-M/2,...,M/2-1}^n.
///
/// Coefficient arrays are flat, row-major over the n FFT axes in natural
/// FFT order (index i per axis maps to integer frequency i, or i-M for
/// i >= M/2).
template <typename Scalar>
struct GridT {
  int dim = 2;        // spatial dimension n, 2 or 3
  int points = 8;     // points per dimension M, even
  Scalar length = 1;  // box edge L

  GridT() = default;
  GridT(int n, int points_per_dim, Scalar box_length)
      : dim(n), points(points_per_dim), length(box_length) {
    if (dim != 2 && dim != 3) throw std::invalid_argument("grid: dim must be 2 or 3");
    if (points < 8 || points % 2 != 0)
      throw std::invalid_argument("grid: points per dim must be even and >= 8");
    if (!(length > Scalar(0))) throw std::invalid_argument("grid: box length must be positive");
    if (shell_max() < shell_min()) throw std::invalid_argument("grid: empty dyadic shell range");
  }

  std::int64_t total() const {
    std::int64_t t = 1;
    for (int a = 0; a < dim; ++a) t *= points;
    return t;
  }

  Scalar spacing() const { return length / Scalar(points); }
  Scalar k_step() const { return Scalar(2) * pi() * (Scalar(1) / length); }
  Scalar k_nyquist() const { return pi() * Scalar(points) / length; }

  std::int64_t stride(int axis) const {
    std::int64_t s = 1;
    for (int a = axis + 1; a < dim; ++a) s *= points;
    return s;
  }

  /// Signed integer frequency of a flat coefficient index along one axis.
  int freq(std::int64_t flat, int axis) const {
    const int i = int((flat / stride(axis)) % points);
    return i < points / 2 ? i : i - points;
  }

  Scalar wavenumber(std::int64_t flat, int axis) const { return k_step() * Scalar(freq(flat, axis)); }

  std::array<Scalar, 3> wavevector(std::int64_t flat) const {
    std::array<Scalar, 3> k{Scalar(0), Scalar(0), Scalar(0)};
    for (int a = 0; a < dim; ++a) k[a] = wavenumber(flat, a);
    return k;
  }

  Scalar k_squared(std::int64_t flat) const {
    Scalar s = 0;
    for (int a = 0; a < dim; ++a) {
      const Scalar ka = wavenumber(flat, a);
      s += ka * ka;
    }
    return s;
  }

  /// Physical coordinate of a flat index along one axis.
  Scalar coordinate(std::int64_t flat, int axis) const {
    return spacing() * Scalar((flat / stride(axis)) % points);
  }

  /// Dyadic shells measured in raw |k|. Shell j carries the multiplier
  /// phi(2^{-j} |k|); the representable range below covers every lattice
  /// mode including the corners.
  int shell_min() const {
    return int(std::ceil(std::log2(double(Scalar(0.75) * k_step())))) - 1;
  }
  int shell_max() const {
    return int(std::floor(std::log2(double(Scalar(8.0 / 3.0) * k_nyquist())))) + 1;
  }
  int shell_count() const { return shell_max() - shell_min() + 1; }

  friend bool operator==(const GridT& a, const GridT& b) {
    return a.dim == b.dim && a.points == b.points && a.length == b.length;
  }
  friend bool operator!=(const GridT& a, const GridT& b) { return !(a == b); }

  static constexpr Scalar pi() { return Scalar(3.141592653589793238462643383279502884L); }
};

using Grid = GridT<double>;

}  // namespace besovdh
