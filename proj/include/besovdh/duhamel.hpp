#pragma once

#include <vector>

#include "besovdh/field.hpp"

namespace besovdh {

// Entire functions behind the exponential quadratures, evaluated stably:
//   phi1(z) = (1 - e^-z)/z                      -> 1 at z = 0
//   phi2(z) = (z - 1 + e^-z)/z^2                -> 1/2
//   mu2(z)  = (z^2 - 2z + 2 - 2 e^-z)/z^3       -> 1/3
// The closed forms cancel catastrophically for small z; below the switch
// point the truncated series are exact to machine precision.
namespace expq {

inline double phi1(double z) {
  if (z < 0.05)
    return 1.0 - z / 2 + z * z / 6 - z * z * z / 24 + z * z * z * z / 120 -
           z * z * z * z * z / 720;
  return (1.0 - std::exp(-z)) / z;
}

inline double phi2(double z) {
  if (z < 0.05)
    return 0.5 - z / 6 + z * z / 24 - z * z * z / 120 + z * z * z * z / 720 -
           z * z * z * z * z / 5040;
  return (z - 1.0 + std::exp(-z)) / (z * z);
}

inline double mu2(double z) {
  if (z < 0.05)
    return 1.0 / 3 - z / 12 + z * z / 60 - z * z * z / 360 + z * z * z * z / 2520 -
           z * z * z * z * z / 20160;
  return (z * z - 2.0 * z + 2.0 - 2.0 * std::exp(-z)) / (z * z * z);
}

}  // namespace expq

/// Per-mode factors for one uniform step dt of the heat semigroup and the
/// exponential-trapezoid rule: decay E = e^{-|k|^2 dt}, and weights
/// w0 = dt phi1, w1 = dt phi2, so that
///   int_t^{t+dt} e^{-|k|^2 (t+dt-s)} g(s) ds ~ (w0 - w1) g(t) + w1 g(t+dt)
/// exactly for g linear on the step.
template <typename Scalar>
struct StepWeightsT {
  Eigen::Array<Scalar, Eigen::Dynamic, 1> decay, w0, w1;
};

template <typename Scalar>
StepWeightsT<Scalar> make_step_weights(const GridT<Scalar>& grid, Scalar dt) {
  StepWeightsT<Scalar> sw;
  const auto n = grid.total();
  sw.decay.resize(n);
  sw.w0.resize(n);
  sw.w1.resize(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const double z = double(grid.k_squared(i) * dt);
    sw.decay[i] = Scalar(std::exp(-z));
    sw.w0[i] = dt * Scalar(expq::phi1(z));
    sw.w1[i] = dt * Scalar(expq::phi2(z));
  }
  return sw;
}

/// Accumulates I(t_m) = int_0^{t_m} e^{(t_m - s) Laplacian} g(s) ds over a
/// uniform grid, with the heat factor exact between samples and g
/// interpolated linearly (the exponential-trapezoid rule).
template <typename Scalar>
std::vector<SpectralFieldT<Scalar>> duhamel_trapezoid(
    const std::vector<SpectralFieldT<Scalar>>& sources, Scalar dt) {
  if (sources.empty()) throw std::invalid_argument("duhamel: no source samples");
  const auto& grid = sources.front().grid;
  const StepWeightsT<Scalar> sw = make_step_weights(grid, dt);
  std::vector<SpectralFieldT<Scalar>> out;
  out.reserve(sources.size());
  out.emplace_back(grid);
  for (std::size_t m = 1; m < sources.size(); ++m) {
    sources[m].require_same_grid(sources.front());
    SpectralFieldT<Scalar> next(grid);
    next.coeffs = sw.decay * out.back().coeffs + (sw.w0 - sw.w1) * sources[m - 1].coeffs +
                  sw.w1 * sources[m].coeffs;
    out.push_back(std::move(next));
  }
  return out;
}

/// Same integral with g interpolated quadratically over step pairs
/// (exponential Simpson). Returns values at the even nodes only; the step
/// count must be even. Used as the independent reference quadrature when
/// measuring mild-solution residuals.
template <typename Scalar>
std::vector<SpectralFieldT<Scalar>> duhamel_simpson(
    const std::vector<SpectralFieldT<Scalar>>& sources, Scalar dt) {
  if (sources.size() < 3 || sources.size() % 2 == 0)
    throw std::invalid_argument("duhamel_simpson: need an even number of uniform steps");
  const auto& grid = sources.front().grid;
  const Scalar span = 2 * dt;
  const auto n = grid.total();
  Eigen::Array<Scalar, Eigen::Dynamic, 1> decay(n), c0(n), c1(n), c2(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const double Z = double(grid.k_squared(i) * span);
    const double m0 = expq::phi1(Z), m1 = expq::phi2(Z), m2 = expq::mu2(Z);
    decay[i] = Scalar(std::exp(-Z));
    c0[i] = span * Scalar(2 * m2 - 3 * m1 + m0);
    c1[i] = span * Scalar(4 * (m1 - m2));
    c2[i] = span * Scalar(2 * m2 - m1);
  }
  std::vector<SpectralFieldT<Scalar>> out;
  out.reserve(sources.size() / 2 + 1);
  out.emplace_back(grid);
  for (std::size_t m = 2; m < sources.size(); m += 2) {
    SpectralFieldT<Scalar> next(grid);
    next.coeffs = decay * out.back().coeffs + c0 * sources[m - 2].coeffs +
                  c1 * sources[m - 1].coeffs + c2 * sources[m].coeffs;
    out.push_back(std::move(next));
  }
  return out;
}

}  // namespace besovdh
