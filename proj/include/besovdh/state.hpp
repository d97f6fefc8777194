#pragma once

#include "besovdh/field.hpp"

namespace besovdh {

/// The pair (v, w) of electron / hole density deviations. The electric
/// potential is always derived from it, never stored.
template <typename Scalar>
struct StatePairT {
  SpectralFieldT<Scalar> v, w;

  StatePairT() = default;
  explicit StatePairT(const GridT<Scalar>& g) : v(g), w(g) {}
  StatePairT(SpectralFieldT<Scalar> v_, SpectralFieldT<Scalar> w_)
      : v(std::move(v_)), w(std::move(w_)) {
    v.require_same_grid(w);
  }

  const GridT<Scalar>& grid() const { return v.grid; }

  StatePairT& operator+=(const StatePairT& o) {
    v += o.v;
    w += o.w;
    return *this;
  }
  StatePairT& operator-=(const StatePairT& o) {
    v -= o.v;
    w -= o.w;
    return *this;
  }
  StatePairT& operator*=(Scalar a) {
    v *= a;
    w *= a;
    return *this;
  }
};

template <typename Scalar>
StatePairT<Scalar> operator+(StatePairT<Scalar> a, const StatePairT<Scalar>& b) {
  a += b;
  return a;
}
template <typename Scalar>
StatePairT<Scalar> operator-(StatePairT<Scalar> a, const StatePairT<Scalar>& b) {
  a -= b;
  return a;
}
template <typename Scalar>
StatePairT<Scalar> operator*(Scalar a, StatePairT<Scalar> s) {
  s *= a;
  return s;
}

using StatePair = StatePairT<double>;

/// Total-charge bookkeeping removed by the neutrality projection.
struct ChargeReport {
  double mean_v = 0;
  double mean_w = 0;
  double shared_mean = 0;  // value both zero modes carry after projection
};

template <typename Scalar>
Scalar neutrality_defect(const StatePairT<Scalar>& s) {
  return std::abs(s.v.mean() - s.w.mean());
}

template <typename Scalar>
bool is_neutral(const StatePairT<Scalar>& s, Scalar tol = Scalar(1e-12)) {
  const Scalar scale = std::max(Scalar(1), std::max(std::abs(s.v.mean()), std::abs(s.w.mean())));
  return neutrality_defect(s) <= tol * scale;
}

/// Replace both zero modes by their average so that mean(w - v) = 0 and the
/// torus Poisson solve is well-posed. The displaced total charge is reported,
/// not destroyed.
template <typename Scalar>
StatePairT<Scalar> project_neutral(StatePairT<Scalar> s, ChargeReport* report = nullptr) {
  const auto mv = s.v.mean();
  const auto mw = s.w.mean();
  const auto shared = (mv + mw) / Scalar(2);
  if (report) {
    report->mean_v = double(mv.real());
    report->mean_w = double(mw.real());
    report->shared_mean = double(shared.real());
  }
  s.v.coeffs[0] = shared;
  s.w.coeffs[0] = shared;
  return s;
}

}  // namespace besovdh
