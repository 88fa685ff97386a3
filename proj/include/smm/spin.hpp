#pragma once

// Spin operators, fourth-order Stevens operators and the single-spin
// Hamiltonian
//
//   H/k_B = D Sz^2 + E (Sx^2 - Sy^2) + g (bx Sx + by Sy + bz Sz)
//           + B40 O40 + B42 O42 + B43 O43 + B44 O44
//
// All energies are in kelvin (energy / k_B) and all fields are mu_B B / k_B in
// kelvin. The basis is |S M> ordered by M descending, so row 0 is M = +S.

#include <cmath>
#include <string>

#include "smm/error.hpp"
#include "smm/matrix.hpp"

namespace smm {

/// mu_B / k_B in K/T (CODATA 2018: 9.2740100783e-24 J/T / 1.380649e-23 J/K).
inline constexpr double kBohrOverBoltzmann = 0.67171381563;

inline constexpr double kDefaultLandeG = 2.0;

/// A single large spin S, encoded as the integer 2S so that half-integer
/// spins are exact.
class SpinSystem {
public:
  explicit SpinSystem(int two_s) : two_s_(two_s) {
    if (two_s < 1) throw InvalidInput("SpinSystem: two_s must be >= 1, got " + std::to_string(two_s));
  }

  static SpinSystem from_spin(double s) {
    const double twice = 2.0 * s;
    if (std::abs(twice - std::round(twice)) > 1e-12)
      throw InvalidInput("SpinSystem: spin must be a multiple of 1/2");
    return SpinSystem(static_cast<int>(std::round(twice)));
  }

  int two_s() const { return two_s_; }
  int dim() const { return two_s_ + 1; }
  double s() const { return 0.5 * two_s_; }
  /// S(S+1)
  double casimir() const { return s() * (s() + 1.0); }
  /// Magnetic quantum number of basis index i.
  double m(int i) const { return s() - i; }

  friend bool operator==(const SpinSystem&, const SpinSystem&) = default;

private:
  int two_s_;
};

struct AnisotropyParams {
  double d = 0.0;
  double e = 0.0;
  double b40 = 0.0;
  double b42 = 0.0;
  double b43 = 0.0;
  double b44 = 0.0;

  bool finite() const {
    return std::isfinite(d) && std::isfinite(e) && std::isfinite(b40) && std::isfinite(b42) &&
           std::isfinite(b43) && std::isfinite(b44);
  }

  friend AnisotropyParams operator+(const AnisotropyParams& a, const AnisotropyParams& b) {
    return {a.d + b.d, a.e + b.e, a.b40 + b.b40, a.b42 + b.b42, a.b43 + b.b43, a.b44 + b.b44};
  }
  friend bool operator==(const AnisotropyParams&, const AnisotropyParams&) = default;
};

struct FieldVector {
  double bx = 0.0;
  double by = 0.0;
  double bz = 0.0;

  bool finite() const { return std::isfinite(bx) && std::isfinite(by) && std::isfinite(bz); }
  friend bool operator==(const FieldVector&, const FieldVector&) = default;
};

struct SpinMatrices {
  CMatrix sx, sy, sz;
  CMatrix s_plus, s_minus;
};

inline SpinMatrices spin_matrices(const SpinSystem& sys) {
  const auto n = static_cast<std::size_t>(sys.dim());
  const double x = sys.casimir();
  SpinMatrices out;
  out.sz = CMatrix(n, n);
  out.s_plus = CMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double m = sys.m(static_cast<int>(i));
    out.sz(i, i) = m;
    // S+ |M> = sqrt(S(S+1) - M(M+1)) |M+1>, and M+1 sits one row up.
    if (i > 0) out.s_plus(i - 1, i) = std::sqrt(x - m * (m + 1.0));
  }
  out.s_minus = out.s_plus.adjoint();
  out.sx = (out.s_plus + out.s_minus) * 0.5;
  out.sy = (out.s_plus - out.s_minus) * cplx(0.0, -0.5);
  return out;
}

namespace detail {

inline CMatrix power(const CMatrix& a, int k) {
  CMatrix r = CMatrix::identity(a.rows());
  for (int i = 0; i < k; ++i) r = r * a;
  return r;
}

}  // namespace detail

/// Stevens operator O4^k for k in {0, 2, 3, 4}, built from the symmetrized
/// ladder-operator expressions.
inline HermitianOperator stevens_o4(const SpinSystem& sys, int k) {
  const auto sm = spin_matrices(sys);
  const auto n = static_cast<std::size_t>(sys.dim());
  const double x = sys.casimir();
  const CMatrix id = CMatrix::identity(n);
  const CMatrix sz2 = sm.sz * sm.sz;

  switch (k) {
    case 0: {
      CMatrix o = 35.0 * (sz2 * sz2) + (25.0 - 30.0 * x) * sz2 + (3.0 * x * x - 6.0 * x) * id;
      return HermitianOperator(std::move(o));
    }
    case 2: {
      const CMatrix a = 7.0 * sz2 - (x + 5.0) * id;
      const CMatrix p = detail::power(sm.s_plus, 2) + detail::power(sm.s_minus, 2);
      return HermitianOperator((a * p + p * a) * 0.25);
    }
    case 3: {
      const CMatrix p = detail::power(sm.s_plus, 3) + detail::power(sm.s_minus, 3);
      return HermitianOperator((sm.sz * p + p * sm.sz) * 0.25);
    }
    case 4: {
      const CMatrix p = detail::power(sm.s_plus, 4) + detail::power(sm.s_minus, 4);
      return HermitianOperator(p * 0.5);
    }
    default:
      throw InvalidInput("stevens_o4: k must be one of 0, 2, 3, 4; got " + std::to_string(k));
  }
}

inline HermitianOperator build_hamiltonian(const SpinSystem& sys, const AnisotropyParams& a,
                                           const FieldVector& f, double g = kDefaultLandeG) {
  if (!a.finite()) throw InvalidInput("build_hamiltonian: anisotropy parameters must be finite");
  if (!f.finite()) throw InvalidInput("build_hamiltonian: field components must be finite");
  const auto sm = spin_matrices(sys);
  CMatrix h = a.d * (sm.sz * sm.sz) + a.e * (sm.sx * sm.sx - sm.sy * sm.sy) +
              g * (f.bx * sm.sx + f.by * sm.sy + f.bz * sm.sz);
  if (a.b40 != 0.0) h += a.b40 * stevens_o4(sys, 0).matrix();
  if (a.b42 != 0.0) h += a.b42 * stevens_o4(sys, 2).matrix();
  if (a.b43 != 0.0) h += a.b43 * stevens_o4(sys, 3).matrix();
  if (a.b44 != 0.0) h += a.b44 * stevens_o4(sys, 4).matrix();
  // Products above leave rounding-level asymmetry; symmetrize so the tag holds exactly.
  CMatrix sym = (h + h.adjoint()) * 0.5;
  return HermitianOperator(std::move(sym));
}

}  // namespace smm
