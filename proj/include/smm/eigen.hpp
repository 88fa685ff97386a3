#pragma once

// Full-spectrum Hermitian eigensolver: cyclic complex Jacobi rotations.
//
// Dimensions here are at most a few dozen, so an O(n^3)-per-sweep method with
// a fixed sweep order is cheap and bitwise reproducible.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "smm/error.hpp"
#include "smm/matrix.hpp"

namespace smm {

struct Spectrum {
  std::vector<double> eigenvalues;  // ascending, kelvin
  CMatrix eigenvectors;             // column j belongs to eigenvalues[j]

  std::size_t dim() const { return eigenvalues.size(); }
  CVector vector(std::size_t j) const { return eigenvectors.column(j); }
};

struct JacobiOptions {
  int max_sweeps = 100;
  /// Converged once ||offdiag||_F <= rel_tolerance * ||H||_F.
  double rel_tolerance = 1e-14;
  /// Accepted Hermiticity defect, relative to 1 + max|H_ij|.
  double hermitian_tolerance = 1e-12;
};

namespace detail {

inline double offdiag_norm(const CMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Make the largest-magnitude component real and positive; first index wins ties.
inline void fix_phase(CMatrix& v, std::size_t col) {
  std::size_t best = 0;
  double best_mag = -1.0;
  for (std::size_t i = 0; i < v.rows(); ++i) {
    const double mag = std::abs(v(i, col));
    if (mag > best_mag) {
      best_mag = mag;
      best = i;
    }
  }
  if (best_mag <= 0.0) return;
  const cplx phase = std::conj(v(best, col)) / best_mag;
  for (std::size_t i = 0; i < v.rows(); ++i) v(i, col) *= phase;
  v(best, col) = best_mag;
}

}  // namespace detail

inline Spectrum eigh(const CMatrix& h, const JacobiOptions& opt = {}) {
  if (!h.square()) throw InvalidInput("eigh: matrix is not square");
  const std::size_t n = h.rows();
  const double scale = h.max_abs();
  if (h.hermiticity_defect() > opt.hermitian_tolerance * (1.0 + scale))
    throw InvalidInput("eigh: matrix is not Hermitian within tolerance");

  CMatrix a = (h + h.adjoint()) * 0.5;
  CMatrix v = CMatrix::identity(n);
  const double target = opt.rel_tolerance * a.frobenius_norm();

  bool converged = detail::offdiag_norm(a) <= target;
  for (int sweep = 0; sweep < opt.max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const cplx e = apq / mag;
        const double app = std::real(a(p, p));
        const double aqq = std::real(a(q, q));
        // Unitary G with G_pp = G_qq = c, G_pq = s e, G_qp = -s conj(e) zeroes (G^H A G)_pq.
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx se = s * e;
        const cplx sec = s * std::conj(e);

        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = c * akp - sec * akq;
          a(k, q) = se * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = c * apk - se * aqk;
          a(q, k) = sec * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = std::real(a(p, p));
        a(q, q) = std::real(a(q, q));
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = c * vkp - sec * vkq;
          v(k, q) = se * vkp + c * vkq;
        }
      }
    }
    converged = detail::offdiag_norm(a) <= target;
  }
  if (!converged)
    throw ConvergenceError("eigh: Jacobi iteration did not converge within " +
                           std::to_string(opt.max_sweeps) + " sweeps for dimension " +
                           std::to_string(n));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::real(a(i, i)) < std::real(a(j, j));
  });

  Spectrum out;
  out.eigenvalues.resize(n);
  out.eigenvectors = CMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = std::real(a(order[j], order[j]));
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
    detail::fix_phase(out.eigenvectors, j);
  }
  return out;
}

inline Spectrum eigh(const HermitianOperator& h, const JacobiOptions& opt = {}) {
  return eigh(h.matrix(), opt);
}

struct GroundState {
  double energy;
  CVector vector;
  double gap;  // lambda_1 - lambda_0
};

inline GroundState ground_state(const Spectrum& spec) {
  if (spec.dim() < 2) throw InvalidInput("ground_state: spectrum must have at least two levels");
  return {spec.eigenvalues[0], spec.vector(0), spec.eigenvalues[1] - spec.eigenvalues[0]};
}

}  // namespace smm
