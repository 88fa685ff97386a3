#pragma once

// Quantum-side observables: ground-state fidelity and canonical
// thermodynamics, pointwise and over (bz, bx) field grids.

#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "smm/eigen.hpp"
#include "smm/error.hpp"
#include "smm/parallel.hpp"
#include "smm/spin.hpp"

namespace smm {

enum class FieldAxis { X, Y, Z };

inline FieldAxis parse_field_axis(std::string_view s) {
  if (s == "bx" || s == "x") return FieldAxis::X;
  if (s == "by" || s == "y") return FieldAxis::Y;
  if (s == "bz" || s == "z") return FieldAxis::Z;
  throw InvalidInput("unknown field axis '" + std::string(s) + "' (expected bx, by or bz)");
}

inline std::string_view field_axis_name(FieldAxis a) {
  switch (a) {
    case FieldAxis::X: return "bx";
    case FieldAxis::Y: return "by";
    case FieldAxis::Z: return "bz";
  }
  return "?";
}

inline FieldVector shifted(FieldVector f, FieldAxis axis, double delta) {
  switch (axis) {
    case FieldAxis::X: f.bx += delta; break;
    case FieldAxis::Y: f.by += delta; break;
    case FieldAxis::Z: f.bz += delta; break;
  }
  return f;
}

/// |<psi0(lambda - d)|psi0(lambda + d)>|^2 with lambda the `axis` component of `center`.
inline double fidelity(const SpinSystem& sys, const AnisotropyParams& a, const FieldVector& center,
                       FieldAxis axis, double d, double g = kDefaultLandeG) {
  if (!(d > 0.0)) throw InvalidInput("fidelity: increment d must be > 0");
  const auto lo = eigh(build_hamiltonian(sys, a, shifted(center, axis, -d), g));
  const auto hi = eigh(build_hamiltonian(sys, a, shifted(center, axis, +d), g));
  return std::norm(inner(lo.vector(0), hi.vector(0)));
}

/// Rectangular (bz, bx) grid at fixed by; both ends of each range are sampled.
struct FieldPlane {
  double bz_lo = -1.0, bz_hi = 1.0;
  double bx_lo = -1.0, bx_hi = 1.0;
  int n_bz = 200;
  int n_bx = 200;
  double by = 0.0;

  void validate() const {
    if (!(bz_lo < bz_hi) || !(bx_lo < bx_hi)) throw InvalidInput("FieldPlane: every range needs lo < hi");
    if (n_bz < 2 || n_bx < 2) throw InvalidInput("FieldPlane: resolution must be at least 2 per axis");
  }
  double bz(int i) const { return bz_lo + (bz_hi - bz_lo) * i / (n_bz - 1); }
  double bx(int j) const { return bx_lo + (bx_hi - bx_lo) * j / (n_bx - 1); }
  FieldVector at(int i, int j) const { return {bx(j), by, bz(i)}; }
};

/// Values on a FieldPlane; value(i, j) belongs to (bz(i), bx(j)).
struct FieldGrid {
  FieldPlane plane;
  std::vector<double> values;

  double value(int i, int j) const { return values[static_cast<std::size_t>(i) * plane.n_bx + j]; }
};

struct FidelityMap : FieldGrid {
  double d = 0.001;
  FieldAxis axis = FieldAxis::Z;
};

inline FidelityMap fidelity_map(const SpinSystem& sys, const AnisotropyParams& a, const FieldPlane& plane,
                                double d = 0.001, FieldAxis axis = FieldAxis::Z, unsigned threads = 0,
                                double g = kDefaultLandeG) {
  plane.validate();
  if (!(d > 0.0)) throw InvalidInput("fidelity_map: increment d must be > 0");
  FidelityMap out;
  out.plane = plane;
  out.d = d;
  out.axis = axis;
  out.values.resize(static_cast<std::size_t>(plane.n_bz) * plane.n_bx);
  parallel_for(
      out.values.size(),
      [&](std::size_t k) {
        const int i = static_cast<int>(k / plane.n_bx);
        const int j = static_cast<int>(k % plane.n_bx);
        out.values[k] = fidelity(sys, a, plane.at(i, j), axis, d, g);
      },
      threads);
  return out;
}

struct ThermoPoint {
  double t = 0.0;
  /// Partition function of the spectrum shifted by -shift (so the ground level has weight 1).
  double z = 0.0;
  double shift = 0.0;  // E0
  double f = 0.0;      // Helmholtz free energy, kelvin
  double u = 0.0;      // internal energy, kelvin
  double s = 0.0;      // entropy / k_B
  double c = 0.0;      // heat capacity / k_B
};

/// Canonical thermodynamics of a fixed spectrum (kelvin) at temperature t (kelvin).
inline ThermoPoint thermo(const std::vector<double>& eigenvalues, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidInput("thermo: temperature must be > 0");
  if (eigenvalues.empty()) throw InvalidInput("thermo: empty spectrum");
  double e0 = std::numeric_limits<double>::infinity();
  for (double e : eigenvalues) e0 = std::min(e0, e);

  double z = 0.0, m1 = 0.0;
  for (double e : eigenvalues) {
    const double x = e - e0;
    const double w = std::exp(-x / t);
    z += w;
    m1 += w * x;
  }
  m1 /= z;
  // Central second moment accumulated around the mean for accuracy.
  double var = 0.0;
  for (double e : eigenvalues) {
    const double x = e - e0;
    var += std::exp(-x / t) * (x - m1) * (x - m1);
  }
  var /= z;

  ThermoPoint p;
  p.t = t;
  p.z = z;
  p.shift = e0;
  p.f = e0 - t * std::log(z);
  p.u = e0 + m1;
  p.s = std::log(z) + m1 / t;
  p.c = var / (t * t);
  return p;
}

/// Heat capacity grids, one per temperature, sharing one diagonalization per point.
inline std::vector<FieldGrid> heatcap_maps(const SpinSystem& sys, const AnisotropyParams& a,
                                           const FieldPlane& plane, const std::vector<double>& temps,
                                           unsigned threads = 0, double g = kDefaultLandeG) {
  plane.validate();
  if (temps.empty()) throw InvalidInput("heatcap_map: need at least one temperature");
  for (double t : temps)
    if (!(t > 0.0)) throw InvalidInput("heatcap_map: temperatures must be > 0");
  const std::size_t n = static_cast<std::size_t>(plane.n_bz) * plane.n_bx;
  std::vector<FieldGrid> out(temps.size());
  for (auto& grid : out) {
    grid.plane = plane;
    grid.values.resize(n);
  }
  parallel_for(
      n,
      [&](std::size_t k) {
        const int i = static_cast<int>(k / plane.n_bx);
        const int j = static_cast<int>(k % plane.n_bx);
        const auto spec = eigh(build_hamiltonian(sys, a, plane.at(i, j), g));
        for (std::size_t q = 0; q < temps.size(); ++q) out[q].values[k] = thermo(spec.eigenvalues, temps[q]).c;
      },
      threads);
  return out;
}

inline FieldGrid heatcap_map(const SpinSystem& sys, const AnisotropyParams& a, const FieldPlane& plane,
                             double t, unsigned threads = 0, double g = kDefaultLandeG) {
  return std::move(heatcap_maps(sys, a, plane, {t}, threads, g).front());
}

}  // namespace smm
