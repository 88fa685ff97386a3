#pragma once

// Semiclassical (coherent-state) potentials of the spin Hamiltonian.
//
// With the field in the xz-plane the potential on the great circle phi = 0, pi
// reduces to a degree-4 trigonometric polynomial in theta,
//
//   V(theta) = A r3 cos2t + gS(-r2 cos t +/- r1 sin t)
//              + C (r4 cos4t -/+ r5 (2 sin2t - sin4t)) + offset,
//
// A = S(2S-1)/4, C = S(2S-1)(2S-2)(2S-3)/64, upper signs for phi = 0. All the
// critical-point machinery runs on this form with hand-coded derivatives.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

#include "smm/error.hpp"
#include "smm/matrix.hpp"
#include "smm/spin.hpp"

namespace smm {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class Branch : int { Plus = 1, Minus = -1 };

inline double sign_of(Branch b) { return static_cast<int>(b); }

/// Coefficients of the reduced potential; r1 = bx, r2 = bz in kelvin.
struct ReducedParams {
  double r1 = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;
  double r4 = 0.0;
  double r5 = 0.0;
  SpinSystem spin{2};
  /// theta-independent constant carried so potential values keep their absolute scale.
  double offset = 0.0;
  double g = kDefaultLandeG;

  /// Direct r-parameter input; no anisotropy source, so the offset is zero.
  static ReducedParams direct(const SpinSystem& s, double r1, double r2, double r3, double r4,
                              double r5, double g = kDefaultLandeG) {
    return ReducedParams{r1, r2, r3, r4, r5, s, 0.0, g};
  }

  /// Tolerance scale used by critical-point and separatrix criteria.
  double scale() const {
    const double sum = std::abs(r1) + std::abs(r2) + std::abs(r3) + std::abs(r4) + std::abs(r5);
    return std::max(1.0, sum) * spin.s() * spin.s();
  }
};

namespace detail {

// S(2S-1)(2S-2)(2S-3), the common prefactor of all fourth-order terms.
inline double fourth_order_prefactor(const SpinSystem& s) {
  const double t = s.two_s();
  return s.s() * (t - 1.0) * (t - 2.0) * (t - 3.0);
}

}  // namespace detail

inline ReducedParams reduce_params(const SpinSystem& sys, const AnisotropyParams& a,
                                   const FieldVector& f, double g = kDefaultLandeG) {
  if (f.by != 0.0)
    throw InvalidInput("reduce_params: the reduction needs the field in the xz-plane (by must be 0)");
  if (!a.finite() || !f.finite()) throw InvalidInput("reduce_params: inputs must be finite");
  const double s = sys.s();
  const double t = sys.two_s();
  const double c4 = detail::fourth_order_prefactor(sys) / 64.0;

  ReducedParams rp;
  rp.spin = sys;
  rp.g = g;
  rp.r1 = f.bx;
  rp.r2 = f.bz;
  rp.r3 = a.d - a.e + (t - 2.0) * (t - 3.0) * (20.0 * a.b40 + 4.0 * a.b42 - 4.0 * a.b44) / 16.0;
  rp.r4 = 35.0 * a.b40 - 7.0 * a.b42 + a.b44;
  rp.r5 = a.b43;
  rp.offset = a.d * s * (t + 1.0) / 4.0 + a.e * s * (t - 1.0) / 4.0 +
              c4 * (9.0 * a.b40 + 3.0 * a.b42 + 3.0 * a.b44);
  return rp;
}

/// Coherent-state potential on the full sphere (any field direction).
inline double potential_angular(double theta, double phi, const SpinSystem& sys,
                                const AnisotropyParams& a, const FieldVector& f,
                                double g = kDefaultLandeG) {
  const double s = sys.s();
  const double t = sys.two_s();
  const double st = std::sin(theta);
  const double ct = std::cos(theta);
  const double st2 = st * st;
  const double q = detail::fourth_order_prefactor(sys) / 8.0;

  double v = a.d / 4.0 * s * (t - 1.0) * std::cos(2.0 * theta) +
             a.e / 2.0 * s * (t - 1.0) * std::cos(2.0 * phi) * st2;
  v += g * s * (-f.bz * ct + f.bx * std::cos(phi) * st + f.by * std::sin(phi) * st);
  v += a.d / 4.0 * s * (t + 1.0);
  v += q * (a.b40 / 8.0 * (35.0 * std::cos(4.0 * theta) + 20.0 * std::cos(2.0 * theta) + 9.0) +
            a.b42 / 2.0 * (7.0 * std::cos(2.0 * theta) + 5.0) * std::cos(2.0 * phi) * st2 -
            a.b43 * std::cos(3.0 * phi) * ct * st2 * st +
            a.b44 * std::cos(4.0 * phi) * st2 * st2);
  return v;
}

/// Same potential in the projected coordinates x = sin t cos p, y = sin t sin p.
/// `z_sign` picks the hemisphere: cos(theta) = z_sign * sqrt(1 - x^2 - y^2).
/// The B_z and B4^3 terms both carry -z_sign, matching potential_angular.
inline double potential_cartesian(double x, double y, int z_sign, const SpinSystem& sys,
                                  const AnisotropyParams& a, const FieldVector& f,
                                  double g = kDefaultLandeG) {
  if (z_sign != 1 && z_sign != -1) throw InvalidInput("potential_cartesian: z_sign must be +1 or -1");
  const double rho2 = x * x + y * y;
  if (rho2 > 1.0) throw InvalidInput("potential_cartesian: x^2 + y^2 must not exceed 1");
  const double s = sys.s();
  const double t = sys.two_s();
  const double w = std::sqrt(1.0 - rho2);
  const double zs = static_cast<double>(z_sign);
  const double x2 = x * x;
  const double y2 = y * y;
  const double q = detail::fourth_order_prefactor(sys) / 8.0;

  double v = -a.d / 2.0 * s * (t - 1.0) * rho2 + a.e / 2.0 * s * (t - 1.0) * (x2 - y2);
  v += g * s * (-zs * f.bz * w + f.bx * x + f.by * y);
  v += q * (a.b40 * (35.0 * (x2 * x2 + y2 * y2) - 40.0 * rho2 + 70.0 * x2 * y2 + 8.0) -
            a.b42 * (x2 - y2) * (7.0 * rho2 - 6.0) - zs * a.b43 * x * (x2 - 3.0 * y2) * w +
            a.b44 * (x2 * x2 + y2 * y2 - 6.0 * x2 * y2));
  v += a.d * s * s;
  return v;
}

/// a1 cos t + b1 sin t + a2 cos 2t + b2 sin 2t + a4 cos 4t + b4 sin 4t
struct TrigPoly {
  static constexpr std::array<double, 3> kFreq{1.0, 2.0, 4.0};
  // (cos, sin) pairs for frequencies 1, 2, 4.
  std::array<double, 6> c{};

  double operator()(double theta) const {
    double v = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      const double a = kFreq[k] * theta;
      v += c[2 * k] * std::cos(a) + c[2 * k + 1] * std::sin(a);
    }
    return v;
  }

  /// Evaluate from precomputed (cos t, sin t, cos 2t, sin 2t, cos 4t, sin 4t).
  double dot(const std::array<double, 6>& basis) const {
    double v = 0.0;
    for (std::size_t k = 0; k < 6; ++k) v += c[k] * basis[k];
    return v;
  }

  TrigPoly derivative() const {
    TrigPoly d;
    for (std::size_t k = 0; k < 3; ++k) {
      d.c[2 * k] = kFreq[k] * c[2 * k + 1];
      d.c[2 * k + 1] = -kFreq[k] * c[2 * k];
    }
    return d;
  }

  double abs_sum() const {
    double s = 0.0;
    for (double x : c) s += std::abs(x);
    return s;
  }

  friend TrigPoly operator-(const TrigPoly& a, const TrigPoly& b) {
    TrigPoly d;
    for (std::size_t k = 0; k < 6; ++k) d.c[k] = a.c[k] - b.c[k];
    return d;
  }
  friend TrigPoly operator+(const TrigPoly& a, const TrigPoly& b) {
    TrigPoly d;
    for (std::size_t k = 0; k < 6; ++k) d.c[k] = a.c[k] + b.c[k];
    return d;
  }
  friend TrigPoly operator*(double s, const TrigPoly& a) {
    TrigPoly d;
    for (std::size_t k = 0; k < 6; ++k) d.c[k] = s * a.c[k];
    return d;
  }
};

/// theta-dependent part of the reduced potential (no offset).
inline TrigPoly reduced_poly(const ReducedParams& rp, Branch br) {
  const double s = rp.spin.s();
  const double b = sign_of(br);
  const double a = s * (rp.spin.two_s() - 1.0) / 4.0;
  const double gs = rp.g * s;
  const double c4 = detail::fourth_order_prefactor(rp.spin) / 64.0;
  TrigPoly p;
  p.c = {-gs * rp.r2, gs * b * rp.r1, a * rp.r3, -2.0 * c4 * b * rp.r5, c4 * rp.r4, c4 * b * rp.r5};
  return p;
}

inline double potential_reduced(double theta, const ReducedParams& rp, Branch br) {
  return reduced_poly(rp, br)(theta) + rp.offset;
}

/// order-th theta derivative of the reduced potential (order >= 1).
inline double potential_reduced_derivative(double theta, const ReducedParams& rp, Branch br,
                                           int order) {
  if (order < 0) throw InvalidInput("potential_reduced_derivative: order must be >= 0");
  if (order == 0) return potential_reduced(theta, rp, br);
  TrigPoly p = reduced_poly(rp, br);
  for (int k = 0; k < order; ++k) p = p.derivative();
  return p(theta);
}

// ---------------------------------------------------------------------------
// Coherent-state oracle

/// Normalized spin coherent state with polar angle theta and azimuth phi, in
/// the M-descending basis. theta = 0 is |S,-S>. The half-angle form
/// cos(t/2)^(2S-k) sin(t/2)^k stays regular at theta = pi, where it reduces
/// to |S,+S>.
inline CVector coherent_state(const SpinSystem& sys, double theta, double phi) {
  const int n = sys.two_s();
  const double ch = std::cos(0.5 * theta);
  const double sh = std::sin(0.5 * theta);
  CVector v(static_cast<std::size_t>(n + 1));
  double binom = 1.0;  // C(2S, k)
  for (int k = 0; k <= n; ++k) {
    if (k > 0) binom = binom * (n - k + 1) / k;
    const double mag = std::sqrt(binom) * std::pow(ch, n - k) * std::pow(sh, k);
    // |S, -S + k> sits at index 2S - k.
    v[static_cast<std::size_t>(n - k)] = std::polar(mag, -k * phi);
  }
  return v;
}

/// <theta,phi| H |theta,phi> with H from build_hamiltonian.
inline double coherent_expectation(double theta, double phi, const SpinSystem& sys,
                                   const AnisotropyParams& a, const FieldVector& f,
                                   double g = kDefaultLandeG) {
  const auto h = build_hamiltonian(sys, a, f, g);
  const auto v = coherent_state(sys, theta, phi);
  return std::real(inner(v, h.matrix() * v));
}

// ---------------------------------------------------------------------------
// Critical points of the reduced potential

enum class CriticalKind { Minimum, Maximum, Inflection };

inline std::string_view to_string(CriticalKind k) {
  switch (k) {
    case CriticalKind::Minimum: return "minimum";
    case CriticalKind::Maximum: return "maximum";
    case CriticalKind::Inflection: return "inflection";
  }
  return "?";
}

struct CriticalPoint {
  double theta = 0.0;  // [0, 2pi)
  double value = 0.0;
  CriticalKind kind = CriticalKind::Inflection;
  double second_derivative = 0.0;
};

struct CriticalPointScan {
  std::vector<CriticalPoint> points;  // sorted by theta
  /// V is constant: no critical point is reported.
  bool flat = false;
};

struct ScanOptions {
  int samples = 2048;
  double root_tolerance = 1e-12;        // |V'| target, relative to scale
  double degeneracy_tolerance = 1e-9;   // |V''| below this (relative) -> inflection
  double touch_tolerance = 1e-10;       // |V'| at a V'' root accepted as critical (relative)
  double merge_radius = 1e-8;           // radians
  int newton_iterations = 60;
};

namespace detail {

using TrigBasis = std::array<double, 6>;

inline TrigBasis trig_basis(double theta) {
  return {std::cos(theta),       std::sin(theta),       std::cos(2.0 * theta),
          std::sin(2.0 * theta), std::cos(4.0 * theta), std::sin(4.0 * theta)};
}

inline std::vector<TrigBasis> make_sample_table(int n) {
  std::vector<TrigBasis> t(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) t[static_cast<std::size_t>(j)] = trig_basis(kTwoPi * j / n);
  return t;
}

inline const std::vector<TrigBasis>& sample_table(int n) {
  static const std::vector<TrigBasis> default_table = make_sample_table(2048);
  if (n == 2048) return default_table;
  thread_local std::vector<TrigBasis> other;
  thread_local int other_n = 0;
  if (other_n != n) {
    other = make_sample_table(n);
    other_n = n;
  }
  return other;
}

// Root of f on [lo, hi] where f(lo), f(hi) have opposite signs. Newton with a
// bisection safeguard, then pure bisection if Newton stalls.
inline double bracketed_root(const TrigPoly& f, const TrigPoly& fp, double lo, double hi, double ftol,
                             int newton_iterations) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < newton_iterations; ++it) {
    const double fx = f(x);
    if (std::abs(fx) <= ftol) return x;
    if ((fx < 0.0) == (flo < 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    const double dfx = fp(x);
    double next = (dfx != 0.0) ? x - fx / dfx : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x) return x;
    x = next;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (std::abs(fx) <= ftol) return x;
    if ((fx < 0.0) == (flo < 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
  }
  return 0.5 * (lo + hi);
}

inline double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

inline double circular_distance(double a, double b) {
  const double d = std::abs(wrap_angle(a) - wrap_angle(b));
  return std::min(d, kTwoPi - d);
}

// Critical points of v on the full circle.
inline CriticalPointScan scan_poly(const TrigPoly& v, double offset, double scale,
                                   const ScanOptions& opt) {
  const TrigPoly d1 = v.derivative();
  const TrigPoly d2 = d1.derivative();
  const TrigPoly d3 = d2.derivative();
  CriticalPointScan out;
  if (d1.abs_sum() <= 1e-13 * scale) {
    out.flat = true;
    return out;
  }
  const int n = opt.samples;
  const auto& table = sample_table(n);
  const double ftol1 = opt.root_tolerance * scale;
  const double ftol2 = opt.root_tolerance * scale;
  const double touch = opt.touch_tolerance * scale;
  const double h = kTwoPi / n;

  std::vector<double> roots;
  std::vector<double> touches;
  double f_left = d1.dot(table[0]);
  double g_left = d2.dot(table[0]);
  for (int j = 0; j < n; ++j) {
    const double a = h * j;
    const double b = (j + 1 == n) ? kTwoPi : h * (j + 1);
    const double f_right = d1.dot(table[static_cast<std::size_t>(j + 1)]);
    const double g_right = d2.dot(table[static_cast<std::size_t>(j + 1)]);

    // Split at a V'' root so that a root pair of V' inside one cell is seen.
    std::array<double, 3> pts{a, b, b};
    std::array<double, 3> fv{f_left, f_right, f_right};
    int np = 2;
    if ((g_left < 0.0) != (g_right < 0.0) && g_left != 0.0 && g_right != 0.0) {
      const double xi = bracketed_root(d2, d3, a, b, ftol2 * 1e-3, opt.newton_iterations);
      const double fxi = d1(xi);
      pts = {a, xi, b};
      fv = {f_left, fxi, f_right};
      np = 3;
      const bool crosses = ((f_left < 0.0) != (fxi < 0.0)) || ((fxi < 0.0) != (f_right < 0.0));
      if (std::abs(fxi) <= touch && !crosses) touches.push_back(xi);
    }
    for (int k = 0; k + 1 < np; ++k) {
      if (fv[k] == 0.0) {
        roots.push_back(pts[k]);
        continue;
      }
      if ((fv[k] < 0.0) != (fv[k + 1] < 0.0) && fv[k + 1] != 0.0)
        roots.push_back(bracketed_root(d1, d2, pts[k], pts[k + 1], ftol1, opt.newton_iterations));
    }
    f_left = f_right;
    g_left = g_right;
  }

  struct Raw {
    double theta;
    double d2;
  };
  std::vector<Raw> raw;
  raw.reserve(roots.size() + touches.size());
  for (double r : roots) raw.push_back({wrap_angle(r), d2(r)});
  for (double r : touches) raw.push_back({wrap_angle(r), d2(r)});
  std::sort(raw.begin(), raw.end(), [](const Raw& x, const Raw& y) { return x.theta < y.theta; });

  // Group points closer than merge_radius (circularly).
  std::vector<std::vector<Raw>> groups;
  for (const auto& r : raw) {
    if (!groups.empty() && circular_distance(groups.back().back().theta, r.theta) <= opt.merge_radius)
      groups.back().push_back(r);
    else
      groups.push_back({r});
  }
  if (groups.size() > 1 &&
      circular_distance(groups.back().back().theta, groups.front().front().theta) <= opt.merge_radius) {
    auto tail = std::move(groups.back());
    groups.pop_back();
    groups.front().insert(groups.front().begin(), tail.begin(), tail.end());
  }

  const double degen = opt.degeneracy_tolerance * scale;
  for (const auto& grp : groups) {
    bool has_pos = false, has_neg = false;
    double best_theta = grp.front().theta;
    double best_abs = INFINITY;
    for (const auto& r : grp) {
      if (r.d2 > degen) has_pos = true;
      if (r.d2 < -degen) has_neg = true;
      const double a1 = std::abs(d1(r.theta));
      if (a1 < best_abs) {
        best_abs = a1;
        best_theta = r.theta;
      }
    }
    CriticalPoint cp;
    cp.theta = best_theta;
    cp.value = v(best_theta) + offset;
    cp.second_derivative = d2(best_theta);
    if (has_pos && has_neg)
      cp.kind = CriticalKind::Inflection;  // a min/max pair closer than the merge radius
    else if (cp.second_derivative > degen)
      cp.kind = CriticalKind::Minimum;
    else if (cp.second_derivative < -degen)
      cp.kind = CriticalKind::Maximum;
    else
      cp.kind = CriticalKind::Inflection;
    out.points.push_back(cp);
  }
  std::sort(out.points.begin(), out.points.end(),
            [](const CriticalPoint& x, const CriticalPoint& y) { return x.theta < y.theta; });
  return out;
}

}  // namespace detail

/// Critical points of one branch over theta in [0, 2pi).
inline CriticalPointScan critical_points(const ReducedParams& rp, Branch br,
                                         const ScanOptions& opt = {}) {
  return detail::scan_poly(reduced_poly(rp, br), rp.offset, rp.scale(), opt);
}

/// Physical polar angle in [0, pi] of a full-circle angle of the + branch.
inline double polar_angle(double theta) {
  const double t = detail::wrap_angle(theta);
  return t <= std::numbers::pi ? t : kTwoPi - t;
}

/// Branch (phi = 0 or pi) a full-circle angle of the + branch lives on.
inline Branch branch_of(double theta) {
  return detail::wrap_angle(theta) <= std::numbers::pi ? Branch::Plus : Branch::Minus;
}

struct LandscapeReport {
  /// Critical points over both branches. theta uses the + branch full-circle
  /// convention: theta in (pi, 2pi) is the - branch at polar angle 2pi - theta.
  std::vector<CriticalPoint> points;
  std::optional<CriticalPoint> global_minimum;
  /// Indices into `points` of every minimum tied with the global one (itself included).
  std::vector<std::size_t> global_ties;
  int n_minima = 0;
  int n_maxima = 0;
  int n_inflections = 0;
  bool flat = false;
  double scale = 1.0;

  bool tied_global_minimum() const { return global_ties.size() > 1; }

  std::vector<CriticalPoint> minima() const { return of_kind(CriticalKind::Minimum); }
  std::vector<CriticalPoint> maxima() const { return of_kind(CriticalKind::Maximum); }

  std::vector<CriticalPoint> of_kind(CriticalKind k) const {
    std::vector<CriticalPoint> r;
    for (const auto& p : points)
      if (p.kind == k) r.push_back(p);
    return r;
  }
};

/// Merged critical-point landscape of both branches.
inline LandscapeReport landscape(const ReducedParams& rp, const ScanOptions& opt = {}) {
  LandscapeReport rep;
  rep.scale = rp.scale();
  auto scan = critical_points(rp, Branch::Plus, opt);
  rep.flat = scan.flat;
  rep.points = std::move(scan.points);
  for (std::size_t i = 0; i < rep.points.size(); ++i) {
    const auto& p = rep.points[i];
    switch (p.kind) {
      case CriticalKind::Minimum:
        ++rep.n_minima;
        if (!rep.global_minimum || p.value < rep.global_minimum->value) rep.global_minimum = p;
        break;
      case CriticalKind::Maximum: ++rep.n_maxima; break;
      case CriticalKind::Inflection: ++rep.n_inflections; break;
    }
  }
  if (rep.global_minimum) {
    const double tol = 1e-10 * rep.scale;
    for (std::size_t i = 0; i < rep.points.size(); ++i)
      if (rep.points[i].kind == CriticalKind::Minimum &&
          rep.points[i].value - rep.global_minimum->value <= tol)
        rep.global_ties.push_back(i);
  }
  return rep;
}

}  // namespace smm
