#pragma once

// Bifurcation and Maxwell separatrices of the reduced potential, located by
// scanning a parameter grid and bisecting along every grid edge.
//
// Along an edge P -> Q the reduced parameters move linearly, rp(t) = P + t (Q - P):
//  - a change of (n_minima, n_maxima) marks a bifurcation; it is bisected and
//    then polished onto the fold V' = V'' = 0;
//  - a sign change of V(A) - V(B) for the two deepest minima A, B (tracked by
//    theta proximity) marks a Maxwell point; same for the two highest maxima.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smm/error.hpp"
#include "smm/parallel.hpp"
#include "smm/semiclassical.hpp"

namespace smm {

enum class Axis { R1, R2, R3, R4, R5 };

/// bx and bz (mu_B B / k_B in kelvin) are r1 and r2.
inline constexpr Axis kAxisBx = Axis::R1;
inline constexpr Axis kAxisBz = Axis::R2;

inline double& axis_ref(ReducedParams& rp, Axis a) {
  switch (a) {
    case Axis::R1: return rp.r1;
    case Axis::R2: return rp.r2;
    case Axis::R3: return rp.r3;
    case Axis::R4: return rp.r4;
    case Axis::R5: return rp.r5;
  }
  throw InvalidInput("unknown axis");
}

inline double axis_value(const ReducedParams& rp, Axis a) {
  return axis_ref(const_cast<ReducedParams&>(rp), a);
}

inline std::string_view axis_name(Axis a) {
  switch (a) {
    case Axis::R1: return "r1";
    case Axis::R2: return "r2";
    case Axis::R3: return "r3";
    case Axis::R4: return "r4";
    case Axis::R5: return "r5";
  }
  return "?";
}

/// Accepts r1..r5, bx (= r1) and bz (= r2).
inline Axis parse_axis(std::string_view s) {
  if (s == "r1" || s == "bx") return Axis::R1;
  if (s == "r2" || s == "bz") return Axis::R2;
  if (s == "r3") return Axis::R3;
  if (s == "r4") return Axis::R4;
  if (s == "r5") return Axis::R5;
  throw InvalidInput("unknown parameter axis '" + std::string(s) + "' (expected r1..r5, bx or bz)");
}

struct AxisRange {
  double lo = 0.0;
  double hi = 1.0;
  double width() const { return hi - lo; }
};

struct PlaneSpec {
  Axis axis1 = kAxisBz;
  Axis axis2 = Axis::R3;
  AxisRange range1;
  AxisRange range2;
  int resolution1 = 100;
  int resolution2 = 100;
  ReducedParams fixed;

  void validate() const {
    if (axis1 == axis2) throw InvalidInput("PlaneSpec: the two axes must differ");
    if (!(range1.lo < range1.hi) || !(range2.lo < range2.hi))
      throw InvalidInput("PlaneSpec: every range needs lo < hi");
    if (resolution1 < 16 || resolution2 < 16)
      throw InvalidInput("PlaneSpec: resolution must be at least 16 samples per axis");
  }

  double coord1(int i) const { return range1.lo + range1.width() * i / (resolution1 - 1); }
  double coord2(int j) const { return range2.lo + range2.width() * j / (resolution2 - 1); }

  ReducedParams at(double a1, double a2) const {
    ReducedParams rp = fixed;
    axis_ref(rp, axis1) = a1;
    axis_ref(rp, axis2) = a2;
    return rp;
  }
};

struct SeparatrixPoint {
  double a1 = 0.0;
  double a2 = 0.0;
  /// Full-circle angle of the critical feature (fold position, or the first tracked extremum).
  double theta = 0.0;
};

using Polyline = std::vector<std::array<double, 2>>;

struct SeparatrixSet {
  std::vector<SeparatrixPoint> bifurcation_points;
  std::vector<SeparatrixPoint> maxwell_minima_points;
  std::vector<SeparatrixPoint> maxwell_maxima_points;
  std::vector<Polyline> bifurcation;
  std::vector<Polyline> maxwell_minima;
  std::vector<Polyline> maxwell_maxima;
  /// Grid nodes (i, j) whose landscape is flat; their edges are skipped.
  std::vector<std::array<int, 2>> flagged_nodes;
};

struct SeparatrixOptions {
  ScanOptions scan{};
  /// Bisection stops once the bracket is below this fraction of the edge's axis range...
  double relative_bracket = 1e-6;
  /// ...and, for Maxwell points, once |V(A) - V(B)| <= maxwell_tolerance * scale.
  double maxwell_tolerance = 1e-10;
  /// Extrema are matched across an edge only within this angular distance.
  double match_radius = std::numbers::pi / 4.0;
  /// Linking radius for polylines, in grid cells.
  double link_radius = 2.0;
  unsigned threads = 0;
};

namespace detail {

inline ReducedParams lerp(const ReducedParams& p, const ReducedParams& q, double t) {
  ReducedParams r = p;
  r.r1 = p.r1 + t * (q.r1 - p.r1);
  r.r2 = p.r2 + t * (q.r2 - p.r2);
  r.r3 = p.r3 + t * (q.r3 - p.r3);
  r.r4 = p.r4 + t * (q.r4 - p.r4);
  r.r5 = p.r5 + t * (q.r5 - p.r5);
  r.offset = p.offset + t * (q.offset - p.offset);
  return r;
}

inline std::array<int, 2> counts(const LandscapeReport& l) { return {l.n_minima, l.n_maxima}; }

inline int sgn(double x) { return x < 0.0 ? -1 : 1; }

// Relative level below which two tracked extrema count as exactly tied. Ties
// forced by symmetry (e.g. phi = 0 and phi = pi when r1 = r5 = 0) would
// otherwise produce sign flips out of rounding noise.
inline constexpr double kTieLevel = 1e-12;

enum class SignChange { None, Inside, AtEnd };

// How the tracked difference changes sign along an edge. A strict sign flip is
// bisected; a difference that becomes an exact tie at the far end is a
// crossing sitting on that node. Starting from a tie never counts, so each node
// crossing is reported by the edges that arrive at it.
inline SignChange sign_change(double dp, double dq, double scale) {
  const double noise = kTieLevel * scale;
  if ((dp > noise && dq < -noise) || (dp < -noise && dq > noise)) return SignChange::Inside;
  if (std::abs(dp) > noise && std::abs(dq) <= noise) return SignChange::AtEnd;
  return SignChange::None;
}

// The pair of extrema tracked for Maxwell detection: the two deepest minima or
// the two highest maxima, ordered by theta.
inline std::optional<std::array<CriticalPoint, 2>> tracked_pair(const LandscapeReport& l,
                                                                 CriticalKind kind) {
  auto pts = l.of_kind(kind);
  if (pts.size() < 2) return std::nullopt;
  std::stable_sort(pts.begin(), pts.end(), [&](const CriticalPoint& a, const CriticalPoint& b) {
    return kind == CriticalKind::Minimum ? a.value < b.value : a.value > b.value;
  });
  std::array<CriticalPoint, 2> pair{pts[0], pts[1]};
  if (pair[1].theta < pair[0].theta) std::swap(pair[0], pair[1]);
  return pair;
}

// Match both extrema of `pair` to distinct extrema of the same kind in `l`.
inline std::optional<std::array<CriticalPoint, 2>> match_pair(const std::array<CriticalPoint, 2>& pair,
                                                               const LandscapeReport& l,
                                                               CriticalKind kind, double radius) {
  const auto pts = l.of_kind(kind);
  std::array<int, 2> idx{-1, -1};
  for (int k = 0; k < 2; ++k) {
    double best = radius;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double d = circular_distance(pair[static_cast<std::size_t>(k)].theta, pts[i].theta);
      if (d <= best) {
        best = d;
        idx[static_cast<std::size_t>(k)] = static_cast<int>(i);
      }
    }
    if (idx[static_cast<std::size_t>(k)] < 0) return std::nullopt;
  }
  if (idx[0] == idx[1]) return std::nullopt;
  return std::array<CriticalPoint, 2>{pts[static_cast<std::size_t>(idx[0])],
                                      pts[static_cast<std::size_t>(idx[1])]};
}

struct SegmentHit {
  double t;
  double theta;
};

struct SegmentResult {
  std::vector<SegmentHit> bifurcation;
  std::vector<SegmentHit> maxwell_minima;
  std::vector<SegmentHit> maxwell_maxima;
  bool flagged = false;
};

class Segment {
public:
  Segment(const ReducedParams& p, const ReducedParams& q, double t_tolerance,
          const SeparatrixOptions& opt)
      : p_(p), q_(q), t_tol_(t_tolerance), opt_(opt), scale_(std::max(p.scale(), q.scale())) {
    base_ = reduced_poly(p, Branch::Plus);
    delta_ = reduced_poly(q, Branch::Plus) - base_;
  }

  ReducedParams at(double t) const { return lerp(p_, q_, t); }
  LandscapeReport landscape_at(double t) const { return landscape(at(t), opt_.scan); }

  SegmentResult analyze(const LandscapeReport& lp, const LandscapeReport& lq) const {
    SegmentResult res;
    if (lp.flat || lq.flat) {
      res.flagged = true;
      return res;
    }
    const bool count_change = counts(lp) != counts(lq);
    if (count_change) res.bifurcation.push_back(bifurcation(0.0, 1.0, lp));

    bool unmatched = false;
    for (CriticalKind kind : {CriticalKind::Minimum, CriticalKind::Maximum}) {
      const auto pair = tracked_pair(lp, kind);
      if (!pair) continue;
      const auto other = match_pair(*pair, lq, kind, opt_.match_radius);
      if (!other) {
        unmatched = true;
        continue;
      }
      const double dp = (*pair)[0].value - (*pair)[1].value;
      const double dq = (*other)[0].value - (*other)[1].value;
      auto& hits = kind == CriticalKind::Minimum ? res.maxwell_minima : res.maxwell_maxima;
      switch (sign_change(dp, dq, scale_)) {
        case SignChange::None:
          break;
        case SignChange::AtEnd:
          hits.push_back({1.0, (*other)[0].theta});
          break;
        case SignChange::Inside:
          if (auto hit = maxwell(*pair, dp, kind)) hits.push_back(*hit);
          break;
      }
    }

    // Equal counts but a tracked extremum vanished: a well died and another
    // was born inside the edge. Look for the hidden count changes.
    if (unmatched && !count_change) {
      constexpr int kSub = 16;
      LandscapeReport prev = lp;
      double t_prev = 0.0;
      for (int k = 1; k <= kSub; ++k) {
        const double t = static_cast<double>(k) / kSub;
        LandscapeReport cur = (k == kSub) ? lq : landscape_at(t);
        if (cur.flat) {
          res.flagged = true;
          break;
        }
        if (counts(cur) != counts(prev)) res.bifurcation.push_back(bifurcation(t_prev, t, prev));
        prev = std::move(cur);
        t_prev = t;
      }
    }
    return res;
  }

private:
  // Bisect on the extremum counts, then polish onto the fold.
  SegmentHit bifurcation(double lo, double hi, const LandscapeReport& l_lo) const {
    const auto c_lo = counts(l_lo);
    while (hi - lo > t_tol_) {
      const double mid = 0.5 * (lo + hi);
      const auto l = landscape_at(mid);
      if (!l.flat && counts(l) == c_lo)
        lo = mid;
      else
        hi = mid;
    }
    return polish_fold(lo, hi);
  }

  SegmentHit polish_fold(double lo, double hi) const {
    const double mid = 0.5 * (lo + hi);
    const double w = std::max(hi - lo, 1e-12);
    const TrigPoly v1 = (base_ + mid * delta_).derivative();
    const TrigPoly v2 = v1.derivative();
    const TrigPoly dd1 = delta_.derivative();
    const TrigPoly dd2 = dd1.derivative();
    const TrigPoly dd3 = dd2.derivative();
    const TrigPoly b1 = base_.derivative();
    const TrigPoly b2 = b1.derivative();
    const TrigPoly b3 = b2.derivative();

    // Initial guess: the inflection of V at `mid` closest to being critical.
    std::optional<double> guess;
    {
      double best = INFINITY;
      const int n = 2048;
      double g_prev = v2(0.0);
      for (int j = 1; j <= n; ++j) {
        const double th = kTwoPi * j / n;
        const double g = v2(th);
        if ((g < 0.0) != (g_prev < 0.0)) {
          const double xi = bracketed_root(v2, v2.derivative(), kTwoPi * (j - 1) / n, th,
                                           1e-14 * scale_, 60);
          const double f = std::abs(v1(xi));
          if (f < best) {
            best = f;
            guess = xi;
          }
        }
        g_prev = g;
      }
    }

    const double tol = 1e-13 * scale_;
    if (guess) {
      double th = *guess;
      double t = mid;
      bool ok = false;
      for (int it = 0; it < 40; ++it) {
        const double f1 = b1(th) + t * dd1(th);
        const double f2 = b2(th) + t * dd2(th);
        if (std::abs(f1) <= tol && std::abs(f2) <= tol) {
          ok = true;
          break;
        }
        const double j11 = f2;
        const double j12 = dd1(th);
        const double j21 = b3(th) + t * dd3(th);
        const double j22 = dd2(th);
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0 || !std::isfinite(det)) break;
        const double dth = (-f1 * j22 + f2 * j12) / det;
        const double dt = (-j11 * f2 + j21 * f1) / det;
        th += dth;
        t += dt;
        if (!std::isfinite(th) || !std::isfinite(t)) break;
      }
      if (ok && t >= lo - 2.0 * w && t <= hi + 2.0 * w && circular_distance(th, *guess) < 0.1)
        return {t, wrap_angle(th)};
    }

    // Symmetric (pitchfork-type) fold: a critical point pinned at a fixed
    // theta changes stability. V'' is linear in t at fixed theta.
    const auto l = landscape_at(mid);
    std::optional<CriticalPoint> pinned;
    for (const auto& cp : l.points) {
      const bool fixed_lo = std::abs(b1(cp.theta) + lo * dd1(cp.theta)) <= 1e-10 * scale_;
      const bool fixed_hi = std::abs(b1(cp.theta) + hi * dd1(cp.theta)) <= 1e-10 * scale_;
      if (fixed_lo && fixed_hi &&
          (!pinned || std::abs(cp.second_derivative) < std::abs(pinned->second_derivative)))
        pinned = cp;
    }
    if (pinned) {
      const double slope = dd2(pinned->theta);
      if (slope != 0.0) {
        const double t = -b2(pinned->theta) / slope;
        if (t >= lo - 2.0 * w && t <= hi + 2.0 * w) return {t, pinned->theta};
      }
    }
    return {mid, guess.value_or(0.0)};
  }

  std::optional<SegmentHit> maxwell(std::array<CriticalPoint, 2> tracked, double d_lo,
                                    CriticalKind kind) const {
    double lo = 0.0, hi = 1.0;
    const double tol = opt_.maxwell_tolerance * scale_;
    double best_t = 0.5, best_d = INFINITY, best_theta = tracked[0].theta;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const auto l = landscape_at(mid);
      const auto m = match_pair(tracked, l, kind, opt_.match_radius);
      if (!m) return std::nullopt;  // an extremum died inside the edge: not a Maxwell crossing
      const double d = (*m)[0].value - (*m)[1].value;
      if (std::abs(d) < best_d) {
        best_d = std::abs(d);
        best_t = mid;
        best_theta = (*m)[0].theta;
      }
      if (hi - lo <= t_tol_ && std::abs(d) <= tol) break;
      if (sgn(d) == sgn(d_lo)) {
        lo = mid;
        tracked = *m;
      } else {
        hi = mid;
      }
      if (hi - lo < 1e-16) break;
    }
    return SegmentHit{best_t, best_theta};
  }

  ReducedParams p_, q_;
  double t_tol_;
  const SeparatrixOptions& opt_;
  double scale_;
  TrigPoly base_, delta_;
};

// Drops points within (tol1, tol2) of an earlier kept point, e.g. one crossing
// found from both edges that meet at a grid node. Output is sorted.
inline std::vector<SeparatrixPoint> dedupe_points(std::vector<SeparatrixPoint> pts, double tol1, double tol2) {
  std::sort(pts.begin(), pts.end(), [](const SeparatrixPoint& a, const SeparatrixPoint& b) {
    return a.a1 != b.a1 ? a.a1 < b.a1 : a.a2 < b.a2;
  });
  std::vector<SeparatrixPoint> kept;
  for (const auto& p : pts) {
    bool dup = false;
    for (auto it = kept.rbegin(); it != kept.rend() && p.a1 - it->a1 <= tol1; ++it)
      if (std::abs(p.a2 - it->a2) <= tol2) {
        dup = true;
        break;
      }
    if (!dup) kept.push_back(p);
  }
  return kept;
}

inline std::vector<double> dedupe_values(std::vector<double> v, double tol) {
  std::sort(v.begin(), v.end());
  std::vector<double> kept;
  for (double x : v)
    if (kept.empty() || x - kept.back() > tol) kept.push_back(x);
  return kept;
}

// Greedy nearest-neighbour chaining in grid-cell units; deterministic for a
// lexicographically sorted input.
inline std::vector<Polyline> link_points(std::vector<SeparatrixPoint> pts, double cell1, double cell2,
                                         double radius) {
  std::sort(pts.begin(), pts.end(), [](const SeparatrixPoint& a, const SeparatrixPoint& b) {
    return a.a1 != b.a1 ? a.a1 < b.a1 : a.a2 < b.a2;
  });
  std::vector<bool> used(pts.size(), false);
  auto dist = [&](std::size_t i, std::size_t j) {
    return std::hypot((pts[i].a1 - pts[j].a1) / cell1, (pts[i].a2 - pts[j].a2) / cell2);
  };
  auto nearest = [&](std::size_t from) -> std::optional<std::size_t> {
    std::optional<std::size_t> best;
    double best_d = radius;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (used[j]) continue;
      const double d = dist(from, j);
      if (d <= best_d && (!best || d < best_d)) {
        best_d = d;
        best = j;
      }
    }
    return best;
  };

  std::vector<Polyline> lines;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    std::vector<std::size_t> chain{i};
    while (auto j = nearest(chain.back())) {
      used[*j] = true;
      chain.push_back(*j);
    }
    std::vector<std::size_t> head;
    while (auto j = nearest(head.empty() ? chain.front() : head.back())) {
      used[*j] = true;
      head.push_back(*j);
    }
    Polyline line;
    for (auto it = head.rbegin(); it != head.rend(); ++it) line.push_back({pts[*it].a1, pts[*it].a2});
    for (std::size_t k : chain) line.push_back({pts[k].a1, pts[k].a2});
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace detail

inline SeparatrixSet classify_cell_edges(const PlaneSpec& plane, const SeparatrixOptions& opt = {}) {
  plane.validate();
  const int n1 = plane.resolution1;
  const int n2 = plane.resolution2;
  auto node = [&](int i, int j) { return static_cast<std::size_t>(i) * n2 + j; };

  std::vector<LandscapeReport> grid(static_cast<std::size_t>(n1) * n2);
  parallel_for(
      grid.size(),
      [&](std::size_t k) {
        const int i = static_cast<int>(k / n2);
        const int j = static_cast<int>(k % n2);
        grid[k] = landscape(plane.at(plane.coord1(i), plane.coord2(j)), opt.scan);
      },
      opt.threads);

  struct Edge {
    int i, j;
    bool along1;  // true: (i,j)-(i+1,j)
  };
  std::vector<Edge> edges;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      if (i + 1 < n1) edges.push_back({i, j, true});
      if (j + 1 < n2) edges.push_back({i, j, false});
    }

  std::vector<detail::SegmentResult> results(edges.size());
  parallel_for(
      edges.size(),
      [&](std::size_t k) {
        const auto& e = edges[k];
        const int i2 = e.along1 ? e.i + 1 : e.i;
        const int j2 = e.along1 ? e.j : e.j + 1;
        const auto& lp = grid[node(e.i, e.j)];
        const auto& lq = grid[node(i2, j2)];
        if (!lp.flat && !lq.flat && detail::counts(lp) == detail::counts(lq)) {
          // Cheap reject: nothing can be found unless the tracked differences change sign
          // or a tracked extremum fails to match.
          bool interesting = false;
          for (CriticalKind kind : {CriticalKind::Minimum, CriticalKind::Maximum}) {
            const auto pair = detail::tracked_pair(lp, kind);
            if (!pair) continue;
            const auto other = detail::match_pair(*pair, lq, kind, opt.match_radius);
            if (!other || detail::sign_change((*pair)[0].value - (*pair)[1].value,
                                              (*other)[0].value - (*other)[1].value,
                                              std::max(lp.scale, lq.scale)) != detail::SignChange::None)
              interesting = true;
          }
          if (!interesting) return;
        }
        const auto p = plane.at(plane.coord1(e.i), plane.coord2(e.j));
        const auto q = plane.at(plane.coord1(i2), plane.coord2(j2));
        const double t_tol = opt.relative_bracket * (e.along1 ? n1 - 1 : n2 - 1);
        detail::Segment seg(p, q, t_tol, opt);
        results[k] = seg.analyze(lp, lq);
      },
      opt.threads);

  SeparatrixSet out;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& e = edges[k];
    const double a1 = plane.coord1(e.i);
    const double a2 = plane.coord2(e.j);
    const double b1 = e.along1 ? plane.coord1(e.i + 1) : a1;
    const double b2 = e.along1 ? a2 : plane.coord2(e.j + 1);
    auto place = [&](const detail::SegmentHit& h) {
      return SeparatrixPoint{a1 + h.t * (b1 - a1), a2 + h.t * (b2 - a2), h.theta};
    };
    for (const auto& h : results[k].bifurcation) out.bifurcation_points.push_back(place(h));
    for (const auto& h : results[k].maxwell_minima) out.maxwell_minima_points.push_back(place(h));
    for (const auto& h : results[k].maxwell_maxima) out.maxwell_maxima_points.push_back(place(h));
  }
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      if (grid[node(i, j)].flat) out.flagged_nodes.push_back({i, j});

  const double tol1 = 2.0 * opt.relative_bracket * plane.range1.width();
  const double tol2 = 2.0 * opt.relative_bracket * plane.range2.width();
  out.bifurcation_points = detail::dedupe_points(std::move(out.bifurcation_points), tol1, tol2);
  out.maxwell_minima_points = detail::dedupe_points(std::move(out.maxwell_minima_points), tol1, tol2);
  out.maxwell_maxima_points = detail::dedupe_points(std::move(out.maxwell_maxima_points), tol1, tol2);

  const double c1 = plane.range1.width() / (n1 - 1);
  const double c2 = plane.range2.width() / (n2 - 1);
  out.bifurcation = detail::link_points(out.bifurcation_points, c1, c2, opt.link_radius);
  out.maxwell_minima = detail::link_points(out.maxwell_minima_points, c1, c2, opt.link_radius);
  out.maxwell_maxima = detail::link_points(out.maxwell_maxima_points, c1, c2, opt.link_radius);
  return out;
}

struct Crossings {
  std::vector<double> bifurcation;
  std::vector<double> maxwell_minima;
  std::vector<double> maxwell_maxima;
};

struct SweepOptions {
  int samples = 801;
  /// Absolute bracket (kelvin) for the one-dimensional bisection.
  double bracket = 1e-4;
  SeparatrixOptions separatrix{};
};

/// Separatrix crossings along one parameter axis with the others held fixed.
inline Crossings sweep_crossings(const ReducedParams& fixed, Axis axis, AxisRange range,
                                 const SweepOptions& opt = {}) {
  if (!(range.lo < range.hi)) throw InvalidInput("sweep_crossings: range needs lo < hi");
  if (opt.samples < 2) throw InvalidInput("sweep_crossings: need at least 2 samples");
  const int n = opt.samples;
  auto at = [&](int i) {
    ReducedParams rp = fixed;
    axis_ref(rp, axis) = range.lo + range.width() * i / (n - 1);
    return rp;
  };
  std::vector<LandscapeReport> nodes(static_cast<std::size_t>(n));
  parallel_for(
      nodes.size(), [&](std::size_t i) { nodes[i] = landscape(at(static_cast<int>(i)), opt.separatrix.scan); },
      opt.separatrix.threads);

  const double step = range.width() / (n - 1);
  std::vector<detail::SegmentResult> results(static_cast<std::size_t>(n - 1));
  parallel_for(
      results.size(),
      [&](std::size_t k) {
        detail::Segment seg(at(static_cast<int>(k)), at(static_cast<int>(k) + 1), opt.bracket / step,
                            opt.separatrix);
        results[k] = seg.analyze(nodes[k], nodes[k + 1]);
      },
      opt.separatrix.threads);

  Crossings out;
  for (std::size_t k = 0; k < results.size(); ++k) {
    const double x0 = range.lo + range.width() * static_cast<double>(k) / (n - 1);
    for (const auto& h : results[k].bifurcation) out.bifurcation.push_back(x0 + h.t * step);
    for (const auto& h : results[k].maxwell_minima) out.maxwell_minima.push_back(x0 + h.t * step);
    for (const auto& h : results[k].maxwell_maxima) out.maxwell_maxima.push_back(x0 + h.t * step);
  }
  out.bifurcation = detail::dedupe_values(std::move(out.bifurcation), 2.0 * opt.bracket);
  out.maxwell_minima = detail::dedupe_values(std::move(out.maxwell_minima), 2.0 * opt.bracket);
  out.maxwell_maxima = detail::dedupe_values(std::move(out.maxwell_maxima), 2.0 * opt.bracket);
  return out;
}

}  // namespace smm
