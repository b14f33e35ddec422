#pragma once
// Gauss linking, writhe, twist and framed self-linking of closed polylines,
// Biot-Savart reconstruction of the connection from string currents, and the
// assembly of the Hopf invariant as a linking sum over a knot family.
//
// Convention: Lk(a, b) = (1/4 pi) oint_a oint_b (dx x dy) . (x - y) / |x - y|^3,
// which is +1 for a right-handed Hopf link.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Geometry>

#include "hopf/error.hpp"
#include "hopf/fibers.hpp"
#include "hopf/invariant.hpp"
#include "hopf/parallel.hpp"
#include "hopf/types.hpp"

namespace hopf {

/// Closed polyline; the last point connects back to the first.
using Polyline = std::vector<Vec3>;

inline std::size_t next_index(std::size_t i, std::size_t n) { return i + 1 == n ? 0 : i + 1; }

/// (1/4 pi) int_a int_b (dx x dy) . (x - y) / |x - y|^3 over two straight
/// segments, in closed form (signed solid angle of the quadrilateral).
inline double segment_gauss_integral(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1) {
  const Vec3 r13 = b0 - a0, r14 = b1 - a0, r23 = b0 - a1, r24 = b1 - a1;
  Vec3 n[4] = {r13.cross(r14), r14.cross(r24), r24.cross(r23), r23.cross(r13)};
  for (auto& v : n) {
    const double l = v.norm();
    if (l < 1e-300) return 0.0;
    v /= l;
  }
  auto as = [](double x) { return std::asin(std::clamp(x, -1.0, 1.0)); };
  const double omega = as(n[0].dot(n[1])) + as(n[1].dot(n[2])) + as(n[2].dot(n[3])) + as(n[3].dot(n[0]));
  const double orient = (b1 - b0).cross(a1 - a0).dot(r13);
  if (orient == 0.0) return 0.0;
  return std::copysign(omega, orient) / (4.0 * kPi);
}

inline double point_segment_distance(const Vec3& x, const Vec3& a, const Vec3& b) {
  const Vec3 d = b - a;
  const double l2 = d.squaredNorm();
  const double t = l2 > 0 ? std::clamp((x - a).dot(d) / l2, 0.0, 1.0) : 0.0;
  return (x - (a + t * d)).norm();
}

/// Distance between segments [a0, a1] and [b0, b1].
inline double segment_distance(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1) {
  const Vec3 u = a1 - a0, v = b1 - b0, w = a0 - b0;
  const double a = u.dot(u), b = u.dot(v), c = v.dot(v), d = u.dot(w), e = v.dot(w);
  const double den = a * c - b * b;
  double s = 0.0, t = 0.0;
  if (den > 1e-14 * a * c) {
    s = std::clamp((b * e - c * d) / den, 0.0, 1.0);
  }
  t = c > 0 ? std::clamp((b * s + e) / c, 0.0, 1.0) : 0.0;
  s = a > 0 ? std::clamp((b * t - d) / a, 0.0, 1.0) : 0.0;
  double best = ((a0 + s * u) - (b0 + t * v)).norm();
  best = std::min({best, point_segment_distance(a0, b0, b1), point_segment_distance(a1, b0, b1),
                   point_segment_distance(b0, a0, a1), point_segment_distance(b1, a0, a1)});
  return best;
}

inline double diameter(const Polyline& c) {
  Vec3 lo = c.front(), hi = c.front();
  for (const Vec3& p : c) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

inline double min_distance(const Polyline& a, const Polyline& b) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      best = std::min(best, segment_distance(a[i], a[next_index(i, a.size())], b[j], b[next_index(j, b.size())]));
  return best;
}

/// Gauss linking number of two disjoint closed polylines. Each segment pair is
/// integrated in closed form, so the result is an integer up to round-off.
inline double gauss_linking(const Polyline& a, const Polyline& b, bool check_disjoint = true) {
  if (a.size() < 3 || b.size() < 3) throw InvalidArgument("gauss_linking: curves need at least 3 points");
  if (check_disjoint) {
    const double tol = 1e-6 * std::max(diameter(a), diameter(b));
    if (min_distance(a, b) <= tol) throw CurvesNotDisjoint("gauss_linking: curves not disjoint");
  }
  return deterministic_sum(a.size(), [&](std::size_t i) {
    const Vec3& a0 = a[i];
    const Vec3& a1 = a[next_index(i, a.size())];
    double s = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) s += segment_gauss_integral(a0, a1, b[j], b[next_index(j, b.size())]);
    return s;
  });
}

/// Writhe: the Gauss self-integral over all pairs of segments at least two
/// apart along the curve (adjacent segments are coplanar and contribute 0).
inline double writhe(const Polyline& c, bool check_self_intersection = true) {
  const std::size_t n = c.size();
  if (n < 4) return 0.0;
  if (check_self_intersection) {
    const double tol = 1e-9 * diameter(c);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 2; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;
        if (segment_distance(c[i], c[next_index(i, n)], c[j], c[next_index(j, n)]) <= tol)
          throw SelfIntersection("writhe: curve intersects itself");
      }
  }
  return 2.0 * deterministic_sum(n, [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      s += segment_gauss_integral(c[i], c[next_index(i, n)], c[j], c[next_index(j, n)]);
    }
    return s;
  });
}

// --- projection oracle ------------------------------------------------------------

namespace detail {

struct Projection {
  Vec3 view, u, v;
  explicit Projection(const Vec3& d) : view(d.normalized()) {
    int axis = 0;
    view.cwiseAbs().minCoeff(&axis);
    u = view.cross(Vec3::Unit(axis)).normalized();
    v = view.cross(u);
  }
  Vec2 operator()(const Vec3& x) const { return {x.dot(u), x.dot(v)}; }
};

inline double cross2(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }

/// Signed crossing of two segments in projection along `view`; 0 when the
/// projections do not cross. Sign is +1 for a right-handed crossing.
inline int crossing_sign(const Projection& pr, const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1) {
  const Vec2 p = pr(a0), r = pr(a1) - p, q = pr(b0), s = pr(b1) - q;
  const double den = cross2(r, s);
  const double scale = r.norm() * s.norm();
  if (std::abs(den) <= 1e-12 * scale) {
    if (std::abs(cross2(q - p, r)) <= 1e-12 * r.norm() * std::max(1.0, (q - p).norm()) && scale > 0) {
      const double t0 = (q - p).dot(r) / r.squaredNorm(), t1 = (q + s - p).dot(r) / r.squaredNorm();
      if (std::max(t0, t1) >= 0.0 && std::min(t0, t1) <= 1.0)
        throw DegenerateProjection("crossing_linking: collinear projected segments");
    }
    return 0;
  }
  const double t = cross2(q - p, s) / den;
  const double w = cross2(q - p, r) / den;
  constexpr double eps = 1e-10;
  if (t < -eps || t > 1.0 + eps || w < -eps || w > 1.0 + eps) return 0;
  if (t < eps || t > 1.0 - eps || w < eps || w > 1.0 - eps)
    throw DegenerateProjection("crossing_linking: crossing at a projected vertex");
  const double ha = (a0 + t * (a1 - a0)).dot(pr.view), hb = (b0 + w * (b1 - b0)).dot(pr.view);
  if (std::abs(ha - hb) < 1e-12) throw DegenerateProjection("crossing_linking: curves meet");
  const Vec3 ta = a1 - a0, tb = b1 - b0;
  const Vec3& over = ha > hb ? ta : tb;
  const Vec3& under = ha > hb ? tb : ta;
  return over.cross(under).dot(pr.view) > 0 ? 1 : -1;
}

template <class F>
auto with_projection_retries(const Vec3& direction, F&& f, int attempts = 12) {
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec3 d = direction.normalized();
  for (int a = 0;; ++a) {
    try {
      return f(Projection(d));
    } catch (const DegenerateProjection&) {
      if (a + 1 >= attempts) throw;
      d = (direction.normalized() + 0.05 * (a + 1) * Vec3(normal(rng), normal(rng), normal(rng))).normalized();
    }
  }
}

}  // namespace detail

/// Linking number as half the signed crossing count of the two projected
/// curves. Non-generic projections are retried with jittered directions.
inline int crossing_linking(const Polyline& a, const Polyline& b, const Vec3& direction = Vec3(0.3, 0.5, 0.81)) {
  return detail::with_projection_retries(direction, [&](const detail::Projection& pr) {
    int total = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        total += detail::crossing_sign(pr, a[i], a[next_index(i, a.size())], b[j], b[next_index(j, b.size())]);
    if (total % 2 != 0) throw DegenerateProjection("crossing_linking: odd crossing sum");
    return total / 2;
  });
}

/// Signed self-crossing count of the projection along `direction`.
inline int directional_writhe(const Polyline& c, const Vec3& direction) {
  const std::size_t n = c.size();
  return detail::with_projection_retries(direction, [&](const detail::Projection& pr) {
    int total = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 2; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;
        total += detail::crossing_sign(pr, c[i], c[next_index(i, n)], c[j], c[next_index(j, n)]);
      }
    return total;
  });
}

/// `count` directions spread over the unit sphere (Fibonacci lattice).
inline std::vector<Vec3> sphere_directions(int count) {
  std::vector<Vec3> out;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < count; ++k) {
    const double z = 1.0 - (2.0 * k + 1.0) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    out.emplace_back(r * std::cos(golden * k), r * std::sin(golden * k), z);
  }
  return out;
}

// --- framings -------------------------------------------------------------------

/// Closed curve with a unit normal (push-off direction) at every point.
struct FramedCurve {
  Polyline base;
  std::vector<Vec3> framing;
};

/// Unit tangent at vertex i (central difference).
inline Vec3 vertex_tangent(const Polyline& c, std::size_t i) {
  const std::size_t n = c.size();
  return (c[next_index(i, n)] - c[(i + n - 1) % n]).normalized();
}

/// Projects each framing vector off the tangent and normalizes it. Throws
/// when a vector is parallel to the tangent or adjacent vectors flip.
inline FramedCurve make_framed(Polyline base, std::vector<Vec3> framing) {
  if (base.size() != framing.size() || base.size() < 3) throw InvalidArgument("framed curve: size mismatch");
  for (std::size_t i = 0; i < base.size(); ++i) {
    const Vec3 t = vertex_tangent(base, i);
    Vec3 f = framing[i] - framing[i].dot(t) * t;
    if (f.norm() < 1e-9) throw InvalidArgument("framed curve: framing parallel to tangent");
    framing[i] = f.normalized();
  }
  for (std::size_t i = 0; i < base.size(); ++i)
    if (framing[i].dot(framing[next_index(i, base.size())]) <= 0.0)
      throw InvalidArgument("framed curve: framing flips between adjacent points");
  return {std::move(base), std::move(framing)};
}

/// Framing by a fixed direction projected off the tangent (blackboard framing
/// for the projection along that direction).
inline FramedCurve blackboard_framing(const Polyline& c) {
  // Choose the direction least aligned with any tangent.
  Vec3 best_dir = Vec3::UnitZ();
  double best = std::numeric_limits<double>::infinity();
  for (const Vec3& d : sphere_directions(64)) {
    double worst = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) worst = std::max(worst, std::abs(vertex_tangent(c, i).dot(d)));
    if (worst < best) {
      best = worst;
      best_dir = d;
    }
  }
  return make_framed(c, std::vector<Vec3>(c.size(), best_dir));
}

/// First-order push-off: the displacement of the fiber under an infinitesimal
/// move of the target along the first axis of its transverse chart.
inline FramedCurve linearized_framing(const SpinorField& field, const FiberCurve& curve) {
  const TransverseChart chart(curve.target);
  std::vector<Vec3> f(curve.points.size());
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const PhiJet pj = phi_jet(field, chart, curve.points[i]);
    const Eigen::Matrix2d jjt = pj.grad * pj.grad.transpose();
    f[i] = pj.grad.transpose() * jjt.ldlt().solve(Vec2(1.0, 0.0));
  }
  return make_framed(curve.points, std::move(f));
}

/// Framing toward the fiber of a target rotated by `angle` on S2: each base
/// point points at the nearest point of the pushed fiber. Falls back to the
/// linearized push-off when the pushed fiber is not found closed.
inline FramedCurve pushoff_framing(const SpinorField& field, const FiberCurve& curve, const BoxGrid& grid,
                                   double angle = 0.02, const ExtractionOptions& opt = {}) {
  if (!curve.closed) throw OpenCurve("pushoff_framing: curve is open");
  const Vec3 pushed_target = perturb_target(curve.target, angle);
  KnotFamily pushed;
  try {
    pushed = extract_fibers(field, grid, pushed_target, opt);
  } catch (const Error&) {
    return linearized_framing(field, curve);
  }
  if (pushed.curves.empty()) return linearized_framing(field, curve);
  std::vector<Vec3> f(curve.points.size());
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const Vec3& x = curve.points[i];
    double best = std::numeric_limits<double>::infinity();
    Vec3 nearest = x;
    for (const auto& pc : pushed.curves) {
      const std::size_t m = pc.points.size();
      for (std::size_t j = 0; j < m; ++j) {
        const Vec3 a = pc.points[j], b = pc.points[next_index(j, m)];
        const Vec3 d = b - a;
        const double t = std::clamp((x - a).dot(d) / std::max(d.squaredNorm(), 1e-300), 0.0, 1.0);
        const Vec3 q = a + t * d;
        const double dist = (q - x).norm();
        if (dist < best) {
          best = dist;
          nearest = q;
        }
      }
    }
    f[i] = nearest - x;
  }
  try {
    return make_framed(curve.points, std::move(f));
  } catch (const InvalidArgument&) {
    return linearized_framing(field, curve);
  }
}

/// Smallest segment length and smallest distance between segments at least
/// two apart along the curve.
inline double min_feature(const Polyline& c) {
  const std::size_t n = c.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) best = std::min(best, (c[next_index(i, n)] - c[i]).norm());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      best = std::min(best, segment_distance(c[i], c[next_index(i, n)], c[j], c[next_index(j, n)]));
    }
  return best;
}

inline Polyline offset_curve(const FramedCurve& fc, double delta) {
  Polyline out(fc.base.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fc.base[i] + delta * fc.framing[i];
  return out;
}

struct SelfLinking {
  int value = 0;
  double raw = 0.0;  // unrounded Gauss integral with the push-off
  double offset = 0.0;
};

/// Drops vertices closer than `frac` times the median segment length to the
/// last kept one. Near-duplicate points from face crossings would otherwise
/// force the push-off below the disjointness tolerance.
inline FramedCurve drop_short_segments(const FramedCurve& fc, double frac = 0.05) {
  const std::size_t n = fc.base.size();
  std::vector<double> len(n);
  for (std::size_t i = 0; i < n; ++i) len[i] = (fc.base[next_index(i, n)] - fc.base[i]).norm();
  std::nth_element(len.begin(), len.begin() + n / 2, len.end());
  const double min_len = frac * len[n / 2];
  FramedCurve out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.base.empty() && (fc.base[i] - out.base.back()).norm() < min_len) continue;
    out.base.push_back(fc.base[i]);
    out.framing.push_back(fc.framing[i]);
  }
  while (out.base.size() > 3 && (out.base.back() - out.base.front()).norm() < min_len) {
    out.base.pop_back();
    out.framing.pop_back();
  }
  return out.base.size() >= 3 ? out : fc;
}

/// SL = Lk(base, base + delta framing) with delta = min_feature / 10, halved
/// while the offset curve touches the base.
inline SelfLinking self_linking(const FramedCurve& framed) {
  const FramedCurve fc = drop_short_segments(framed);
  double delta = 0.1 * min_feature(fc.base);
  for (int attempt = 0; attempt < 6; ++attempt, delta *= 0.5) {
    try {
      const double lk = gauss_linking(fc.base, offset_curve(fc, delta));
      return {static_cast<int>(std::lround(lk)), lk, delta};
    } catch (const CurvesNotDisjoint&) {
    }
  }
  throw CurvesNotDisjoint("self_linking: offset curve intersects the base");
}

/// Tw = (1/2 pi) oint (t x f) . f' ds, discretized as the rotation of the
/// framing about the tangent relative to parallel transport between segments.
inline double twist(const FramedCurve& fc) {
  const Polyline& c = fc.base;
  const std::size_t n = c.size();
  std::vector<Vec3> tan(n), frame(n);
  for (std::size_t i = 0; i < n; ++i) {
    tan[i] = (c[next_index(i, n)] - c[i]).normalized();
    Vec3 f = fc.framing[i] + fc.framing[next_index(i, n)];
    f -= f.dot(tan[i]) * tan[i];
    frame[i] = f.normalized();
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = next_index(i, n);
    const Eigen::Quaterniond rot = Eigen::Quaterniond::FromTwoVectors(tan[i], tan[k]);
    const Vec3 moved = rot * frame[i];
    total += std::atan2(moved.cross(frame[k]).dot(tan[k]), moved.dot(frame[k]));
  }
  return total / kTwoPi;
}

// --- linking sum -------------------------------------------------------------------

struct LinkReport {
  Eigen::MatrixXd linking;  // off-diagonal Lk, diagonal SL
  std::vector<int> windings;
  std::vector<int> self_linking;
  std::vector<double> twist;
  std::vector<double> writhe;
  double h_link_sum = 0.0;
  long h_rounded = 0;
};

/// H = sum_m W_m^2 SL(m) + sum_{m != n} W_m W_n Lk(m, n).
inline LinkReport hopf_from_links(const KnotFamily& family, const std::vector<FramedCurve>& framings) {
  if (!family.open_curves.empty()) throw OpenCurve("hopf_from_links: family contains open curves");
  const std::size_t n = family.curves.size();
  if (framings.size() != n) throw InvalidArgument("hopf_from_links: one framing per curve required");
  LinkReport r;
  r.linking = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t m = 0; m < n; ++m) {
    if (!family.curves[m].closed) throw OpenCurve("hopf_from_links: open curve");
    r.windings.push_back(family.curves[m].winding);
    const SelfLinking sl = self_linking(framings[m]);
    r.self_linking.push_back(sl.value);
    r.twist.push_back(twist(framings[m]));
    r.writhe.push_back(writhe(framings[m].base));
    r.linking(m, m) = sl.value;
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const double lk = gauss_linking(family.curves[a].points, family.curves[b].points);
      r.linking(a, b) = r.linking(b, a) = lk;
    }
  double h = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) h += r.windings[a] * r.windings[b] * r.linking(a, b);
  r.h_link_sum = h;
  r.h_rounded = std::lround(h);
  return r;
}

// --- Biot-Savart ---------------------------------------------------------------------

/// int_seg dy x (x - y) / |x - y|^3 for the straight segment a -> b.
inline Vec3 segment_biot_savart(const Vec3& x, const Vec3& a, const Vec3& b) {
  const Vec3 d = b - a;
  const double len = d.norm();
  if (len == 0.0) return Vec3::Zero();
  const Vec3 u = d / len;
  const Vec3 rho = x - a;
  const double along = rho.dot(u);
  const Vec3 perp = rho - along * u;
  const double d2 = perp.squaredNorm();
  if (d2 < 1e-300) return Vec3::Zero();
  const double span = (len - along) / std::sqrt(d2 + (len - along) * (len - along)) + along / std::sqrt(d2 + along * along);
  return u.cross(perp) * (span / d2);
}

inline double mean_segment_length(const Polyline& c) {
  double l = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) l += (c[next_index(i, c.size())] - c[i]).norm();
  return l / static_cast<double>(c.size());
}

/// Biot-Savart field of one weighted closed curve.
inline Vec3 biot_savart_curve(const Polyline& c, double weight, const Vec3& x) {
  Vec3 a = Vec3::Zero();
  for (std::size_t i = 0; i < c.size(); ++i) a += segment_biot_savart(x, c[i], c[next_index(i, c.size())]);
  return weight * a;
}

/// Coulomb-gauge connection of the string current of the family,
/// A(x) = sum_k W_k oint dy x (x - y) / |x - y|^3. Throws OutsideDomain when x
/// lies closer than one mean segment length to a curve.
inline Vec3 biot_savart_A(const KnotFamily& family, const Vec3& x) {
  Vec3 a = Vec3::Zero();
  for (const auto& c : family.curves) {
    const double guard = mean_segment_length(c.points);
    for (std::size_t i = 0; i < c.points.size(); ++i)
      if (point_segment_distance(x, c.points[i], c.points[next_index(i, c.points.size())]) < guard)
        throw OutsideDomain("biot_savart_A: evaluation point too close to a curve");
    a += biot_savart_curve(c.points, c.winding, x);
  }
  return a;
}

namespace detail {

/// oint A . dx along `path` with 6-point Gauss-Legendre per segment.
template <class Field>
double line_integral(const Polyline& path, Field&& field) {
  static constexpr std::array<double, 6> nodes{-0.9324695142031521, -0.6612093864662645, -0.2386191860831969,
                                               0.2386191860831969,  0.6612093864662645,  0.9324695142031521};
  static constexpr std::array<double, 6> weights{0.1713244923791704, 0.3607615730481386, 0.4679139345726910,
                                                 0.4679139345726910, 0.3607615730481386, 0.1713244923791704};
  return deterministic_sum(path.size(), [&](std::size_t i) {
    const Vec3 a = path[i], b = path[next_index(i, path.size())];
    const Vec3 d = b - a;
    double s = 0.0;
    for (int q = 0; q < 6; ++q) s += weights[q] * field(Vec3(a + 0.5 * (1.0 + nodes[q]) * d)).dot(d);
    return 0.5 * s;
  });
}

}  // namespace detail

/// H = (1/4 pi) sum_k W_k oint_k A . dx with A from biot_savart over the whole
/// family. The self term of each curve is integrated along its framed
/// push-off.
inline HopfEstimate hopf_loop_integral(const KnotFamily& family, const std::vector<FramedCurve>& framings) {
  if (!family.open_curves.empty()) throw OpenCurve("hopf_loop_integral: family contains open curves");
  const std::size_t n = family.curves.size();
  if (framings.size() != n) throw InvalidArgument("hopf_loop_integral: one framing per curve required");
  std::size_t segments = 0;
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& ck = family.curves[k];
    if (!ck.closed) throw OpenCurve("hopf_loop_integral: open curve");
    segments = std::max(segments, ck.points.size());
    const FramedCurve fk = drop_short_segments(framings[k]);
    const double delta = std::min(0.5 * mean_segment_length(fk.base), 0.3 * min_feature(fk.base));
    const Polyline shifted = offset_curve(fk, delta);
    double circulation = detail::line_integral(shifted, [&](const Vec3& x) { return biot_savart_curve(fk.base, ck.winding, x); });
    for (std::size_t m = 0; m < n; ++m) {
      if (m == k) continue;
      const auto& cm = family.curves[m];
      circulation += detail::line_integral(ck.points, [&](const Vec3& x) { return biot_savart_curve(cm.points, cm.winding, x); });
    }
    total += ck.winding * circulation;
  }
  return make_estimate(total / (4.0 * kPi), Method::loop_integral, "segments:" + std::to_string(segments));
}

/// Divergence of biot_savart_A by central differences.
inline double biot_savart_divergence(const KnotFamily& family, const Vec3& x, double h) {
  double div = 0.0;
  for (int a = 0; a < 3; ++a) {
    const Vec3 e = Vec3::Unit(a) * h;
    div += (biot_savart_A(family, x + e)[a] - biot_savart_A(family, x - e)[a]) / (2.0 * h);
  }
  return div;
}

}  // namespace hopf
