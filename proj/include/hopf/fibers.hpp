#pragma once
// Preimage knot family of a target point on S2.
//
// The zero set of the transverse coordinates phi (two real components) is
// located on every face of a box grid by bilinear root finding, corrected by
// minimum-norm Newton steps (which move only in the plane transverse to the
// tangent D = grad phi^1 x grad phi^2), and chained cell by cell: each
// crossing enters exactly one cell and leaves exactly one cell along D.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hopf/error.hpp"
#include "hopf/fields.hpp"
#include "hopf/gauge.hpp"
#include "hopf/geometry.hpp"
#include "hopf/parallel.hpp"
#include "hopf/transverse.hpp"
#include "hopf/types.hpp"

namespace hopf {

struct FiberCurve {
  std::vector<Vec3> points;  // closed curves do not repeat the first point
  bool closed = true;
  int winding = 1;
  Vec3 target = Vec3(0.0, 0.0, 1.0);

  std::size_t segments() const { return closed ? points.size() : (points.empty() ? 0 : points.size() - 1); }
  double length() const {
    double l = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) l += (points[i + 1] - points[i]).norm();
    if (closed && points.size() > 1) l += (points.front() - points.back()).norm();
    return l;
  }
};

struct ExtractionMetadata {
  Vec3 lo = Vec3::Zero(), hi = Vec3::Zero();
  std::array<int, 3> dims{0, 0, 0};
  double probe_radius = 0.0;
  int resample_segments = 0;
  int jitter_attempts = 0;
};

struct KnotFamily {
  std::vector<FiberCurve> curves;       // closed curves
  std::vector<FiberCurve> open_curves;  // chains that hit the domain boundary
  int rejected_short = 0;
  Vec3 target = Vec3(0.0, 0.0, 1.0);
  ExtractionMetadata metadata;
  std::vector<std::string> warnings;
};

struct ExtractionOptions {
  int newton_iterations = 30;
  double newton_tolerance = 1e-12;
  int min_segments = 6;
  int resample_segments = 256;  // 0 keeps the raw crossing points
  double probe_factor = 1.5;    // probe radius in grid spacings
  double regularity = 1e-6;     // |D| / (|grad phi1| |grad phi2|) below this is non-regular
  double collapse = 0.1;        // |D| at a root over |D| at its face point below this is non-regular
  int jitter_attempts = 8;
  double jitter_angle = 0.01;   // first jitter step in radians, doubled on every retry
};

/// phi, its gradient rows and the tangent D at a point of R3.
struct PhiJet {
  Vec2 phi;
  Eigen::Matrix<double, 2, 3> grad;
  Vec3 tangent() const { return Vec3(grad.row(0)).cross(Vec3(grad.row(1))); }
};

inline PhiJet phi_jet(const SpinorField& field, const TransverseChart& chart, const Vec3& x) {
  const SpinorJet j = field.jet_r3(x);
  const Vec3 m = hopf_projection(j.z);
  PhiJet out;
  out.phi = chart(m);
  for (int i = 0; i < 3; ++i) out.grad.col(i) = chart.derivative(m, hopf_projection_derivative(j.z, j.d[i]));
  return out;
}

/// Moves x onto phi = 0 with minimum-norm Newton steps. Returns false on
/// failure; steps are capped at `max_step`.
inline bool project_to_fiber(const SpinorField& field, const TransverseChart& chart, Vec3& x, double max_step,
                             int iterations = 30, double tolerance = 1e-12) {
  for (int it = 0; it < iterations; ++it) {
    PhiJet pj;
    try {
      pj = phi_jet(field, chart, x);
    } catch (const Error&) {
      return false;
    }
    if (pj.phi.norm() < tolerance) return true;
    const Eigen::Matrix2d jjt = pj.grad * pj.grad.transpose();
    if (std::abs(jjt.determinant()) < 1e-300) return false;
    Vec3 step = -pj.grad.transpose() * jjt.ldlt().solve(pj.phi);
    const double len = step.norm();
    if (!std::isfinite(len)) return false;
    if (len > max_step) step *= max_step / len;
    x += step;
  }
  try {
    return phi_jet(field, chart, x).phi.norm() < 1e3 * tolerance;
  } catch (const Error&) {
    return false;
  }
}

/// Winding of the angle of phi around a circle of `radius` in the plane
/// transverse to `tangent`, traversed counterclockwise about the tangent.
/// Retries at half and double radius when phi vanishes on the circle.
template <class Phi>
int winding_number(Phi&& phi, const Vec3& point, const Vec3& tangent, double radius, int samples = 64) {
  const Vec3 t = tangent.normalized();
  int axis = 0;
  t.cwiseAbs().minCoeff(&axis);
  const Vec3 e1 = t.cross(Vec3::Unit(axis)).normalized();
  const Vec3 e2 = t.cross(e1);
  for (double r : {radius, 0.5 * radius, 2.0 * radius}) {
    std::vector<Vec2> vals(samples);
    double scale = 0.0;
    for (int s = 0; s < samples; ++s) {
      const double a = kTwoPi * s / samples;
      vals[s] = phi(Vec3(point + r * (std::cos(a) * e1 + std::sin(a) * e2)));
      scale = std::max(scale, vals[s].norm());
    }
    bool vanishing = scale == 0.0;
    for (const Vec2& v : vals) vanishing = vanishing || v.norm() < 1e-9 * scale;
    if (vanishing) continue;
    double total = 0.0;
    bool coarse = false;
    for (int s = 0; s < samples; ++s) {
      const Vec2& a = vals[s];
      const Vec2& b = vals[(s + 1) % samples];
      const double step = std::atan2(a[0] * b[1] - a[1] * b[0], a.dot(b));
      if (std::abs(step) > 0.5 * kPi) coarse = true;
      total += step;
    }
    if (coarse) continue;
    return static_cast<int>(std::lround(total / kTwoPi));
  }
  throw AmbiguousWinding("winding_number: phi vanishes on or is under-resolved along every probe circle");
}

inline int winding_number(const SpinorField& field, const Vec3& target, const Vec3& point, const Vec3& tangent,
                          double radius, int samples = 64) {
  const TransverseChart chart(target);
  return winding_number([&](const Vec3& x) { return chart(hopf_projection(field.jet_r3(x).z)); }, point, tangent,
                        radius, samples);
}

// --- topological current --------------------------------------------------------

/// Smooth current j^i = (1/8 pi) eps^{ijk} B_jk in the R3 chart.
inline Vec3 current_at(const SpinorField& field, const Vec3& x) {
  return curvature_dual(curvature_spinor(field.jet_r3(x))) / (4.0 * kPi);
}

/// Divergence of the smooth current by central differences of step h.
inline double current_divergence(const SpinorField& field, const Vec3& x, double h) {
  double div = 0.0;
  for (int a = 0; a < 3; ++a) {
    const Vec3 e = Vec3::Unit(a) * h;
    div += (current_at(field, x + e)[a] - current_at(field, x - e)[a]) / (2.0 * h);
  }
  return div;
}

/// String current delta^2(phi) D with the delta function replaced by a
/// normalized Gaussian of width `width` in phi space. Its support collapses
/// onto the fibers of `target` as width -> 0.
inline Vec3 string_current_at(const SpinorField& field, const Vec3& target, const Vec3& x, double width) {
  const PhiJet pj = phi_jet(field, TransverseChart(target), x);
  const double delta = std::exp(-pj.phi.squaredNorm() / (width * width)) / (kPi * width * width);
  return delta * pj.tangent();
}

/// Flux of the string current through a disk of `radius` centred at `center`
/// with unit normal `normal` (midpoint rule in polar coordinates).
inline double string_current_flux(const SpinorField& field, const Vec3& target, const Vec3& center,
                                   const Vec3& normal, double radius, double width, int n_radial = 64,
                                   int n_angular = 64) {
  const Vec3 t = normal.normalized();
  int axis = 0;
  t.cwiseAbs().minCoeff(&axis);
  const Vec3 e1 = t.cross(Vec3::Unit(axis)).normalized();
  const Vec3 e2 = t.cross(e1);
  const double dr = radius / n_radial, da = kTwoPi / n_angular;
  double flux = 0.0;
  for (int i = 0; i < n_radial; ++i) {
    const double r = (i + 0.5) * dr;
    for (int k = 0; k < n_angular; ++k) {
      const double a = (k + 0.5) * da;
      const Vec3 x = center + r * (std::cos(a) * e1 + std::sin(a) * e2);
      flux += string_current_at(field, target, x, width).dot(t) * r * dr * da;
    }
  }
  return flux;
}

// --- extraction ---------------------------------------------------------------

namespace detail {

struct FaceRoot {
  double s, t;
};

/// Zeros of the bilinear interpolant of corner values p00, p10, p01, p11 on
/// [0,1) x [0,1).
inline std::vector<FaceRoot> bilinear_roots(const Vec2& p00, const Vec2& p10, const Vec2& p01, const Vec2& p11) {
  std::vector<FaceRoot> roots;
  for (int c = 0; c < 2; ++c) {
    const double mn = std::min({p00[c], p10[c], p01[c], p11[c]});
    const double mx = std::max({p00[c], p10[c], p01[c], p11[c]});
    if (mn > 0.0 || mx < 0.0) return roots;
  }
  const Vec2 a = p00, b = p10 - p00, c = p01 - p00, d = p11 - p10 - p01 + p00;
  const double qa = b[1] * d[0] - d[1] * b[0];
  const double qb = a[1] * d[0] + b[1] * c[0] - c[1] * b[0] - d[1] * a[0];
  const double qc = a[1] * c[0] - c[1] * a[0];
  std::vector<double> ss;
  const double scale = std::abs(qa) + std::abs(qb) + std::abs(qc);
  if (scale == 0.0) return roots;
  if (std::abs(qa) < 1e-12 * scale) {
    if (std::abs(qb) > 0.0) ss.push_back(-qc / qb);
  } else {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0) return roots;
    const double sq = std::sqrt(disc);
    const double q = -0.5 * (qb + std::copysign(sq, qb));
    ss.push_back(q / qa);
    if (q != 0.0) ss.push_back(qc / q);
  }
  for (double s : ss) {
    if (!(s >= 0.0 && s < 1.0)) continue;
    const double d0 = c[0] + d[0] * s, d1 = c[1] + d[1] * s;
    double t;
    if (std::abs(d0) >= std::abs(d1)) {
      if (d0 == 0.0) continue;
      t = -(a[0] + b[0] * s) / d0;
    } else {
      t = -(a[1] + b[1] * s) / d1;
    }
    if (!(t >= 0.0 && t < 1.0)) continue;
    const Vec2 v = a + b * s + c * t + d * s * t;
    const double mag = std::max({p00.norm(), p10.norm(), p01.norm(), p11.norm()});
    if (v.norm() > 1e-8 * mag) continue;
    bool dup = false;
    for (const auto& r : roots) dup = dup || (std::abs(r.s - s) < 1e-12 && std::abs(r.t - t) < 1e-12);
    if (!dup) roots.push_back({s, t});
  }
  return roots;
}

struct Crossing {
  Vec3 position;
  Vec3 tangent;
  std::int64_t from_cell = -1;  // cell the curve leaves through this face
  std::int64_t to_cell = -1;    // cell the curve enters
};

}  // namespace detail

/// Resamples a closed fiber to `segments` points equally spaced in arc length
/// and projects each back onto the fiber.
inline FiberCurve refine_fiber(const SpinorField& field, const FiberCurve& curve, int segments, double max_step) {
  if (!curve.closed || curve.points.size() < 3 || segments <= 0) return curve;
  const TransverseChart chart(curve.target);
  FiberCurve out = curve;
  for (int pass = 0; pass < 2; ++pass) {
    const auto& pts = out.points;
    const std::size_t n = pts.size();
    std::vector<double> cum(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) cum[i + 1] = cum[i] + (pts[(i + 1) % n] - pts[i]).norm();
    const double total = cum[n];
    std::vector<Vec3> fresh(segments);
    std::size_t seg = 0;
    for (int k = 0; k < segments; ++k) {
      const double s = total * k / segments;
      while (seg + 1 < n && cum[seg + 1] <= s) ++seg;
      const double len = cum[seg + 1] - cum[seg];
      const double u = len > 0 ? (s - cum[seg]) / len : 0.0;
      Vec3 x = pts[seg] + u * (pts[(seg + 1) % n] - pts[seg]);
      Vec3 y = x;
      if (project_to_fiber(field, chart, y, max_step)) x = y;
      fresh[k] = x;
    }
    out.points = std::move(fresh);
  }
  return out;
}

/// Extracts the closed preimage curves of `target` inside the box. Throws
/// NonRegularTarget when a crossing has a rank-deficient transverse Jacobian.
inline KnotFamily extract_fibers_once(const SpinorField& field, const BoxGrid& grid, const Vec3& target_in,
                                      const ExtractionOptions& opt = {}) {
  const Vec3 target = target_in.normalized();
  const TransverseChart chart(target);
  const auto& dims = grid.dims();
  KnotFamily family;
  family.target = target;
  family.metadata.lo = grid.lo();
  family.metadata.hi = grid.hi();
  family.metadata.dims = dims;
  family.metadata.probe_radius = opt.probe_factor * grid.max_spacing();
  family.metadata.resample_segments = opt.resample_segments;

  // phi at nodes; nodes where m is (nearly) antipodal to the target are invalid.
  struct NodePhi {
    Vec2 phi;
    bool valid;
  };
  const auto nodes = parallel_map<NodePhi>(grid.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx % dims[0]);
    const int j = static_cast<int>((idx / dims[0]) % dims[1]);
    const int k = static_cast<int>(idx / (static_cast<std::size_t>(dims[0]) * dims[1]));
    try {
      const Vec2 p = chart(hopf_projection(field.jet_r3(grid.node(i, j, k)).z));
      return NodePhi{p, std::isfinite(p.squaredNorm()) && p.norm() < 1e6};
    } catch (const Error&) {
      return NodePhi{Vec2::Zero(), false};
    }
  });

  const std::array<int, 3> cdims{dims[0] - 1, dims[1] - 1, dims[2] - 1};
  auto cell_id = [&](std::array<int, 3> c) -> std::int64_t {
    for (int a = 0; a < 3; ++a)
      if (c[a] < 0 || c[a] >= cdims[a]) return -1;
    return (static_cast<std::int64_t>(c[2]) * cdims[1] + c[1]) * cdims[0] + c[0];
  };

  std::vector<detail::Crossing> crossings;
  const double max_step = grid.cell_diagonal();
  for (int axis = 0; axis < 3; ++axis) {
    const int b = (axis + 1) % 3, c = (axis + 2) % 3;
    for (int k = 0; k < dims[2]; ++k)
      for (int j = 0; j < dims[1]; ++j)
        for (int i = 0; i < dims[0]; ++i) {
          std::array<int, 3> base{i, j, k};
          if (base[b] >= dims[b] - 1 || base[c] >= dims[c] - 1) continue;
          auto corner = [&](int db, int dc) -> const NodePhi& {
            std::array<int, 3> q = base;
            q[b] += db;
            q[c] += dc;
            return nodes[grid.index(q[0], q[1], q[2])];
          };
          const NodePhi &n00 = corner(0, 0), &n10 = corner(1, 0), &n01 = corner(0, 1), &n11 = corner(1, 1);
          if (!(n00.valid && n10.valid && n01.valid && n11.valid)) continue;
          const auto roots = detail::bilinear_roots(n00.phi, n10.phi, n01.phi, n11.phi);
          for (const auto& r : roots) {
            Vec3 x = grid.node(base[0], base[1], base[2]);
            x += r.s * grid.spacing()[b] * Vec3::Unit(b) + r.t * grid.spacing()[c] * Vec3::Unit(c);
            // A bilinear root that Newton cannot confirm nearby is a sign change
            // across the chart pole (m = -target), not a zero of phi.
            Vec3 y = x;
            if (!project_to_fiber(field, chart, y, max_step, opt.newton_iterations, opt.newton_tolerance) ||
                (y - x).norm() >= max_step)
              continue;
            detail::Crossing cr;
            cr.position = y;
            const PhiJet pj = phi_jet(field, chart, cr.position);
            cr.tangent = pj.tangent();
            const double g = pj.grad.row(0).norm() * pj.grad.row(1).norm();
            if (!(cr.tangent.norm() > opt.regularity * g) || g == 0.0)
              throw NonRegularTarget("extract_fibers: rank-deficient transverse Jacobian");
            // At a multiple zero both gradients vanish together, so the ratio
            // above stays O(1); |D| instead collapses between the face point
            // and the converged root. The same happens when a jittered target
            // splits a multiple zero into strands closer than a cell.
            const Vec3 face_tangent = phi_jet(field, chart, x).tangent();
            if (cr.tangent.norm() < opt.collapse * face_tangent.norm())
              throw NonRegularTarget("extract_fibers: transverse Jacobian degenerates on the fiber");
            // Use the tangent at the face point to decide the crossing direction.
            const double flow = face_tangent[axis];
            std::array<int, 3> low = base, high = base;
            low[axis] -= 1;
            const std::int64_t below = cell_id(low), above = cell_id(high);
            if (flow > 0) {
              cr.from_cell = below;
              cr.to_cell = above;
            } else {
              cr.from_cell = above;
              cr.to_cell = below;
            }
            crossings.push_back(cr);
          }
        }
  }

  // Pair the entries and exits of every cell.
  std::map<std::int64_t, std::vector<std::size_t>> entries, exits;
  for (std::size_t n = 0; n < crossings.size(); ++n) {
    if (crossings[n].to_cell >= 0) entries[crossings[n].to_cell].push_back(n);
    if (crossings[n].from_cell >= 0) exits[crossings[n].from_cell].push_back(n);
  }
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> next(crossings.size(), none), prev(crossings.size(), none);
  for (auto& [cell, in] : entries) {
    auto it = exits.find(cell);
    if (it == exits.end()) continue;
    std::vector<std::size_t> out = it->second;
    for (std::size_t e : in) {
      std::size_t best = none;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t o : out) {
        if (prev[o] != none || o == e) continue;
        const double d = (crossings[o].position - crossings[e].position).norm();
        if (d < best_d) {
          best_d = d;
          best = o;
        }
      }
      if (best != none) {
        next[e] = best;
        prev[best] = e;
      }
    }
  }

  // Chains of crossing indices. A chain end is "interior" when it stops at a
  // cell that exists but has no matching crossing, i.e. not on the boundary.
  struct Chain {
    std::vector<std::size_t> idx;
    bool closed = false;
  };
  std::vector<bool> used(crossings.size(), false);
  std::vector<Chain> chains;
  auto walk = [&](std::size_t start, bool closed) {
    Chain ch;
    ch.closed = closed;
    for (std::size_t n = start; n != none && !used[n]; n = next[n]) {
      used[n] = true;
      ch.idx.push_back(n);
    }
    chains.push_back(std::move(ch));
  };
  for (std::size_t n = 0; n < crossings.size(); ++n)
    if (prev[n] == none && !used[n]) walk(n, false);
  for (std::size_t n = 0; n < crossings.size(); ++n)
    if (!used[n]) walk(n, true);

  // A root missed where the fiber grazes a face leaves a gap of about one
  // cell. Bridge each interior end to the nearest interior start within two
  // cell diagonals; a chain bridged to itself closes.
  auto start_inside = [&](const Chain& c) { return !c.closed && crossings[c.idx.front()].from_cell >= 0; };
  auto end_inside = [&](const Chain& c) { return !c.closed && crossings[c.idx.back()].to_cell >= 0; };
  const double bridge = 2.0 * grid.cell_diagonal();
  int bridged = 0;
  for (bool joined = true; joined;) {
    joined = false;
    for (std::size_t a = 0; a < chains.size() && !joined; ++a) {
      if (chains[a].idx.empty() || !end_inside(chains[a])) continue;
      const Vec3& tail = crossings[chains[a].idx.back()].position;
      std::size_t best = none;
      double best_d = bridge;
      for (std::size_t b = 0; b < chains.size(); ++b) {
        if (chains[b].idx.empty() || !start_inside(chains[b])) continue;
        const double d = (crossings[chains[b].idx.front()].position - tail).norm();
        if (d < best_d) {
          best_d = d;
          best = b;
        }
      }
      if (best == none) continue;
      ++bridged;
      joined = true;
      if (best == a) {
        chains[a].closed = true;
      } else {
        chains[a].idx.insert(chains[a].idx.end(), chains[best].idx.begin(), chains[best].idx.end());
        chains[best].idx.clear();
      }
    }
  }

  std::vector<FiberCurve> raw;
  std::vector<bool> broken;
  for (const Chain& ch : chains) {
    if (ch.idx.empty()) continue;
    FiberCurve curve;
    curve.target = target;
    curve.closed = ch.closed;
    for (std::size_t n : ch.idx) curve.points.push_back(crossings[n].position);
    broken.push_back(start_inside(ch) || end_inside(ch));
    raw.push_back(std::move(curve));
  }
  if (bridged > 0)
    family.warnings.push_back("bridged " + std::to_string(bridged) + " gap(s) of at most two cells in the traced fibers");

  const auto phi_of = [&](const Vec3& x) { return chart(hopf_projection(field.jet_r3(x).z)); };
  for (std::size_t r = 0; r < raw.size(); ++r) {
    FiberCurve& curve = raw[r];
    if (static_cast<int>(curve.segments()) < opt.min_segments) {
      ++family.rejected_short;
      continue;
    }
    if (broken[r])
      throw NonRegularTarget("extract_fibers: a fiber breaks off inside the box (unresolved strands)");
    if (!curve.closed) {
      curve.winding = 0;
      family.open_curves.push_back(std::move(curve));
      continue;
    }
    // Winding: majority over a few probe sites.
    std::map<int, int> votes;
    const std::size_t n = curve.points.size();
    for (std::size_t s = 0; s < 4; ++s) {
      const std::size_t i = s * n / 4;
      const Vec3 tan = curve.points[(i + 1) % n] - curve.points[(i + n - 1) % n];
      try {
        ++votes[winding_number(phi_of, curve.points[i], tan, family.metadata.probe_radius)];
      } catch (const AmbiguousWinding&) {
      }
    }
    if (votes.empty()) throw NonRegularTarget("extract_fibers: no probe circle resolved the winding");
    // Zeros of phi at a regular value are simple, so W = +-1 on every probe.
    // Anything else is a multiple zero or strands closer than the probe radius.
    if (votes.size() != 1 || std::abs(votes.begin()->first) != 1)
      throw NonRegularTarget("extract_fibers: winding is not +-1 on every probe (multiple zero or unresolved strands)");
    curve.winding = votes.begin()->first;
    if (opt.resample_segments > 0 && static_cast<int>(curve.points.size()) < opt.resample_segments)
      curve = refine_fiber(field, curve, opt.resample_segments, grid.max_spacing());
    family.curves.push_back(std::move(curve));
  }
  if (!family.open_curves.empty())
    family.warnings.push_back(std::to_string(family.open_curves.size()) +
                              " open curve(s) reached the domain boundary; excluded from linking sums");
  if (family.rejected_short > 0)
    family.warnings.push_back(std::to_string(family.rejected_short) + " curve(s) shorter than " +
                              std::to_string(opt.min_segments) + " segments rejected as noise");
  return family;
}

/// Rotates `target` by `angle` towards the first axis of its transverse chart.
inline Vec3 perturb_target(const Vec3& target, double angle, double azimuth = 0.0) {
  const TransverseChart chart(target);
  const double r = std::tan(0.5 * angle);
  return chart.to_sphere(Vec2(r * std::cos(azimuth), r * std::sin(azimuth)));
}

/// extract_fibers_once with a deterministic jitter sequence for non-regular
/// targets: the k-th retry tilts the target by jitter_angle * 2^(k-1) at a
/// golden-angle azimuth, so strands split off a multiple zero separate by
/// more than a cell within a few attempts.
inline KnotFamily extract_fibers(const SpinorField& field, const BoxGrid& grid, const Vec3& target,
                                 const ExtractionOptions& opt = {}) {
  for (int attempt = 0;; ++attempt) {
    const Vec3 t = attempt == 0 ? target.normalized() : perturb_target(target, std::ldexp(opt.jitter_angle, attempt - 1), 2.399963 * attempt);
    try {
      KnotFamily f = extract_fibers_once(field, grid, t, opt);
      f.metadata.jitter_attempts = attempt;
      if (attempt > 0) f.warnings.push_back("target jittered " + std::to_string(attempt) + " time(s) to reach a regular value");
      return f;
    } catch (const NonRegularTarget&) {
      if (attempt >= opt.jitter_attempts) throw;
    }
  }
}

}  // namespace hopf
