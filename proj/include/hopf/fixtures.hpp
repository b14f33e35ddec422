#pragma once
// Parameterized curves with known linking, writhe and twist, used by the
// verification matrix and the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Geometry>

#include "hopf/fields.hpp"
#include "hopf/geometry.hpp"
#include "hopf/links.hpp"

namespace hopf::fixtures {

template <class F>
Polyline sample_curve(F&& f, int segments) {
  Polyline c(segments);
  for (int i = 0; i < segments; ++i) c[i] = f(kTwoPi * i / segments);
  return c;
}

/// Circle of radius r about `center` in the plane spanned by u, v (counterclockwise from u to v).
inline Polyline circle(const Vec3& center, const Vec3& u, const Vec3& v, double r, int segments = 256) {
  return sample_curve([&](double s) { return Vec3(center + r * (std::cos(s) * u + std::sin(s) * v)); }, segments);
}

inline Polyline ellipse(const Vec3& center, const Vec3& u, const Vec3& v, double a, double b, int segments = 256) {
  return sample_curve([&](double s) { return Vec3(center + a * std::cos(s) * u + b * std::sin(s) * v); }, segments);
}

inline Polyline reversed(Polyline c) {
  std::reverse(c.begin(), c.end());
  return c;
}

inline Polyline transformed(const Polyline& c, const Mat3& rot, const Vec3& shift, double scale = 1.0) {
  Polyline out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = scale * (rot * c[i]) + shift;
  return out;
}

inline Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q.toRotationMatrix();
}

/// The Hopf link: unit circle in the xy-plane and the unit circle about
/// (1, 0, 0) in the xz-plane traversed so that Lk = +1.
inline std::pair<Polyline, Polyline> hopf_link(int segments = 256) {
  const Polyline a = circle(Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY(), 1.0, segments);
  const Polyline b = circle(Vec3::UnitX(), Vec3::UnitZ(), Vec3::UnitX(), 1.0, segments);
  return {a, b};
}

struct EllipsePair {
  Polyline a, b;
  int linking;  // known by construction
};

/// Random ellipse pair under a random rigid motion. When `linked`, b passes
/// once through the flat disk bounded by a; otherwise b is lifted clear of
/// a's plane. The traversal direction of b is random.
inline EllipsePair random_ellipse_pair(std::mt19937_64& rng, bool linked, int segments = 256) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double a1 = 0.8 + 0.6 * u01(rng), a2 = 0.5 + 0.4 * u01(rng);
  const double s0 = kTwoPi * u01(rng);
  // Point on a and the inward direction towards a's centre there.
  const Vec3 on_a(a1 * std::cos(s0), a2 * std::sin(s0), 0.0);
  const Vec3 inward = (-on_a).normalized();
  const double r1 = 0.25 + 0.2 * u01(rng), r2 = 0.3 + 0.5 * u01(rng);
  const bool flip = u01(rng) < 0.5;
  const Vec3 w = flip ? Vec3(-Vec3::UnitZ()) : Vec3(Vec3::UnitZ());
  Vec3 center = on_a;
  if (!linked) center += Vec3(0.0, 0.0, (r2 + 0.3 + u01(rng)) * (u01(rng) < 0.5 ? 1.0 : -1.0));
  EllipsePair out;
  out.a = ellipse(Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY(), a1, a2, segments);
  out.b = ellipse(center, inward, w, r1, r2, segments);
  // b meets the plane of a at on_a +- r1 inward; the inner point lies in a's
  // disk and b moves along w there, so Lk = +1 for w = +z.
  out.linking = linked ? (flip ? -1 : 1) : 0;
  const Mat3 rot = random_rotation(rng);
  std::normal_distribution<double> n(0.0, 1.0);
  const Vec3 shift(n(rng), n(rng), n(rng));
  out.a = transformed(out.a, rot, shift);
  out.b = transformed(out.b, rot, shift);
  return out;
}

/// Unit circle in the xy-plane whose framing turns n times about the tangent
/// (positively, in the sense of the twist integral).
inline FramedCurve twisted_unknot(int turns, int segments = 256) {
  Polyline base = circle(Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY(), 1.0, segments);
  std::vector<Vec3> f(segments);
  for (int i = 0; i < segments; ++i) {
    const double s = kTwoPi * i / segments;
    const Vec3 radial(std::cos(s), std::sin(s), 0.0);
    f[i] = std::cos(turns * s) * radial - std::sin(turns * s) * Vec3::UnitZ();
  }
  return make_framed(std::move(base), std::move(f));
}

/// Nearly planar figure-eight: one crossing, |Wr| close to 1.
inline Polyline flat_figure_eight(double lift = 0.005, int segments = 512) {
  return sample_curve([&](double s) { return Vec3(std::cos(s), 0.5 * std::sin(2.0 * s), lift * std::sin(s)); },
                      segments);
}

/// (p, q) torus knot on the torus with radii R, r.
inline Polyline torus_knot(int p, int q, double R = 2.0, double r = 0.8, int segments = 512) {
  return sample_curve(
      [&](double s) {
        const double rho = R + r * std::cos(q * s);
        return Vec3(rho * std::cos(p * s), rho * std::sin(p * s), r * std::sin(q * s));
      },
      segments);
}

/// Closed-form fiber of the hopf preset over `target`: the circle
/// { exp(i a) z0 } of S3, read in the stereographic chart.
inline Polyline hopf_fiber(const Vec3& target, int segments = 256) {
  const Spinor z0 = spinor_for_direction(target.normalized());
  const Stereographic chart;
  return sample_curve(
      [&](double a) { return chart.from_sphere(unit4_from_spinor(std::exp(Complex(0.0, a)) * z0)); }, segments);
}

}  // namespace hopf::fixtures
