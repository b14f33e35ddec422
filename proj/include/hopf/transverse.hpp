#pragma once
// Two-component transverse coordinates phi of m around a target point of S2:
// stereographic projection from -target onto the equatorial plane, so
// phi = 0 exactly when m = target and |phi| = 1 when m is orthogonal to it.

#include <cmath>

#include "hopf/error.hpp"
#include "hopf/types.hpp"

namespace hopf {

class TransverseChart {
 public:
  explicit TransverseChart(const Vec3& target) : t_(target.normalized()) {
    // e1 x e2 = t, built from the coordinate axis least aligned with t.
    int axis = 0;
    t_.cwiseAbs().minCoeff(&axis);
    e1_ = t_.cross(Vec3::Unit(axis)).normalized();
    e2_ = t_.cross(e1_);
  }

  const Vec3& target() const { return t_; }
  const Vec3& e1() const { return e1_; }
  const Vec3& e2() const { return e2_; }

  Vec2 operator()(const Vec3& m) const {
    const double denom = 1.0 + m.dot(t_);
    if (denom < 1e-10) throw ChartSingularity("transverse chart: m antipodal to target");
    return Vec2(m.dot(e1_), m.dot(e2_)) / denom;
  }

  /// Derivative of phi along dm at m.
  Vec2 derivative(const Vec3& m, const Vec3& dm) const {
    const double denom = 1.0 + m.dot(t_);
    if (denom < 1e-10) throw ChartSingularity("transverse chart: m antipodal to target");
    const double dd = dm.dot(t_);
    return Vec2(dm.dot(e1_), dm.dot(e2_)) / denom - Vec2(m.dot(e1_), m.dot(e2_)) * (dd / (denom * denom));
  }

  /// Inverse projection phi -> m.
  Vec3 to_sphere(const Vec2& phi) const {
    const double r2 = phi.squaredNorm();
    return ((1.0 - r2) * t_ + 2.0 * (phi[0] * e1_ + phi[1] * e2_)) / (1.0 + r2);
  }

 private:
  Vec3 t_, e1_, e2_;
};

/// Free-function form of the chart.
inline Vec2 transverse_coordinates(const Vec3& m, const Vec3& target) { return TransverseChart(target)(m); }

}  // namespace hopf
