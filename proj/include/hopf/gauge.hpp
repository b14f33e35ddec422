#pragma once
// Canonical connection A_i = -2i z^dagger d_i z, Hopf curvature B_ij in its
// three equivalent forms, and U(1) gauge transformations.

#include <array>
#include <cmath>

#include "hopf/fields.hpp"
#include "hopf/transverse.hpp"
#include "hopf/types.hpp"

namespace hopf {

struct GaugeSample {
  Vec3 A = Vec3::Zero();
  Mat3 B = Mat3::Zero();
};

enum class CurvatureForm { spinor, m, mermin_ho };

/// A_i from a jet. `imag_residue`, when given, receives max_i |Im(-2i z^dagger d_i z)|.
inline Vec3 connection(const SpinorJet& j, double* imag_residue = nullptr) {
  Vec3 a;
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Complex w = (j.z.adjoint() * j.d[i])(0);
    const Complex v = Complex(0.0, -2.0) * w;
    a[i] = v.real();
    worst = std::max(worst, std::abs(v.imag()));
  }
  if (imag_residue) *imag_residue = worst;
  return a;
}

inline Vec3 connection(const SpinorField& field, const Vec4& p, const Frame4& frame) {
  return connection(field.jet(p, frame));
}

inline Vec3 connection_r3(const SpinorField& field, const Vec3& x) { return connection(field.jet_r3(x)); }

/// B_ij = -2i (d_i z^dagger d_j z - d_j z^dagger d_i z) = 4 Im(d_i z^dagger d_j z).
inline Mat3 curvature_spinor(const SpinorJet& j) {
  Mat3 b = Mat3::Zero();
  for (int r = 0; r < 3; ++r)
    for (int c = r + 1; c < 3; ++c) {
      const double v = 4.0 * (j.d[r].adjoint() * j.d[c])(0).imag();
      b(r, c) = v;
      b(c, r) = -v;
    }
  return b;
}

/// B_ij = m . (d_i m x d_j m).
inline Mat3 curvature_m(const SpinorJet& j) {
  const Vec3 m = hopf_projection(j.z);
  std::array<Vec3, 3> dm;
  for (int i = 0; i < 3; ++i) dm[i] = hopf_projection_derivative(j.z, j.d[i]);
  Mat3 b = Mat3::Zero();
  for (int r = 0; r < 3; ++r)
    for (int c = r + 1; c < 3; ++c) {
      const double v = m.dot(dm[r].cross(dm[c]));
      b(r, c) = v;
      b(c, r) = -v;
    }
  return b;
}

/// Curvature through the transverse coordinates phi of m around `target`:
/// B_ij = 4 / (1 + |phi|^2)^2 eps_ab d_i phi^a d_j phi^b.
inline Mat3 curvature_mermin_ho(const SpinorJet& j, const TransverseChart& chart) {
  const Vec3 m = hopf_projection(j.z);
  const Vec2 phi = chart(m);
  std::array<Vec2, 3> dphi;
  for (int i = 0; i < 3; ++i) dphi[i] = chart.derivative(m, hopf_projection_derivative(j.z, j.d[i]));
  const double s = 1.0 + phi.squaredNorm();
  const double scale = 4.0 / (s * s);
  Mat3 b = Mat3::Zero();
  for (int r = 0; r < 3; ++r)
    for (int c = r + 1; c < 3; ++c) {
      const double v = scale * (dphi[r][0] * dphi[c][1] - dphi[c][0] * dphi[r][1]);
      b(r, c) = v;
      b(c, r) = -v;
    }
  return b;
}

/// Dispatches on `form`. The Mermin-Ho form needs a target on S2 away from
/// -m and throws ChartSingularity otherwise.
inline Mat3 curvature(const SpinorJet& j, CurvatureForm form, const Vec3& target = Vec3(0.0, 0.0, 1.0)) {
  switch (form) {
    case CurvatureForm::spinor: return curvature_spinor(j);
    case CurvatureForm::m: return curvature_m(j);
    case CurvatureForm::mermin_ho: return curvature_mermin_ho(j, TransverseChart(target));
  }
  return curvature_spinor(j);
}

inline Mat3 curvature(const SpinorField& field, const Vec4& p, const Frame4& frame, CurvatureForm form,
                      const Vec3& target = Vec3(0.0, 0.0, 1.0)) {
  return curvature(field.jet(p, frame), form, target);
}

inline Mat3 curvature_r3(const SpinorField& field, const Vec3& x, CurvatureForm form = CurvatureForm::spinor,
                         const Vec3& target = Vec3(0.0, 0.0, 1.0)) {
  return curvature(field.jet_r3(x), form, target);
}

inline GaugeSample gauge_sample(const SpinorJet& j) { return {connection(j), curvature_spinor(j)}; }

/// Dual vector b^i = (1/2) eps^{ijk} B_jk.
inline Vec3 curvature_dual(const Mat3& b) { return {b(1, 2), b(2, 0), b(0, 1)}; }

/// A'_i = A_i + d_i psi along the frame at p. Only real psi keeps A real.
inline Vec3 transform_connection(const Vec3& a, const GaugeFunction& psi, const Vec4& p, const Frame4& frame) {
  const Vec4 g = psi.gradient(p);
  return a + Vec3(g.dot(frame.col(0)), g.dot(frame.col(1)), g.dot(frame.col(2)));
}

/// Spinor-level gauge transformation: z -> exp(i psi / 2) z, so A -> A + d psi
/// while m and B are unchanged.
inline SpinorField gauge_transform(const SpinorField& field, GaugeFunction psi) {
  return field.gauge_transformed(std::move(psi));
}

/// eps^{ijk} d_i B_jk at x in the R3 chart by central differences of step h.
inline double closedness_residual(const SpinorField& field, const Vec3& x, double h) {
  double div = 0.0;
  for (int a = 0; a < 3; ++a) {
    const Vec3 e = Vec3::Unit(a) * h;
    const Vec3 plus = curvature_dual(curvature_r3(field, x + e));
    const Vec3 minus = curvature_dual(curvature_r3(field, x - e));
    div += (plus[a] - minus[a]) / (2.0 * h);
  }
  return 2.0 * div;
}

}  // namespace hopf
