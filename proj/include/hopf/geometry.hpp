#pragma once
// Quadrature grids on S3 and R3, the stereographic identification
// R3 + {inf} = S3, and orientation tests against the fixed orientation of S3.
//
// Orientation: a tangent frame (t1, t2, t3) at p is positive when
// det[p, t1, t2, t3] > 0, i.e. the orientation induced from R4 with the
// outward normal placed first.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "hopf/error.hpp"
#include "hopf/types.hpp"

namespace hopf {

/// Signed volume det[p, f1, f2, f3].
inline double oriented_volume(const Vec4& p, const Frame4& frame) {
  Mat4 m;
  m.col(0) = p;
  m.rightCols<3>() = frame;
  return m.determinant();
}

/// +1 when the frame agrees with the orientation of S3 at p, -1 otherwise.
/// Throws NotAFrame when the frame is degenerate (|det| < 1e-10).
inline int chart_jacobian_sign(const Vec4& p, const Frame4& frame) {
  const double d = oriented_volume(p, frame);
  if (std::abs(d) < 1e-10) throw NotAFrame("not a frame: tangent determinant below 1e-10");
  return d > 0 ? 1 : -1;
}

/// Positively oriented orthonormal tangent frame at an arbitrary unit p.
inline Frame4 tangent_frame(const Vec4& p) {
  int skip = 0;
  p.cwiseAbs().maxCoeff(&skip);
  Frame4 f;
  int c = 0;
  for (int a = 0; a < 4; ++a) {
    if (a == skip) continue;
    Vec4 v = Vec4::Unit(a) - p[a] * p;
    for (int b = 0; b < c; ++b) v -= v.dot(f.col(b)) * f.col(b);
    f.col(c++) = v.normalized();
  }
  if (oriented_volume(p, f) < 0) f.col(2) = -f.col(2);
  return f;
}

/// Cell-centred Hopf-coordinate grid on the unit 3-sphere,
///   p = (cos eta cos xi1, cos eta sin xi1, sin eta cos xi2, sin eta sin xi2),
/// eta in (0, pi/2), xi1, xi2 in [0, 2 pi). Weights are exact cell volumes,
/// so they sum to 2 pi^2 at every resolution.
class S3Grid {
 public:
  S3Grid(int n_eta, int n_xi1, int n_xi2) : n_eta_(n_eta), n_xi1_(n_xi1), n_xi2_(n_xi2) {
    if (n_eta < 2 || n_xi1 < 2 || n_xi2 < 2)
      throw InvalidArgument("S3Grid: every node count must be >= 2");
    d_eta_ = 0.5 * kPi / n_eta;
    d_xi1_ = kTwoPi / n_xi1;
    d_xi2_ = kTwoPi / n_xi2;
    const std::size_t n = static_cast<std::size_t>(n_eta) * n_xi1 * n_xi2;
    nodes_.reserve(n);
    weights_.reserve(n);
    for (int i = 0; i < n_eta; ++i) {
      const double lo = std::sin(i * d_eta_), hi = std::sin((i + 1) * d_eta_);
      const double w = 0.5 * (hi * hi - lo * lo) * d_xi1_ * d_xi2_;
      for (int j = 0; j < n_xi1; ++j)
        for (int k = 0; k < n_xi2; ++k) {
          nodes_.push_back(embed(eta(i), xi1(j), xi2(k)));
          weights_.push_back(w);
        }
    }
  }

  explicit S3Grid(int n) : S3Grid(n, n, n) {}

  int n_eta() const { return n_eta_; }
  int n_xi1() const { return n_xi1_; }
  int n_xi2() const { return n_xi2_; }
  std::size_t size() const { return nodes_.size(); }

  double eta(int i) const { return (i + 0.5) * d_eta_; }
  double xi1(int j) const { return (j + 0.5) * d_xi1_; }
  double xi2(int k) const { return (k + 0.5) * d_xi2_; }

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_xi1_ + j) * n_xi2_ + k;
  }
  std::array<int, 3> unflatten(std::size_t idx) const {
    const int k = static_cast<int>(idx % n_xi2_);
    idx /= n_xi2_;
    return {static_cast<int>(idx / n_xi1_), static_cast<int>(idx % n_xi1_), k};
  }

  const std::vector<Vec4>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  const Vec4& node(std::size_t idx) const { return nodes_[idx]; }
  double weight(std::size_t idx) const { return weights_[idx]; }

  /// Largest geodesic step between neighbouring nodes.
  double spacing() const {
    return std::max({d_eta_, d_xi1_, d_xi2_});
  }

  static Vec4 embed(double eta, double xi1, double xi2) {
    const double c = std::cos(eta), s = std::sin(eta);
    return {c * std::cos(xi1), c * std::sin(xi1), s * std::cos(xi2), s * std::sin(xi2)};
  }

  /// Positively oriented orthonormal tangent frame (e_xi1, e_eta, e_xi2).
  Frame4 frame(std::size_t idx) const {
    const auto [i, j, k] = unflatten(idx);
    return hopf_frame(eta(i), xi1(j), xi2(k));
  }

  static Frame4 hopf_frame(double eta, double xi1, double xi2) {
    const double c = std::cos(eta), s = std::sin(eta);
    const double c1 = std::cos(xi1), s1 = std::sin(xi1);
    const double c2 = std::cos(xi2), s2 = std::sin(xi2);
    Frame4 f;
    f.col(0) << -s1, c1, 0.0, 0.0;
    f.col(1) << -s * c1, -s * s1, c * c2, c * s2;
    f.col(2) << 0.0, 0.0, -s2, c2;
    return f;
  }

 private:
  int n_eta_, n_xi1_, n_xi2_;
  double d_eta_, d_xi1_, d_xi2_;
  std::vector<Vec4> nodes_;
  std::vector<double> weights_;
};

/// Rectangular node grid on R3. dims counts nodes per axis (>= 2).
class BoxGrid {
 public:
  BoxGrid(const Vec3& lo, const Vec3& hi, std::array<int, 3> dims) : lo_(lo), hi_(hi), dims_(dims) {
    for (int a = 0; a < 3; ++a) {
      if (dims[a] < 2) throw InvalidArgument("BoxGrid: dims must be >= 2");
      if (!(hi[a] > lo[a])) throw InvalidArgument("BoxGrid: empty interval");
      spacing_[a] = (hi[a] - lo[a]) / (dims[a] - 1);
    }
  }

  /// Cube [-half, half]^3 with n nodes per axis.
  static BoxGrid cube(double half, int n) { return BoxGrid(Vec3::Constant(-half), Vec3::Constant(half), {n, n, n}); }

  const Vec3& lo() const { return lo_; }
  const Vec3& hi() const { return hi_; }
  const std::array<int, 3>& dims() const { return dims_; }
  const Vec3& spacing() const { return spacing_; }
  double max_spacing() const { return spacing_.maxCoeff(); }
  double cell_diagonal() const { return spacing_.norm(); }
  std::size_t size() const { return static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2]; }

  /// Row-major, x fastest.
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * dims_[1] + j) * dims_[0] + i;
  }
  Vec3 node(int i, int j, int k) const {
    return lo_ + Vec3(i * spacing_[0], j * spacing_[1], k * spacing_[2]);
  }
  bool contains(const Vec3& x, double slack = 0.0) const {
    for (int a = 0; a < 3; ++a)
      if (x[a] < lo_[a] - slack || x[a] > hi_[a] + slack) return false;
    return true;
  }

 private:
  Vec3 lo_, hi_;
  std::array<int, 3> dims_;
  Vec3 spacing_;
};

/// Stereographic projection from a pole P of S3 onto R3, identified with the
/// tangent space at -P. The basis of that tangent space is chosen so the map
/// R3 -> S3 preserves orientation.
class Stereographic {
 public:
  /// Default chart: pole (0, 0, -1, 0), so the point at infinity carries the
  /// spinor (0, -1) and the origin maps to (0, 0, 1, 0).
  Stereographic() : Stereographic(Vec4(0.0, 0.0, -1.0, 0.0)) {}

  explicit Stereographic(const Vec4& pole) : pole_(pole.normalized()) {
    const Vec4 south = -pole_;
    // Complete `south` to an orthonormal basis of R4 by Gram-Schmidt over the
    // coordinate axes, skipping the one most aligned with the pole.
    int skip = 0;
    pole_.cwiseAbs().maxCoeff(&skip);
    int c = 0;
    for (int a = 0; a < 4; ++a) {
      if (a == skip) continue;
      Vec4 v = Vec4::Unit(a);
      v -= v.dot(south) * south;
      for (int b = 0; b < c; ++b) v -= v.dot(basis_.col(b)) * basis_.col(b);
      basis_.col(c++) = v.normalized();
    }
    if (oriented_volume(south, basis_) < 0) basis_.col(2) = -basis_.col(2);
  }

  const Vec4& pole() const { return pole_; }
  const Frame4& basis() const { return basis_; }

  Vec4 to_sphere(const Vec3& x) const {
    const double r2 = x.squaredNorm();
    return ((1.0 - r2) / (1.0 + r2)) * (-pole_) + (2.0 / (1.0 + r2)) * (basis_ * x);
  }

  /// Columns are d p / d x_i.
  Frame4 pushforward(const Vec3& x) const {
    const double r2 = x.squaredNorm();
    const double inv = 1.0 / (1.0 + r2);
    const Vec4 radial = -pole_ + basis_ * x;
    Frame4 j;
    for (int i = 0; i < 3; ++i) j.col(i) = -4.0 * x[i] * inv * inv * radial + 2.0 * inv * basis_.col(i);
    return j;
  }

  /// Inverse map. Throws OutsideDomain at the pole (the point at infinity).
  Vec3 from_sphere(const Vec4& p) const {
    const double denom = 1.0 + (-pole_).dot(p);
    if (denom < 1e-14) throw OutsideDomain("stereographic: point at infinity");
    return basis_.transpose() * p / denom;
  }

  /// Differential of the inverse map applied to a tangent vector v at p.
  Vec3 pullback(const Vec4& p, const Vec4& v) const {
    const double denom = 1.0 + (-pole_).dot(p);
    if (denom < 1e-14) throw OutsideDomain("stereographic: point at infinity");
    return basis_.transpose() * v / denom - basis_.transpose() * p * ((-pole_).dot(v) / (denom * denom));
  }

 private:
  Vec4 pole_;
  Frame4 basis_;
};

}  // namespace hopf
