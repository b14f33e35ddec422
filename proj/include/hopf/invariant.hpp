#pragma once
// Hopf invariant by the field-theoretic routes: the Whitehead integral
// (1/16 pi^2) int A ^ dA, the degree integral of the Gauss map z : S3 -> S3,
// and the signed preimage count of a regular value of that map.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "hopf/error.hpp"
#include "hopf/fields.hpp"
#include "hopf/gauge.hpp"
#include "hopf/geometry.hpp"
#include "hopf/parallel.hpp"
#include "hopf/types.hpp"

namespace hopf {

enum class Method { whitehead, degree_integral, preimage_count, link_sum, loop_integral };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::whitehead: return "whitehead";
    case Method::degree_integral: return "degree_integral";
    case Method::preimage_count: return "preimage_count";
    case Method::link_sum: return "link_sum";
    case Method::loop_integral: return "loop_integral";
  }
  return "unknown";
}

/// Estimates whose distance to the nearest integer exceeds this are flagged.
inline constexpr double kRoundingThreshold = 0.1;

struct HopfEstimate {
  double value = 0.0;
  Method method = Method::whitehead;
  long rounded = 0;
  double residual = 0.0;
  bool converged = true;
  std::string resolution;
};

inline HopfEstimate make_estimate(double value, Method method, std::string resolution,
                                  double threshold = kRoundingThreshold) {
  HopfEstimate e;
  e.value = value;
  e.method = method;
  e.rounded = std::lround(value);
  e.residual = std::abs(value - static_cast<double>(e.rounded));
  e.converged = std::isfinite(value) && e.residual <= threshold;
  e.resolution = std::move(resolution);
  return e;
}

inline std::string grid_label(const S3Grid& g) {
  return "s3:" + std::to_string(g.n_eta()) + "x" + std::to_string(g.n_xi1()) + "x" + std::to_string(g.n_xi2());
}

/// (A ^ B)(t1, t2, t3) / 16 pi^2 in an oriented orthonormal frame.
inline double whitehead_density(const SpinorJet& j) {
  const Vec3 a = connection(j);
  const Vec3 b = curvature_dual(curvature_spinor(j));
  return a.dot(b) / (16.0 * kPi * kPi);
}

/// det[l, dl_1, dl_2, dl_3] / 2 pi^2: the Gauss-map volume density, equal to
/// (1/12 pi^2) eps_abcd l^a dl^b dl^c dl^d.
inline double degree_density(const SpinorJet& j) {
  Mat4 m;
  m.col(0) = unit4_from_spinor(j.z);
  for (int i = 0; i < 3; ++i) m.col(i + 1) = unit4_from_spinor(j.d[i]);
  return m.determinant() / kS3Volume;
}

inline double whitehead_value(const SpinorField& field, const S3Grid& grid) {
  return deterministic_sum(grid.size(), [&](std::size_t i) {
    return grid.weight(i) * whitehead_density(field.jet(grid.node(i), grid.frame(i)));
  });
}

inline HopfEstimate hopf_whitehead(const SpinorField& field, const S3Grid& grid) {
  return make_estimate(whitehead_value(field, grid), Method::whitehead, grid_label(grid));
}

inline HopfEstimate gauss_degree_integral(const SpinorField& field, const S3Grid& grid) {
  const double v = deterministic_sum(grid.size(), [&](std::size_t i) {
    return grid.weight(i) * degree_density(field.jet(grid.node(i), grid.frame(i)));
  });
  return make_estimate(v, Method::degree_integral, grid_label(grid));
}

// --- preimage counting -------------------------------------------------------

struct PreimageOptions {
  int seed_grid = 24;             // S3Grid resolution used to seed Newton
  double dedup_factor = 3.0;      // dedup radius in grid spacings
  double critical = 1e-6;         // |Jacobian determinant| below this is near-critical
  int max_iterations = 60;
  double tolerance = 1e-12;
};

struct PreimageResult {
  int degree = 0;
  std::vector<Vec4> points;
  std::vector<int> signs;
  double min_abs_jacobian = 0.0;
};

namespace detail {

inline Mat4 gauss_jacobian(const SpinorJet& j) {
  Mat4 m;
  m.col(0) = unit4_from_spinor(j.z);
  for (int i = 0; i < 3; ++i) m.col(i + 1) = unit4_from_spinor(j.d[i]);
  return m;
}

/// Newton iteration for l(p) = y on S3. Returns false when it fails to converge.
inline bool newton_preimage(const SpinorField& field, const Vec4& y, Vec4& p, const PreimageOptions& opt) {
  for (int it = 0; it < opt.max_iterations; ++it) {
    const Frame4 frame = tangent_frame(p);
    const SpinorJet j = field.jet(p, frame);
    const Vec4 r = y - unit4_from_spinor(j.z);
    if (r.norm() < opt.tolerance) return true;
    Eigen::Matrix<double, 4, 3> jac;
    for (int i = 0; i < 3; ++i) jac.col(i) = unit4_from_spinor(j.d[i]);
    Vec3 step = jac.colPivHouseholderQr().solve(r);
    const double len = step.norm();
    if (!std::isfinite(len)) return false;
    if (len > 0.5) step *= 0.5 / len;
    p = (p + frame * step).normalized();
  }
  return (y - unit4_from_spinor(field.value(p))).norm() < 1e3 * opt.tolerance;
}

}  // namespace detail

/// Degree of the Gauss map l = z : S3 -> S3 as the signed count of preimages
/// of the regular value y. Throws NearCriticalValue when a preimage Jacobian
/// is nearly singular.
inline PreimageResult degree_by_preimage(const SpinorField& field, const Vec4& value,
                                         const PreimageOptions& opt = {}) {
  const Vec4 y = value.normalized();
  const S3Grid grid(opt.seed_grid);
  const auto images = parallel_map<Vec4>(grid.size(), [&](std::size_t i) {
    return unit4_from_spinor(field.value(grid.node(i)));
  });

  // Seed where y lies within the local spread of the image.
  std::vector<std::size_t> seeds;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const auto [i, j, k] = grid.unflatten(idx);
    double spread = 0.0;
    const int ni = grid.n_eta(), nj = grid.n_xi1(), nk = grid.n_xi2();
    const std::array<std::size_t, 6> nbrs{grid.index(std::max(i - 1, 0), j, k), grid.index(std::min(i + 1, ni - 1), j, k),
                                          grid.index(i, (j + 1) % nj, k),        grid.index(i, (j + nj - 1) % nj, k),
                                          grid.index(i, j, (k + 1) % nk),        grid.index(i, j, (k + nk - 1) % nk)};
    for (std::size_t n : nbrs) spread = std::max(spread, (images[n] - images[idx]).norm());
    if ((images[idx] - y).norm() <= 1.5 * spread + 1e-12) seeds.push_back(idx);
  }

  PreimageResult res;
  res.min_abs_jacobian = std::numeric_limits<double>::infinity();
  const double dedup = opt.dedup_factor * grid.spacing();
  for (std::size_t s : seeds) {
    Vec4 p = grid.node(s);
    if (!detail::newton_preimage(field, y, p, opt)) continue;
    bool seen = false;
    for (const Vec4& q : res.points)
      if ((q - p).norm() < dedup) {
        seen = true;
        break;
      }
    if (seen) continue;
    const Mat4 jm = detail::gauss_jacobian(field.jet(p, tangent_frame(p)));
    const double det = jm.determinant();
    res.min_abs_jacobian = std::min(res.min_abs_jacobian, std::abs(det));
    if (std::abs(det) < opt.critical) throw NearCriticalValue("degree_by_preimage: near-critical value");
    const int sign = det > 0 ? 1 : -1;
    res.points.push_back(p);
    res.signs.push_back(sign);
    res.degree += sign;
  }
  if (res.points.empty()) res.min_abs_jacobian = 0.0;
  return res;
}

/// Retries degree_by_preimage with a deterministic jitter sequence when the
/// value is near-critical.
inline PreimageResult degree_by_preimage_jittered(const SpinorField& field, const Vec4& value,
                                                  const PreimageOptions& opt = {}, int attempts = 8,
                                                  std::uint64_t seed = 7) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec4 y = value.normalized();
  for (int a = 0;; ++a) {
    try {
      return degree_by_preimage(field, y, opt);
    } catch (const NearCriticalValue&) {
      if (a + 1 >= attempts) throw;
      const Vec4 kick(normal(rng), normal(rng), normal(rng), normal(rng));
      y = (value.normalized() + 0.05 * (a + 1) * kick).normalized();
    }
  }
}

inline HopfEstimate hopf_preimage_estimate(const SpinorField& field, const Vec4& value,
                                           const PreimageOptions& opt = {}) {
  const PreimageResult r = degree_by_preimage_jittered(field, value, opt);
  return make_estimate(r.degree, Method::preimage_count, "seed:" + std::to_string(opt.seed_grid));
}

}  // namespace hopf
