#pragma once
// Normalized spinor fields z : S3 -> S3 in C^2, the induced unit vectors
// m = z^dagger sigma z on S2 and l in S3, analytic presets with exact
// derivatives and box-sampled fields with finite-difference derivatives.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "hopf/error.hpp"
#include "hopf/geometry.hpp"
#include "hopf/types.hpp"

namespace hopf {

// --- pointwise maps -------------------------------------------------------

/// m^a = z^dagger sigma^a z.
inline Vec3 hopf_projection(const Spinor& z) {
  const Complex w = std::conj(z[0]) * z[1];
  return {2.0 * w.real(), 2.0 * w.imag(), std::norm(z[0]) - std::norm(z[1])};
}

/// Directional derivative of hopf_projection.
inline Vec3 hopf_projection_derivative(const Spinor& z, const Spinor& dz) {
  const Complex dw = std::conj(dz[0]) * z[1] + std::conj(z[0]) * dz[1];
  const double d3 = 2.0 * (std::conj(z[0]) * dz[0]).real() - 2.0 * (std::conj(z[1]) * dz[1]).real();
  return {2.0 * dw.real(), 2.0 * dw.imag(), d3};
}

/// z = (l0 + i l1, l2 + i l3).
inline Spinor spinor_from_unit4(const Vec4& l) {
  return Spinor(Complex(l[0], l[1]), Complex(l[2], l[3]));
}

inline Vec4 unit4_from_spinor(const Spinor& z) {
  return {z[0].real(), z[0].imag(), z[1].real(), z[1].imag()};
}

/// A spinor whose projection is the unit vector m.
inline Spinor spinor_for_direction(const Vec3& m) {
  const Vec3 u = m.normalized();
  const double theta = std::acos(std::clamp(u.z(), -1.0, 1.0));
  const double phi = std::atan2(u.y(), u.x());
  return Spinor(Complex(std::cos(0.5 * theta), 0.0), std::polar(std::sin(0.5 * theta), phi));
}

/// Derivative of z / |z|.
inline Spinor normalize_derivative(const Spinor& z, const Spinor& dz) {
  const double n = z.norm();
  const double radial = (z.adjoint() * dz)(0).real();
  return dz / n - z * (radial / (n * n * n));
}

// Quaternions are stored as Vec4 (w, x, y, z) = w + x i + y j + z k, matching
// the spinor pairing (w + i x, y + i z).
inline Vec4 quat_mul(const Vec4& a, const Vec4& b) {
  return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
          a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
          a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
          a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

// --- gauge functions ------------------------------------------------------

/// Smooth real scalar on S3, given by its ambient value and R4 gradient.
struct GaugeFunction {
  std::function<double(const Vec4&)> value;
  std::function<Vec4(const Vec4&)> gradient;

  double derivative(const Vec4& p, const Vec4& v) const { return gradient(p).dot(v); }

  static GaugeFunction zero() {
    return {[](const Vec4&) { return 0.0; }, [](const Vec4&) { return Vec4::Zero().eval(); }};
  }
  static GaugeFunction constant(double c) {
    return {[c](const Vec4&) { return c; }, [](const Vec4&) { return Vec4::Zero().eval(); }};
  }

  /// a sin(xi1 + xi2) sin(2 eta) = 2 a (p0 p3 + p1 p2).
  static GaugeFunction hopf_angles(double a) {
    return {[a](const Vec4& p) { return 2.0 * a * (p[0] * p[3] + p[1] * p[2]); },
            [a](const Vec4& p) { return Vec4(2.0 * a * p[3], 2.0 * a * p[2], 2.0 * a * p[1], 2.0 * a * p[0]); }};
  }

  /// Sum of `terms` plane waves a sin(k . p + c) with random a, k, c.
  static GaugeFunction random(std::uint64_t seed, int terms = 3, double amplitude = 0.3) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    struct Wave {
      double a, c;
      Vec4 k;
    };
    std::vector<Wave> waves;
    for (int t = 0; t < terms; ++t) {
      Wave w;
      w.a = amplitude * (0.5 + 0.5 * unit(rng));
      w.c = kTwoPi * unit(rng);
      w.k = Vec4(normal(rng), normal(rng), normal(rng), normal(rng));
      waves.push_back(w);
    }
    return {[waves](const Vec4& p) {
              double s = 0.0;
              for (const auto& w : waves) s += w.a * std::sin(w.k.dot(p) + w.c);
              return s;
            },
            [waves](const Vec4& p) {
              Vec4 g = Vec4::Zero();
              for (const auto& w : waves) g += w.a * std::cos(w.k.dot(p) + w.c) * w.k;
              return g;
            }};
  }
};

// --- sampled data -----------------------------------------------------------

enum class OutsidePolicy { error, boundary_value };

/// Spinor values on a BoxGrid plus nodal central-difference gradients.
struct SampledData {
  BoxGrid grid;
  std::vector<Spinor> values;
  std::vector<std::array<Spinor, 3>> gradients;
  Vec3 boundary_m{0.0, 0.0, -1.0};
  OutsidePolicy outside = OutsidePolicy::boundary_value;
  std::size_t renormalized = 0;  // nodes whose norm deviated by more than 1e-6

  /// Normalizes raw node data (error when a norm is off by more than 1e-2)
  /// and fills gradients: second-order central differences in the interior,
  /// second-order one-sided differences on the faces.
  SampledData(BoxGrid g, std::vector<Spinor> raw, Vec3 m0, OutsidePolicy policy = OutsidePolicy::boundary_value)
      : grid(std::move(g)), values(std::move(raw)), boundary_m(m0.normalized()), outside(policy) {
    if (values.size() != grid.size()) throw FormatError("sampled field: node count does not match dims");
    for (auto& z : values) {
      const double n = z.norm();
      if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-2)
        throw FormatError("sampled field: spinor norm deviates from 1 by more than 1e-2");
      if (std::abs(n - 1.0) > 1e-6) ++renormalized;
      z /= n;
    }
    const auto& d = grid.dims();
    gradients.resize(values.size());
    for (int k = 0; k < d[2]; ++k)
      for (int j = 0; j < d[1]; ++j)
        for (int i = 0; i < d[0]; ++i) {
          const std::array<int, 3> c{i, j, k};
          auto& g3 = gradients[grid.index(i, j, k)];
          for (int a = 0; a < 3; ++a) {
            auto at = [&](int off) {
              std::array<int, 3> q = c;
              q[a] += off;
              return values[grid.index(q[0], q[1], q[2])];
            };
            const double h = grid.spacing()[a];
            if (c[a] == 0)
              g3[a] = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
            else if (c[a] == d[a] - 1)
              g3[a] = (3.0 * at(0) - 4.0 * at(-1) + at(-2)) / (2.0 * h);
            else
              g3[a] = (at(1) - at(-1)) / (2.0 * h);
          }
        }
  }

  /// Largest |m - m0| over the outer shell of nodes.
  double boundary_deviation() const {
    const auto& d = grid.dims();
    double worst = 0.0;
    for (int k = 0; k < d[2]; ++k)
      for (int j = 0; j < d[1]; ++j)
        for (int i = 0; i < d[0]; ++i) {
          if (i != 0 && j != 0 && k != 0 && i != d[0] - 1 && j != d[1] - 1 && k != d[2] - 1) continue;
          worst = std::max(worst, (hopf_projection(values[grid.index(i, j, k)]) - boundary_m).norm());
        }
    return worst;
  }
};

/// Value and first derivatives of a spinor field along three directions.
struct SpinorJet {
  Spinor z;
  std::array<Spinor, 3> d;
};

// --- SpinorField -------------------------------------------------------------

class SpinorField {
 public:
  enum class Kind { constant, hopf, twisted, power, sampled };

  static SpinorField constant(const Spinor& z = Spinor(Complex(1.0, 0.0), Complex(0.0, 0.0))) {
    SpinorField f(Kind::constant);
    f.constant_ = z.normalized();
    return f;
  }
  static SpinorField hopf() { return SpinorField(Kind::hopf); }
  static SpinorField twisted(int p, int q) {
    if (p < 1 || q < 1) throw InvalidArgument("twisted(p,q) requires integers p, q >= 1");
    SpinorField f(Kind::twisted);
    f.p_ = p;
    f.q_ = q;
    return f;
  }
  static SpinorField power(int n) {
    if (n < 0) throw InvalidArgument("power(n) requires an integer n >= 0");
    SpinorField f(Kind::power);
    f.p_ = n;
    return f;
  }
  static SpinorField sampled(std::shared_ptr<const SampledData> data) {
    if (!data) throw InvalidArgument("sampled field: no data");
    SpinorField f(Kind::sampled);
    f.data_ = std::move(data);
    return f;
  }

  /// Parses "constant", "hopf", "twisted:P,Q" or "power:N".
  static SpinorField preset(std::string_view spec) {
    const auto colon = spec.find(':');
    const std::string_view name = spec.substr(0, colon);
    std::vector<int> params;
    if (colon != std::string_view::npos) {
      std::string_view rest = spec.substr(colon + 1);
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view tok = rest.substr(0, comma);
        int v = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size())
          throw InvalidArgument("preset parameters must be integers: " + std::string(spec));
        params.push_back(v);
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
      }
    }
    auto expect = [&](std::size_t n) {
      if (params.size() != n) throw InvalidArgument("wrong number of preset parameters: " + std::string(spec));
    };
    if (name == "constant") {
      expect(0);
      return constant();
    }
    if (name == "hopf") {
      expect(0);
      return hopf();
    }
    if (name == "twisted") {
      expect(2);
      return twisted(params[0], params[1]);
    }
    if (name == "power") {
      expect(1);
      return power(params[0]);
    }
    throw InvalidArgument("unknown preset: " + std::string(spec));
  }

  /// Multiplies z by exp(i psi / 2), which shifts the connection by d psi.
  SpinorField gauge_transformed(GaugeFunction psi) const {
    SpinorField f = *this;
    auto prev = gauges_;
    prev.push_back(std::make_shared<const GaugeFunction>(std::move(psi)));
    f.gauges_ = std::move(prev);
    return f;
  }

  /// Returns the field p -> z(R p) for an orthogonal 4x4 matrix R.
  SpinorField precomposed(const Mat4& isometry) const {
    SpinorField f = *this;
    f.pre_ = f.pre_ ? Mat4(*f.pre_ * isometry) : isometry;
    return f;
  }

  Kind kind() const { return kind_; }
  int p() const { return p_; }
  int q() const { return q_; }
  const SampledData* data() const { return data_.get(); }
  const Stereographic& chart() const { return chart_; }
  bool analytic() const { return kind_ != Kind::sampled; }

  std::string name() const {
    switch (kind_) {
      case Kind::constant: return "constant";
      case Kind::hopf: return "hopf";
      case Kind::twisted: return "twisted:" + std::to_string(p_) + "," + std::to_string(q_);
      case Kind::power: return "power:" + std::to_string(p_);
      case Kind::sampled: return "sampled";
    }
    return "unknown";
  }

  /// m at the point at infinity of R3.
  Vec3 boundary_value() const {
    if (kind_ == Kind::sampled) return data_->boundary_m;
    return hopf_projection(value(chart_.pole()));
  }

  Spinor value(const Vec4& p) const {
    Frame4 none = Frame4::Zero();
    return jet(p, none).z;
  }

  /// z(p) and its derivatives along the three columns of `frame`.
  SpinorJet jet(const Vec4& p_in, const Frame4& frame_in) const {
    Vec4 p = p_in;
    Frame4 frame = frame_in;
    if (pre_) {
      p = *pre_ * p_in;
      frame = *pre_ * frame_in;
    }
    SpinorJet j = base_jet(p, frame);
    apply_gauges(j, p_in, frame_in);
    return j;
  }

  /// z(x) and d z / d x_i in the stereographic chart of R3.
  SpinorJet jet_r3(const Vec3& x) const {
    if (kind_ == Kind::sampled && !pre_) {
      SpinorJet j = sampled_jet_r3(x);
      if (!gauges_.empty()) apply_gauges(j, chart_.to_sphere(x), chart_.pushforward(x));
      return j;
    }
    return jet(chart_.to_sphere(x), chart_.pushforward(x));
  }

 private:
  explicit SpinorField(Kind k) : kind_(k) {}

  void apply_gauges(SpinorJet& j, const Vec4& p, const Frame4& frame) const {
    for (const auto& g : gauges_) {
      const Complex phase = std::polar(1.0, 0.5 * g->value(p));
      const Vec4 grad = g->gradient(p);
      for (int i = 0; i < 3; ++i)
        j.d[i] = phase * (j.d[i] + Complex(0.0, 0.5 * grad.dot(frame.col(i))) * j.z);
      j.z = phase * j.z;
    }
  }

  SpinorJet base_jet(const Vec4& p, const Frame4& frame) const {
    SpinorJet j;
    switch (kind_) {
      case Kind::constant:
        j.z = constant_;
        for (auto& d : j.d) d.setZero();
        return j;
      case Kind::hopf:
        j.z = spinor_from_unit4(p);
        for (int i = 0; i < 3; ++i) j.d[i] = spinor_from_unit4(frame.col(i));
        return j;
      case Kind::twisted: {
        const Spinor z = spinor_from_unit4(p);
        const Spinor u(ipow(z[0], p_), ipow(z[1], q_));
        const double n = u.norm();
        j.z = u / n;
        for (int i = 0; i < 3; ++i) {
          const Spinor dz = spinor_from_unit4(frame.col(i));
          const Spinor du(double(p_) * ipow(z[0], p_ - 1) * dz[0], double(q_) * ipow(z[1], q_ - 1) * dz[1]);
          j.d[i] = normalize_derivative(u, du);
        }
        return j;
      }
      case Kind::power: {
        // q^n and d(q^n)[v] = sum_k q^k v q^(n-1-k).
        std::vector<Vec4> powers(static_cast<std::size_t>(p_) + 1);
        powers[0] = Vec4(1.0, 0.0, 0.0, 0.0);
        for (int k = 1; k <= p_; ++k) powers[k] = quat_mul(powers[k - 1], p);
        j.z = spinor_from_unit4(powers[p_]);
        for (int i = 0; i < 3; ++i) {
          Vec4 acc = Vec4::Zero();
          for (int k = 0; k < p_; ++k) acc += quat_mul(quat_mul(powers[k], frame.col(i)), powers[p_ - 1 - k]);
          j.d[i] = spinor_from_unit4(acc);
        }
        return j;
      }
      case Kind::sampled: {
        Vec3 x;
        try {
          x = chart_.from_sphere(p);
        } catch (const OutsideDomain&) {
          return boundary_jet("sampled field: point at infinity");
        }
        if (!data_->grid.contains(x)) return boundary_jet("sampled field: point outside the box");
        const SpinorJet r = sampled_jet_r3(x);
        j.z = r.z;
        for (int i = 0; i < 3; ++i) {
          const Vec3 dx = chart_.pullback(p, frame.col(i));
          j.d[i] = r.d[0] * dx[0] + r.d[1] * dx[1] + r.d[2] * dx[2];
        }
        return j;
      }
    }
    return j;
  }

  static Complex ipow(const Complex& z, int n) {
    Complex r(1.0, 0.0);
    for (int k = 0; k < n; ++k) r *= z;
    return r;
  }

  SpinorJet boundary_jet(const char* what) const {
    if (data_->outside == OutsidePolicy::error) throw OutsideDomain(what);
    SpinorJet j;
    j.z = spinor_for_direction(data_->boundary_m);
    for (auto& d : j.d) d.setZero();
    return j;
  }

  SpinorJet sampled_jet_r3(const Vec3& x) const {
    const SampledData& s = *data_;
    const BoxGrid& g = s.grid;
    if (!g.contains(x, 1e-12)) return boundary_jet("sampled field: point outside the box");
    std::array<int, 3> base;
    Vec3 frac;
    for (int a = 0; a < 3; ++a) {
      const double t = (x[a] - g.lo()[a]) / g.spacing()[a];
      base[a] = std::clamp(static_cast<int>(std::floor(t)), 0, g.dims()[a] - 2);
      frac[a] = std::clamp(t - base[a], 0.0, 1.0);
    }
    Spinor z = Spinor::Zero();
    std::array<Spinor, 3> dz{Spinor::Zero(), Spinor::Zero(), Spinor::Zero()};
    for (int corner = 0; corner < 8; ++corner) {
      const int di = corner & 1, dj = (corner >> 1) & 1, dk = (corner >> 2) & 1;
      const double w = (di ? frac[0] : 1.0 - frac[0]) * (dj ? frac[1] : 1.0 - frac[1]) * (dk ? frac[2] : 1.0 - frac[2]);
      const std::size_t idx = g.index(base[0] + di, base[1] + dj, base[2] + dk);
      z += w * s.values[idx];
      for (int a = 0; a < 3; ++a) dz[a] += w * s.gradients[idx][a];
    }
    SpinorJet j;
    j.z = z / z.norm();
    for (int a = 0; a < 3; ++a) j.d[a] = normalize_derivative(z, dz[a]);
    return j;
  }

  Kind kind_;
  int p_ = 0, q_ = 0;
  Spinor constant_ = Spinor(Complex(1.0, 0.0), Complex(0.0, 0.0));
  std::shared_ptr<const SampledData> data_;
  std::vector<std::shared_ptr<const GaugeFunction>> gauges_;
  std::optional<Mat4> pre_;
  Stereographic chart_;
};

/// Samples any field onto the nodes of a box (x fastest).
inline std::vector<Spinor> sample_on_box(const SpinorField& field, const BoxGrid& grid) {
  std::vector<Spinor> out(grid.size());
  const auto& d = grid.dims();
  for (int k = 0; k < d[2]; ++k)
    for (int j = 0; j < d[1]; ++j)
      for (int i = 0; i < d[0]; ++i) out[grid.index(i, j, k)] = field.jet_r3(grid.node(i, j, k)).z;
  return out;
}

}  // namespace hopf
