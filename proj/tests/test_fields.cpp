#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>

#include "hopf/fields.hpp"

using namespace hopf;

namespace {

Vec4 random_unit4(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return Vec4(n(rng), n(rng), n(rng), n(rng)).normalized();
}

const char* kPresets[] = {"constant", "hopf", "twisted:1,2", "twisted:2,1", "twisted:2,2", "power:2", "power:3"};

}  // namespace

TEST(Projection, Examples) {
  const Spinor up(Complex(1, 0), Complex(0, 0));
  EXPECT_NEAR((hopf_projection(up) - Vec3(0, 0, 1)).norm(), 0.0, 1e-15);
  const Spinor x(Complex(1 / std::sqrt(2.0), 0), Complex(1 / std::sqrt(2.0), 0));
  EXPECT_NEAR((hopf_projection(x) - Vec3(1, 0, 0)).norm(), 0.0, 1e-15);
  const Spinor y(Complex(1 / std::sqrt(2.0), 0), Complex(0, 1 / std::sqrt(2.0)));
  EXPECT_NEAR((hopf_projection(y) - Vec3(0, 1, 0)).norm(), 0.0, 1e-15);
}

TEST(Projection, PhaseInvarianceAndUnitNorm) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const Spinor z = spinor_from_unit4(random_unit4(rng));
    const Vec3 m = hopf_projection(z);
    EXPECT_NEAR(m.norm(), 1.0, 1e-14);
    const Spinor w = std::polar(1.0, 0.37 * t) * z;
    EXPECT_NEAR((hopf_projection(w) - m).norm(), 0.0, 1e-14);
    EXPECT_NEAR((hopf_projection(spinor_for_direction(m)) - m).norm(), 0.0, 1e-12);
  }
}

TEST(Projection, DerivativeMatchesDifferences) {
  std::mt19937_64 rng(6);
  const Spinor z = spinor_from_unit4(random_unit4(rng));
  const Spinor dz = spinor_from_unit4(random_unit4(rng));
  const double h = 1e-6;
  const Vec3 fd = (hopf_projection(z + h * dz) - hopf_projection(z - h * dz)) / (2 * h);
  EXPECT_NEAR((fd - hopf_projection_derivative(z, dz)).norm(), 0.0, 1e-8);
}

TEST(Spinor, Unit4RoundTrip) {
  EXPECT_EQ(spinor_from_unit4(Vec4(1, 0, 0, 0)), Spinor(Complex(1, 0), Complex(0, 0)));
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    const Vec4 l = random_unit4(rng);
    EXPECT_NEAR((unit4_from_spinor(spinor_from_unit4(l)) - l).norm(), 0.0, 1e-15);
    EXPECT_NEAR(spinor_from_unit4(l).norm(), 1.0, 1e-14);
  }
}

TEST(Presets, ParseAndReject) {
  for (const char* p : kPresets) EXPECT_EQ(SpinorField::preset(p).name(), p);
  EXPECT_THROW(SpinorField::preset("twisted:0,1"), InvalidArgument);
  EXPECT_THROW(SpinorField::preset("twisted:1.5,1"), InvalidArgument);
  EXPECT_THROW(SpinorField::preset("twisted:1"), InvalidArgument);
  EXPECT_THROW(SpinorField::preset("power:-1"), InvalidArgument);
  EXPECT_THROW(SpinorField::preset("hopf:1"), InvalidArgument);
  EXPECT_THROW(SpinorField::preset("skyrmion"), InvalidArgument);
}

TEST(Presets, ClosedFormValues) {
  const Vec4 p = Vec4(0.2, -0.5, 0.4, 0.7).normalized();
  const Spinor z = spinor_from_unit4(p);
  EXPECT_NEAR((SpinorField::hopf().value(p) - z).norm(), 0.0, 1e-15);
  const Spinor u(z[0] * z[0], z[1]);
  EXPECT_NEAR((SpinorField::twisted(2, 1).value(p) - u / u.norm()).norm(), 0.0, 1e-14);
  // power(2): q^2 as a quaternion, (a + v)^2 = a^2 - |v|^2 + 2 a v.
  const Vec4 q2(p[0] * p[0] - p.tail<3>().squaredNorm(), 2 * p[0] * p[1], 2 * p[0] * p[2], 2 * p[0] * p[3]);
  EXPECT_NEAR((SpinorField::power(2).value(p) - spinor_from_unit4(q2)).norm(), 0.0, 1e-14);
  EXPECT_NEAR((SpinorField::constant().value(p) - Spinor(Complex(1, 0), Complex(0, 0))).norm(), 0.0, 0.0);
}

TEST(Presets, NormalizedAndBoundaryValue) {
  std::mt19937_64 rng(9);
  for (const char* name : kPresets) {
    const SpinorField f = SpinorField::preset(name);
    for (int t = 0; t < 100; ++t) {
      const Vec4 p = random_unit4(rng);
      const Spinor z = f.value(p);
      EXPECT_NEAR(z.norm(), 1.0, 1e-10) << name;
      EXPECT_NEAR(hopf_projection(z).norm(), 1.0, 1e-10) << name;
    }
    // m(x) -> m0 as |x| -> infinity.
    const Vec3 dir = Vec3(0.3, -0.8, 0.5).normalized();
    double prev = 1e9;
    for (double r : {10.0, 100.0, 1000.0}) {
      const double dev = (hopf_projection(f.jet_r3(r * dir).z) - f.boundary_value()).norm();
      EXPECT_LE(dev, prev) << name;
      prev = dev;
    }
    EXPECT_LT(prev, 1e-2) << name;
  }
  EXPECT_NEAR((SpinorField::hopf().boundary_value() - Vec3(0, 0, -1)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((SpinorField::power(2).boundary_value() - Vec3(0, 0, 1)).norm(), 0.0, 1e-15);
}

// Analytic jets against central differences along great circles.
TEST(Presets, JetsMatchGeodesicDifferences) {
  std::mt19937_64 rng(10);
  const double h = 1e-5;
  for (const char* name : kPresets) {
    const SpinorField f = SpinorField::preset(name);
    for (int t = 0; t < 10; ++t) {
      const Vec4 p = random_unit4(rng);
      const Frame4 frame = tangent_frame(p);
      const SpinorJet j = f.jet(p, frame);
      for (int i = 0; i < 3; ++i) {
        const Vec4 v = frame.col(i);
        const Spinor fd = (f.value(std::cos(h) * p + std::sin(h) * v) - f.value(std::cos(h) * p - std::sin(h) * v)) /
                          (2 * std::sin(h));
        EXPECT_NEAR((fd - j.d[i]).norm(), 0.0, 1e-7) << name;
      }
    }
  }
}

TEST(Presets, ConstantHasZeroDerivatives) {
  const SpinorJet j = SpinorField::constant().jet_r3(Vec3(0.1, 0.2, 0.3));
  for (const auto& d : j.d) EXPECT_EQ(d.norm(), 0.0);
}

TEST(Gauge, PhaseLeavesProjectionUnchanged) {
  const SpinorField f = SpinorField::twisted(2, 1);
  const SpinorField g = f.gauge_transformed(GaugeFunction::random(4));
  std::mt19937_64 rng(12);
  for (int t = 0; t < 50; ++t) {
    const Vec4 p = random_unit4(rng);
    EXPECT_NEAR((hopf_projection(f.value(p)) - hopf_projection(g.value(p))).norm(), 0.0, 1e-13);
  }
}

TEST(Sampled, MatchesPresetAtNodes) {
  const SpinorField f = SpinorField::hopf();
  const BoxGrid grid = BoxGrid::cube(2.0, 48);
  const auto data = std::make_shared<SampledData>(grid, sample_on_box(f, grid), f.boundary_value());
  const SpinorField s = SpinorField::sampled(data);
  EXPECT_EQ(data->renormalized, 0u);
  for (int i : {0, 7, 23, 31, 47})
    for (int k : {0, 12, 40}) {
      const Vec3 x = grid.node(i, 20, k);
      EXPECT_NEAR((s.jet_r3(x).z - f.jet_r3(x).z).norm(), 0.0, 1e-12);
    }
}

// Interior central differences are second order: halving h quarters the
// derivative error at shared nodes.
TEST(Sampled, DerivativesAreSecondOrder) {
  const SpinorField f = SpinorField::twisted(2, 1);
  auto worst = [&](int n) {
    const BoxGrid grid = BoxGrid::cube(2.0, n);
    const SampledData data(grid, sample_on_box(f, grid), f.boundary_value());
    double e = 0.0;
    for (const Vec3& x : {Vec3(0.5, -0.5, 0.0), Vec3(1.0, 0.5, -0.5), Vec3(0.0, 0.0, 1.0)}) {
      int idx[3];
      for (int a = 0; a < 3; ++a) idx[a] = static_cast<int>(std::lround((x[a] + 2.0) / grid.spacing()[a]));
      const auto& g = data.gradients[grid.index(idx[0], idx[1], idx[2])];
      const SpinorJet exact = f.jet_r3(grid.node(idx[0], idx[1], idx[2]));
      for (int a = 0; a < 3; ++a) e = std::max(e, (g[a] - exact.d[a]).norm());
    }
    return e;
  };
  const double coarse = worst(25), fine = worst(49);
  EXPECT_NEAR(coarse / fine, 4.0, 0.6);
}

TEST(Sampled, NormPolicy) {
  const BoxGrid grid = BoxGrid::cube(1.0, 3);
  std::vector<Spinor> v(grid.size(), Spinor(Complex(1, 0), Complex(0, 0)));
  v[4] *= 1.0 + 1e-4;
  const SampledData ok(grid, v, Vec3(0, 0, 1));
  EXPECT_EQ(ok.renormalized, 1u);
  EXPECT_NEAR(ok.values[4].norm(), 1.0, 1e-15);
  v[5] *= 1.05;
  EXPECT_THROW(SampledData(grid, v, Vec3(0, 0, 1)), FormatError);
  v.pop_back();
  EXPECT_THROW(SampledData(grid, v, Vec3(0, 0, 1)), FormatError);
}

TEST(Sampled, OutsidePolicy) {
  const BoxGrid grid = BoxGrid::cube(1.0, 4);
  const SpinorField f = SpinorField::hopf();
  const Vec3 m0 = f.boundary_value();
  auto strict = SpinorField::sampled(
      std::make_shared<SampledData>(grid, sample_on_box(f, grid), m0, OutsidePolicy::error));
  auto lenient = SpinorField::sampled(
      std::make_shared<SampledData>(grid, sample_on_box(f, grid), m0, OutsidePolicy::boundary_value));
  EXPECT_THROW(strict.jet_r3(Vec3(3, 0, 0)), OutsideDomain);
  const SpinorJet j = lenient.jet_r3(Vec3(3, 0, 0));
  EXPECT_NEAR((hopf_projection(j.z) - m0).norm(), 0.0, 1e-14);
  EXPECT_EQ(j.d[0].norm(), 0.0);
}
