#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hopf/gauge.hpp"
#include "hopf/invariant.hpp"

using namespace hopf;

namespace {

Vec4 random_unit4(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return Vec4(n(rng), n(rng), n(rng), n(rng)).normalized();
}

const char* kAnalytic[] = {"hopf", "twisted:1,2", "twisted:2,1", "twisted:2,2", "power:2", "power:3"};

}  // namespace

// Hand-derived: at the origin z = (0, 1) and d/dx3 z = (0, 2i), so A = (0, 0, 4).
TEST(Connection, HopfAtOrigin) {
  const Vec3 a = connection_r3(SpinorField::hopf(), Vec3::Zero());
  EXPECT_NEAR((a - Vec3(0, 0, 4)).norm(), 0.0, 1e-14);
  // On S3 at (1,0,0,0) with frame (e1, e2, e3): z = (1, 0), dz = (i, 0), (0, 1), (0, i).
  Frame4 f;
  f.col(0) = Vec4::Unit(1);
  f.col(1) = Vec4::Unit(2);
  f.col(2) = Vec4::Unit(3);
  EXPECT_NEAR((connection(SpinorField::hopf(), Vec4(1, 0, 0, 0), f) - Vec3(2, 0, 0)).norm(), 0.0, 1e-15);
}

TEST(Connection, ConstantFieldIsFlat) {
  const SpinorField c = SpinorField::constant();
  EXPECT_EQ(connection_r3(c, Vec3(0.3, 0.1, -2)).norm(), 0.0);
  EXPECT_EQ(curvature_r3(c, Vec3(0.3, 0.1, -2)).norm(), 0.0);
}

TEST(Connection, IsReal) {
  std::mt19937_64 rng(21);
  for (const char* name : kAnalytic) {
    const SpinorField f = SpinorField::preset(name).gauge_transformed(GaugeFunction::random(3));
    for (int t = 0; t < 50; ++t) {
      const Vec4 p = random_unit4(rng);
      double residue = 1.0;
      connection(f.jet(p, tangent_frame(p)), &residue);
      EXPECT_LT(residue, 1e-10) << name;
    }
  }
}

// A' - A equals d psi, checked against differences of psi itself.
TEST(Connection, GaugeShiftIsGradient) {
  std::mt19937_64 rng(22);
  const double h = 1e-5;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const GaugeFunction psi = GaugeFunction::random(seed);
    for (const char* name : kAnalytic) {
      const SpinorField f = SpinorField::preset(name);
      const SpinorField g = f.gauge_transformed(psi);
      const Vec4 p = random_unit4(rng);
      const Frame4 frame = tangent_frame(p);
      const Vec3 shift = connection(g, p, frame) - connection(f, p, frame);
      for (int i = 0; i < 3; ++i) {
        const Vec4 v = frame.col(i);
        const double dpsi =
            (psi.value(std::cos(h) * p + std::sin(h) * v) - psi.value(std::cos(h) * p - std::sin(h) * v)) /
            (2 * std::sin(h));
        EXPECT_NEAR(shift[i], dpsi, 1e-7) << name;
      }
      EXPECT_NEAR((curvature(g, p, frame, CurvatureForm::spinor) - curvature(f, p, frame, CurvatureForm::spinor)).norm(),
                  0.0, 1e-10);
    }
  }
}

TEST(Connection, TrivialGaugesAreIdentity) {
  const SpinorField f = SpinorField::twisted(2, 1);
  const Vec3 x(0.4, -0.2, 0.9);
  EXPECT_NEAR((connection_r3(f.gauge_transformed(GaugeFunction::zero()), x) - connection_r3(f, x)).norm(), 0.0, 1e-14);
  EXPECT_NEAR((connection_r3(f.gauge_transformed(GaugeFunction::constant(1.3)), x) - connection_r3(f, x)).norm(), 0.0,
              1e-13);
}

TEST(Curvature, FormsAgree) {
  std::mt19937_64 rng(23);
  for (const char* name : kAnalytic) {
    const SpinorField f = SpinorField::preset(name);
    for (int t = 0; t < 100; ++t) {
      const Vec4 p = random_unit4(rng);
      const SpinorJet j = f.jet(p, tangent_frame(p));
      const Mat3 bs = curvature(j, CurvatureForm::spinor);
      const Vec3 m = hopf_projection(j.z);
      EXPECT_NEAR((bs - curvature(j, CurvatureForm::m)).norm(), 0.0, 1e-10) << name;
      EXPECT_NEAR((bs - curvature(j, CurvatureForm::mermin_ho, m)).norm(), 0.0, 1e-10) << name;
      EXPECT_NEAR((bs + bs.transpose()).norm(), 0.0, 0.0);
    }
  }
}

TEST(Curvature, MerminHoSingularAtAntipode) {
  const SpinorJet j = SpinorField::hopf().jet_r3(Vec3(0.2, 0.3, 0.1));
  EXPECT_THROW(curvature(j, CurvatureForm::mermin_ho, -hopf_projection(j.z)), ChartSingularity);
}

// B = dA, checked by central differences of the connection.
TEST(Curvature, IsExteriorDerivativeOfConnection) {
  const double h = 1e-4;
  for (const char* name : kAnalytic) {
    const SpinorField f = SpinorField::preset(name);
    const Vec3 x(0.3, -0.4, 0.6);
    Mat3 da;
    for (int i = 0; i < 3; ++i) {
      const Vec3 e = h * Vec3::Unit(i);
      da.col(i) = (connection_r3(f, x + e) - connection_r3(f, x - e)) / (2 * h);  // da(j, i) = d_i A_j
    }
    const Mat3 curl = da.transpose() - da;  // (i, j) -> d_i A_j - d_j A_i
    EXPECT_NEAR((curl - curvature_r3(f, x)).norm(), 0.0, 1e-6) << name;
  }
}

TEST(Curvature, ClosednessResidualIsSecondOrder) {
  const SpinorField f = SpinorField::twisted(2, 1);
  const Vec3 x(0.5, 0.2, -0.3);
  const double r1 = std::abs(closedness_residual(f, x, 1e-2));
  const double r2 = std::abs(closedness_residual(f, x, 5e-3));
  ASSERT_GT(r2, 0.0);
  EXPECT_NEAR(std::log2(r1 / r2), 2.0, 0.2);
}

TEST(Gauge, WhiteheadShiftUnderHopfAngles) {
  const S3Grid grid(64);
  const SpinorField f = SpinorField::hopf();
  const double h0 = whitehead_value(f, grid);
  const double h1 = whitehead_value(f.gauge_transformed(GaugeFunction::hopf_angles(0.3)), grid);
  EXPECT_LT(std::abs(h1 - h0), 1e-3);
}
