#include <gtest/gtest.h>

#include <cmath>

#include "hopf/invariant.hpp"

using namespace hopf;

namespace {

struct Expected {
  const char* preset;
  long h;
};

const Expected kCases[] = {{"constant", 0}, {"hopf", 1},    {"twisted:1,2", 2}, {"twisted:2,1", 2},
                           {"twisted:2,2", 4}, {"power:2", 2}, {"power:3", 3}};

const Mat4 kReflection = Vec4(1, 1, 1, -1).asDiagonal();

}  // namespace

TEST(Whitehead, ConstantIsExactlyZero) {
  EXPECT_EQ(whitehead_value(SpinorField::constant(), S3Grid(16)), 0.0);
  EXPECT_EQ(gauss_degree_integral(SpinorField::constant(), S3Grid(16)).value, 0.0);
}

TEST(Whitehead, PresetValues) {
  const S3Grid grid(64);
  for (const auto& c : kCases) {
    const HopfEstimate w = hopf_whitehead(SpinorField::preset(c.preset), grid);
    EXPECT_EQ(w.rounded, c.h) << c.preset;
    EXPECT_LT(w.residual, 0.05) << c.preset;
    EXPECT_TRUE(w.converged);
    EXPECT_EQ(w.resolution, "s3:64x64x64");
  }
  EXPECT_NEAR(whitehead_value(SpinorField::hopf(), grid), 1.0, 0.02);
  EXPECT_NEAR(whitehead_value(SpinorField::twisted(2, 2), grid), 4.0, 0.1);
}

TEST(DegreeIntegral, PresetValues) {
  const S3Grid grid(64);
  for (const auto& c : kCases) {
    const HopfEstimate d = gauss_degree_integral(SpinorField::preset(c.preset), grid);
    EXPECT_EQ(d.rounded, c.h) << c.preset;
    EXPECT_LT(d.residual, 0.05) << c.preset;
  }
  EXPECT_NEAR(gauss_degree_integral(SpinorField::hopf(), grid).value, 1.0, 1e-9);
  EXPECT_NEAR(gauss_degree_integral(SpinorField::power(2), grid).value, 2.0, 0.05);
}

TEST(Preimage, CountsMatch) {
  const Vec4 y = Vec4(0.31, -0.52, 0.67, 0.43).normalized();
  for (const auto& c : kCases) {
    if (std::string(c.preset) == "constant") continue;
    const PreimageResult r = degree_by_preimage(SpinorField::preset(c.preset), y);
    EXPECT_EQ(r.degree, c.h) << c.preset;
    // All preimages of these holomorphic-type maps are positive.
    EXPECT_EQ(r.points.size(), static_cast<std::size_t>(c.h)) << c.preset;
    for (int s : r.signs) EXPECT_EQ(s, 1);
  }
}

TEST(Preimage, ConstantHasNoPreimagesOfOtherValues) {
  const PreimageResult r = degree_by_preimage(SpinorField::constant(), Vec4(0, 1, 0, 0));
  EXPECT_EQ(r.degree, 0);
  EXPECT_TRUE(r.points.empty());
}

// q^3 = y has three unit solutions for non-real y, each satisfying the
// quaternion equation.
TEST(Preimage, PowerRootsSolveTheEquation) {
  const Vec4 y = Vec4(0.2, 0.5, -0.3, 0.78).normalized();
  const PreimageResult r = degree_by_preimage(SpinorField::power(3), y);
  ASSERT_EQ(r.points.size(), 3u);
  for (const Vec4& q : r.points) EXPECT_NEAR((quat_mul(quat_mul(q, q), q) - y).norm(), 0.0, 1e-9);
}

// q^2 = -1 on the whole 2-sphere of unit imaginary quaternions: a critical value.
TEST(Preimage, CriticalValueIsFlaggedAndJitterRecovers) {
  const SpinorField f = SpinorField::power(2);
  EXPECT_THROW(degree_by_preimage(f, Vec4(-1, 0, 0, 0)), NearCriticalValue);
  EXPECT_EQ(degree_by_preimage_jittered(f, Vec4(-1, 0, 0, 0)).degree, 2);
}

TEST(Orientation, ReflectionNegatesEveryMethod) {
  const S3Grid grid(48);
  for (const char* name : {"hopf", "twisted:2,1", "power:3"}) {
    const SpinorField f = SpinorField::preset(name);
    const SpinorField g = f.precomposed(kReflection);
    EXPECT_NEAR(whitehead_value(g, grid), -whitehead_value(f, grid), 1e-9) << name;
    EXPECT_NEAR(gauss_degree_integral(g, grid).value, -gauss_degree_integral(f, grid).value, 1e-9) << name;
    const Vec4 y = Vec4(0.31, -0.52, 0.67, 0.43).normalized();
    EXPECT_EQ(degree_by_preimage(g, y).degree, -degree_by_preimage(f, y).degree) << name;
  }
}

TEST(Estimate, ConvergenceFlag) {
  EXPECT_TRUE(make_estimate(1.04, Method::whitehead, "x").converged);
  const HopfEstimate bad = make_estimate(1.3, Method::whitehead, "x");
  EXPECT_FALSE(bad.converged);
  EXPECT_EQ(bad.rounded, 1);
  EXPECT_NEAR(bad.residual, 0.3, 1e-15);
  EXPECT_FALSE(make_estimate(std::nan(""), Method::whitehead, "x").converged);
}

TEST(Whitehead, ResidualShrinksWithResolution) {
  for (const char* name : {"twisted:2,1", "twisted:2,2", "power:3"}) {
    const SpinorField f = SpinorField::preset(name);
    EXPECT_LT(hopf_whitehead(f, S3Grid(64)).residual, hopf_whitehead(f, S3Grid(32)).residual) << name;
  }
}

TEST(Whitehead, AgreesWithDegreeIntegral) {
  const S3Grid grid(40);
  for (const auto& c : kCases) {
    const SpinorField f = SpinorField::preset(c.preset);
    EXPECT_NEAR(whitehead_value(f, grid), gauss_degree_integral(f, grid).value, 1e-6) << c.preset;
  }
}
