#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "hopf/fibers.hpp"
#include "hopf/fixtures.hpp"
#include "hopf/links.hpp"
#include "hopf/pipeline.hpp"

using namespace hopf;

namespace {

const BoxGrid kBox = BoxGrid::cube(3.0, 64);

double distance_to(const Polyline& c, const Vec3& x) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.size(); ++i) d = std::min(d, point_segment_distance(x, c[i], c[next_index(i, c.size())]));
  return d;
}

}  // namespace

TEST(Transverse, Examples) {
  const Vec3 t(0, 0, 1);
  EXPECT_EQ(transverse_coordinates(t, t).norm(), 0.0);
  EXPECT_NEAR(transverse_coordinates(Vec3(1, 0, 0), t).norm(), 1.0, 1e-15);
  EXPECT_NEAR(transverse_coordinates(Vec3(0, -1, 0), t).norm(), 1.0, 1e-15);
  EXPECT_THROW(transverse_coordinates(-t, t), ChartSingularity);
  const TransverseChart chart(Vec3(0.3, -0.2, 0.9));
  const Vec2 phi(0.4, -1.3);
  EXPECT_NEAR((chart(chart.to_sphere(phi)) - phi).norm(), 0.0, 1e-13);
}

TEST(Winding, SyntheticFields) {
  const Vec3 o = Vec3::Zero(), z = Vec3::UnitZ();
  auto linear = [](const Vec3& x) { return Vec2(x[0], x[1]); };
  auto square = [](const Vec3& x) { return Vec2(x[0] * x[0] - x[1] * x[1], 2 * x[0] * x[1]); };
  auto conj = [](const Vec3& x) { return Vec2(x[0], -x[1]); };
  EXPECT_EQ(winding_number(linear, o, z, 0.1), 1);
  EXPECT_EQ(winding_number(square, o, z, 0.1), 2);
  EXPECT_EQ(winding_number(linear, o, -z, 0.1), -1);
  EXPECT_EQ(winding_number(conj, o, z, 0.1), -1);
  auto flat = [](const Vec3&) { return Vec2(0.0, 0.0); };
  EXPECT_THROW(winding_number(flat, o, z, 0.1), AmbiguousWinding);
}

// The fiber of (0,0,1) under the hopf preset is the unit circle in the xy-plane.
TEST(Extraction, HopfFiberIsUnitCircle) {
  const KnotFamily fam = extract_fibers(SpinorField::hopf(), kBox, Vec3(0, 0, 1));
  ASSERT_EQ(fam.curves.size(), 1u);
  EXPECT_TRUE(fam.open_curves.empty());
  const FiberCurve& c = fam.curves[0];
  EXPECT_EQ(c.winding, 1);
  EXPECT_NEAR(c.length(), kTwoPi, 0.02 * kTwoPi);
  const Polyline exact = fixtures::hopf_fiber(Vec3(0, 0, 1), 1024);
  for (const Vec3& p : c.points) EXPECT_LT(distance_to(exact, p), 0.02);
}

TEST(Extraction, GenericHopfFiberMatchesClosedForm) {
  const Vec3 target = Vec3(0.4, -0.6, 0.3).normalized();
  const KnotFamily fam = extract_fibers(SpinorField::hopf(), kBox, target);
  ASSERT_EQ(fam.curves.size(), 1u);
  const Polyline exact = fixtures::hopf_fiber(target, 1024);
  for (const Vec3& p : fam.curves[0].points) EXPECT_LT(distance_to(exact, p), 0.02 * diameter(exact));
}

TEST(Extraction, CurveInvariants) {
  const SpinorField f = SpinorField::twisted(2, 1);
  const Vec3 target = default_targets(f)[0];
  const KnotFamily fam = extract_fibers(f, kBox, target);
  ASSERT_FALSE(fam.curves.empty());
  for (const FiberCurve& c : fam.curves) {
    EXPECT_TRUE(c.closed);
    const std::size_t n = c.points.size();
    const TransverseChart chart(target);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_LE((c.points[next_index(i, n)] - c.points[i]).norm(), 2.0 * kBox.max_spacing());
      const PhiJet pj = phi_jet(f, chart, c.points[i]);
      EXPECT_LT(pj.phi.norm(), 1e-8);
      // The traversal direction follows D = grad phi1 x grad phi2 (times the winding sign).
      const Vec3 step = c.points[next_index(i, n)] - c.points[(i + n - 1) % n];
      EXPECT_GT(c.winding * step.dot(pj.tangent()), 0.0);
    }
  }
}

// H = SL for a single W = 1 fiber, and the fibers of two targets link H times
// (crossing-count oracle, independent of the Gauss integral).
TEST(Extraction, TwistedFibersLinkTwice) {
  const SpinorField f = SpinorField::twisted(2, 1);
  const Vec3 t1 = default_targets(f)[0];
  const Vec3 t2 = perturb_target(t1, 0.8, 1.7);
  const KnotFamily a = extract_fibers(f, kBox, t1), b = extract_fibers(f, kBox, t2);
  ASSERT_EQ(a.curves.size(), 1u);
  ASSERT_EQ(b.curves.size(), 1u);
  EXPECT_EQ(a.curves[0].winding, 1);
  EXPECT_EQ(crossing_linking(a.curves[0].points, b.curves[0].points), 2);
}

TEST(Extraction, ConstantFieldHasNoFibers) {
  const KnotFamily fam = extract_fibers(SpinorField::constant(), BoxGrid::cube(2.0, 16), Vec3(0.3, 0.1, 0.9));
  EXPECT_TRUE(fam.curves.empty());
  EXPECT_TRUE(fam.open_curves.empty());
}

TEST(Extraction, TruncatedBoxReportsOpenCurves) {
  const SpinorField h = SpinorField::hopf();
  const BoxGrid small(Vec3(-1.5, -1.5, -0.5), Vec3(0.5, 1.5, 0.5), {32, 48, 16});
  const auto data = std::make_shared<SampledData>(small, sample_on_box(h, small), h.boundary_value());
  const KnotFamily fam = extract_fibers(SpinorField::sampled(data), small, Vec3(0, 0, 1));
  EXPECT_TRUE(fam.curves.empty());
  ASSERT_FALSE(fam.open_curves.empty());
  for (const auto& c : fam.open_curves) {
    EXPECT_FALSE(c.closed);
    EXPECT_EQ(c.winding, 0);
  }
  EXPECT_FALSE(fam.warnings.empty());
  EXPECT_THROW(hopf_from_links(fam, {}), OpenCurve);
}

TEST(Extraction, TargetIndependence) {
  const SpinorField f = SpinorField::twisted(2, 2);
  RunOptions opt;
  const Vec3 t1 = default_targets(f)[0];
  for (const Vec3& t : {t1, perturb_target(t1, 0.5, 2.0)}) {
    FamilyRun run = extract_family(f, t, opt);
    EXPECT_EQ(hopf_from_links(run.family, run.framings).h_rounded, 4);
  }
}

TEST(Current, SmoothCurrentIsDivergenceFree) {
  for (const char* name : {"hopf", "twisted:2,1"}) {
    const SpinorField f = SpinorField::preset(name);
    const Vec3 x(0.4, -0.3, 0.5);
    const double d1 = std::abs(current_divergence(f, x, 1e-2));
    const double d2 = std::abs(current_divergence(f, x, 5e-3));
    EXPECT_LT(d1, 1e-3) << name;
    EXPECT_NEAR(std::log2(d1 / d2), 2.0, 0.25) << name;
  }
  EXPECT_EQ(current_at(SpinorField::constant(), Vec3(1, 2, 3)).norm(), 0.0);
}

TEST(Current, FluxThroughTransverseDiskIsWinding) {
  for (const char* name : {"hopf", "twisted:2,1", "twisted:1,2"}) {
    const SpinorField f = SpinorField::preset(name);
    const Vec3 target = default_targets(f)[0];
    const KnotFamily fam = extract_fibers(f, kBox, target);
    ASSERT_FALSE(fam.curves.empty()) << name;
    for (const FiberCurve& c : fam.curves) {
      const std::size_t n = c.points.size();
      const Vec3 tan = (c.points[1] - c.points[n - 1]).normalized();
      const double flux = string_current_flux(f, target, c.points[0], tan, 0.2, 0.02);
      EXPECT_NEAR(flux, c.winding, 0.05 * std::abs(c.winding)) << name;
    }
  }
}

TEST(Current, StringCurrentIsLocalized) {
  const SpinorField f = SpinorField::hopf();
  // Distance 0.5 from the unit circle fiber of (0,0,1).
  EXPECT_LT(string_current_at(f, Vec3(0, 0, 1), Vec3(1.5, 0, 0), 0.02).norm(), 1e-12);
  EXPECT_GT(string_current_at(f, Vec3(0, 0, 1), Vec3(1.0, 0, 0), 0.02).norm(), 1.0);
}

// twisted(1,2) near the north pole: m ~ z2^2, a double zero of phi.
TEST(Extraction, NonRegularTargetIsJittered) {
  const SpinorField f = SpinorField::twisted(1, 2);
  EXPECT_THROW(extract_fibers_once(f, kBox, Vec3(0, 0, 1)), NonRegularTarget);
  const KnotFamily fam = extract_fibers(f, kBox, Vec3(0, 0, 1));
  EXPECT_GT(fam.metadata.jitter_attempts, 0);
  EXPECT_FALSE(fam.warnings.empty());
  RunOptions opt;
  opt.targets = {Vec3(0, 0, 1)};
  opt.methods = {Method::link_sum};
  const HopfReport rep = run_hopf(f, opt);
  EXPECT_EQ(rep.exit_code(), 0);
  EXPECT_EQ(rep.common_integer().value_or(-1), 2);
}
