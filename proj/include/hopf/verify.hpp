#pragma once
// The verification matrix behind `hopf verify` and the acceptance binary:
// cross-method agreement on the standard presets, gauge invariance,
// curvature equivalence, linking oracles, the White formula, the structure of
// the topological current and grid convergence.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hopf/fibers.hpp"
#include "hopf/fixtures.hpp"
#include "hopf/gauge.hpp"
#include "hopf/invariant.hpp"
#include "hopf/io.hpp"
#include "hopf/links.hpp"
#include "hopf/pipeline.hpp"

namespace hopf::verify {

using io::json;

struct Check {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  json data = json::object();
};

struct PresetCase {
  std::string preset;
  long expected;
};

inline std::vector<PresetCase> standard_presets() {
  return {{"constant", 0}, {"hopf", 1},    {"twisted:1,2", 2}, {"twisted:2,1", 2},
          {"twisted:2,2", 4}, {"power:2", 2}, {"power:3", 3}};
}

struct Options {
  std::vector<PresetCase> presets = standard_presets();
  int fine = 64;
  int coarse = 32;
  double residual_limit = 0.05;
  double seconds_limit = 120.0;
  bool timing = true;  // include wall-clock times in the report
  RunOptions run;
};

inline std::string fmt(double v, int precision = 3) {
  std::ostringstream s;
  s.precision(precision);
  s << std::scientific << v;
  return s.str();
}

/// Observed order log2(e(h) / e(h/2)).
inline double observed_order(double coarse, double fine) { return std::log2(coarse / fine); }

// 1 ---------------------------------------------------------------------------------

inline Check grand_identity(const Options& opt) {
  Check c{1, "grand identity", true, "", json::object()};
  json rows = json::array();
  int failed = 0;
  for (const auto& pc : opt.presets) {
    RunOptions run = opt.run;
    run.grid = {opt.fine, opt.fine, opt.fine};
    const auto t0 = std::chrono::steady_clock::now();
    const HopfReport rep = run_hopf(SpinorField::preset(pc.preset), run);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = !rep.open_curves && !rep.results.empty() && seconds < opt.seconds_limit;
    double worst = 0.0;
    json methods = json::array();
    for (const auto& r : rep.results) {
      json m;
      m["method"] = to_string(r.estimate.method);
      if (!r.error.empty()) {
        m["error"] = r.error;
        ok = false;
      } else {
        m["value"] = r.estimate.value;
        m["rounded"] = r.estimate.rounded;
        m["residual"] = r.estimate.residual;
        worst = std::max(worst, r.estimate.residual);
        ok = ok && r.estimate.rounded == pc.expected && r.estimate.residual < opt.residual_limit;
      }
      methods.push_back(std::move(m));
    }
    json row;
    row["preset"] = pc.preset;
    row["expected"] = pc.expected;
    row["methods"] = std::move(methods);
    row["max_residual"] = worst;
    if (opt.timing) row["seconds"] = seconds;
    row["pass"] = ok;
    rows.push_back(std::move(row));
    if (!ok) ++failed;
  }
  c.pass = failed == 0;
  c.detail = std::to_string(opt.presets.size() - failed) + "/" + std::to_string(opt.presets.size()) +
             " presets: all methods round to the expected integer with residual < " + fmt(opt.residual_limit, 2);
  c.data["presets"] = std::move(rows);
  return c;
}

// 2 ---------------------------------------------------------------------------------

inline Check gauge_invariance(const Options& opt) {
  Check c{2, "gauge invariance", true, "", json::object()};
  const SpinorField hopf = SpinorField::hopf();
  const S3Grid grid(opt.fine);
  const double base = whitehead_value(hopf, grid);
  double worst = 0.0;
  json shifts = json::array();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const double v = whitehead_value(gauge_transform(hopf, GaugeFunction::random(seed)), grid);
    worst = std::max(worst, std::abs(v - base));
    shifts.push_back(v - base);
  }
  c.pass = worst < 1e-3;
  c.detail = "max Whitehead shift over 5 random real gauge functions " + fmt(worst) + " (limit 1e-3)";
  c.data["base"] = base;
  c.data["shifts"] = std::move(shifts);
  return c;
}

// 3 ---------------------------------------------------------------------------------

inline Vec4 random_unit4(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return Vec4(n(rng), n(rng), n(rng), n(rng)).normalized();
}

/// max over points of |closedness_residual| at step h.
inline double max_closedness(const SpinorField& f, const std::vector<Vec3>& pts, double h) {
  double worst = 0.0;
  for (const Vec3& x : pts) worst = std::max(worst, std::abs(closedness_residual(f, x, h)));
  return worst;
}

inline std::vector<Vec3> random_points_r3(std::mt19937_64& rng, int count, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<Vec3> pts;
  while (static_cast<int>(pts.size()) < count) {
    const Vec3 x(u(rng), u(rng), u(rng));
    if (x.norm() <= radius) pts.push_back(x);
  }
  return pts;
}

inline Check curvature_equivalence(const Options& opt) {
  Check c{3, "curvature equivalence", true, "", json::object()};
  std::mt19937_64 rng(2024);
  double worst_form = 0.0;
  double worst_order = 0.0, best_order = 1e9;
  json rows = json::array();
  for (const auto& pc : opt.presets) {
    const SpinorField f = SpinorField::preset(pc.preset);
    double dev = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const Vec4 p = random_unit4(rng);
      const SpinorJet j = f.jet(p, tangent_frame(p));
      const Vec3 m = hopf_projection(j.z);
      // Mermin-Ho chart around a random target kept away from -m.
      Vec3 t;
      do {
        std::normal_distribution<double> n(0.0, 1.0);
        t = Vec3(n(rng), n(rng), n(rng)).normalized();
      } while (t.dot(m) < -0.5);
      const Mat3 bs = curvature_spinor(j), bm = curvature_m(j), bh = curvature_mermin_ho(j, TransverseChart(t));
      dev = std::max({dev, (bs - bm).cwiseAbs().maxCoeff(), (bs - bh).cwiseAbs().maxCoeff(),
                      (bm - bh).cwiseAbs().maxCoeff()});
    }
    worst_form = std::max(worst_form, dev);
    json row;
    row["preset"] = pc.preset;
    row["max_form_discrepancy"] = dev;
    if (pc.preset != "constant") {
      const auto pts = random_points_r3(rng, 40, 1.5);
      const double e1 = max_closedness(f, pts, 1e-2), e2 = max_closedness(f, pts, 5e-3);
      const double order = observed_order(e1, e2);
      worst_order = std::max(worst_order, order);
      best_order = std::min(best_order, order);
      row["closedness_h"] = e1;
      row["closedness_h2"] = e2;
      row["closedness_order"] = order;
    }
    rows.push_back(std::move(row));
  }
  const bool second_order = best_order > 1.8 && worst_order < 2.2;
  c.pass = worst_form < 1e-8 && second_order;
  c.detail = "max form discrepancy " + fmt(worst_form) + " (limit 1e-8) at 1000 points per preset; closedness order in [" +
             fmt(best_order, 3) + ", " + fmt(worst_order, 3) + "] (target 2)";
  c.data["presets"] = std::move(rows);
  return c;
}

// 4 ---------------------------------------------------------------------------------

inline Check linking_oracles(const Options&) {
  Check c{4, "linking oracle agreement", true, "", json::object()};
  std::mt19937_64 rng(77);
  double worst = 0.0;
  int mismatched = 0, antisym = 0;
  json rows = json::array();
  for (int k = 0; k < 20; ++k) {
    const auto pair = fixtures::random_ellipse_pair(rng, k % 2 == 0, 256);
    const double g = gauss_linking(pair.a, pair.b);
    const int x = crossing_linking(pair.a, pair.b);
    const auto rb = fixtures::reversed(pair.b);
    const double g_rev = gauss_linking(pair.a, rb);
    const int x_rev = crossing_linking(pair.a, rb);
    worst = std::max(worst, std::abs(g - x));
    if (x != pair.linking) ++mismatched;
    if (x_rev != -x || std::lround(g_rev) != -std::lround(g)) ++antisym;
    rows.push_back(json{{"gauss", g}, {"crossing", x}, {"expected", pair.linking}, {"gauss_reversed", g_rev},
                        {"crossing_reversed", x_rev}});
  }
  c.pass = worst < 1e-3 && mismatched == 0 && antisym == 0;
  c.detail = "max |gauss - crossing| " + fmt(worst) + " over 20 ellipse pairs (limit 1e-3); " +
             std::to_string(mismatched) + " construction mismatches, " + std::to_string(antisym) +
             " antisymmetry failures";
  c.data["pairs"] = std::move(rows);
  return c;
}

// 5 ---------------------------------------------------------------------------------

struct FramedFixture {
  std::string name;
  FramedCurve curve;
  std::optional<int> expected_sl;
};

inline std::vector<FramedFixture> framed_fixtures(const Options& opt) {
  std::vector<FramedFixture> out;
  for (int n : {0, 1, 3}) out.push_back({"unknot, " + std::to_string(n) + " framing turns", fixtures::twisted_unknot(n), n});
  out.push_back({"circle, blackboard framing",
                 blackboard_framing(fixtures::circle(Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY(), 1.0)), 0});
  out.push_back({"flat figure-eight, blackboard framing", blackboard_framing(fixtures::flat_figure_eight(0.2)), {}});
  out.push_back({"trefoil, blackboard framing", blackboard_framing(fixtures::torus_knot(2, 3)), {}});
  for (const char* preset : {"hopf", "twisted:2,1"}) {
    const SpinorField f = SpinorField::preset(preset);
    const FamilyRun run = extract_family(f, default_targets(f).front(), opt.run);
    for (std::size_t i = 0; i < run.framings.size(); ++i)
      out.push_back({std::string(preset) + " fiber " + std::to_string(i) + ", push-off framing", run.framings[i], {}});
  }
  return out;
}

inline Check white_formula(const Options& opt) {
  Check c{5, "White formula", true, "", json::object()};
  double worst = 0.0;
  int wrong_sl = 0;
  json rows = json::array();
  const auto fx = framed_fixtures(opt);
  for (const auto& f : fx) {
    const SelfLinking sl = self_linking(f.curve);
    const double tw = twist(f.curve), wr = writhe(f.curve.base);
    const double res = std::abs(sl.value - tw - wr);
    worst = std::max(worst, res);
    if (f.expected_sl && *f.expected_sl != sl.value) ++wrong_sl;
    rows.push_back(json{{"fixture", f.name}, {"sl", sl.value}, {"twist", tw}, {"writhe", wr}, {"residual", res}});
  }
  c.pass = worst < 1e-2 && wrong_sl == 0 && fx.size() >= 5;
  c.detail = "max |SL - Tw - Wr| " + fmt(worst) + " over " + std::to_string(fx.size()) + " framed fixtures (limit 1e-2); " +
             std::to_string(wrong_sl) + " unexpected SL values";
  c.data["fixtures"] = std::move(rows);
  return c;
}

// 6 ---------------------------------------------------------------------------------

inline double max_current_divergence(const SpinorField& f, const std::vector<Vec3>& pts, double h) {
  double worst = 0.0;
  for (const Vec3& x : pts) worst = std::max(worst, std::abs(current_divergence(f, x, h)));
  return worst;
}

/// Flux of the regularized string current through disks transverse to the
/// traced fibers, compared with each fiber's winding number.
inline double worst_flux_error(const SpinorField& f, const KnotFamily& fam, json& rows) {
  double worst = 0.0;
  for (std::size_t k = 0; k < fam.curves.size(); ++k) {
    const auto& curve = fam.curves[k];
    const std::size_t n = curve.points.size();
    for (std::size_t s = 0; s < 4; ++s) {
      const std::size_t i = s * n / 4;
      const Vec3 tangent = curve.points[(i + 1) % n] - curve.points[(i + n - 1) % n];
      const double flux = string_current_flux(f, fam.target, curve.points[i], tangent, 0.2, 0.02);
      const double rel = std::abs(flux - curve.winding) / std::max(1, std::abs(curve.winding));
      worst = std::max(worst, rel);
      rows.push_back(json{{"curve", k}, {"winding", curve.winding}, {"flux", flux}});
    }
  }
  return worst;
}

inline Check current_structure(const Options& opt) {
  Check c{6, "current structure", true, "", json::object()};
  std::mt19937_64 rng(99);
  double best_order = 1e9, worst_order = 0.0, worst_flux = 0.0;
  json rows = json::array();
  for (const char* preset : {"hopf", "twisted:1,2", "twisted:2,1", "twisted:2,2"}) {
    const SpinorField f = SpinorField::preset(preset);
    const auto pts = random_points_r3(rng, 40, 1.5);
    const double e1 = max_current_divergence(f, pts, 1e-2), e2 = max_current_divergence(f, pts, 5e-3);
    const double order = observed_order(e1, e2);
    best_order = std::min(best_order, order);
    worst_order = std::max(worst_order, order);
    const FamilyRun run = extract_family(f, default_targets(f).front(), opt.run);
    json flux = json::array();
    const double err = worst_flux_error(f, run.family, flux);
    worst_flux = std::max(worst_flux, err);
    rows.push_back(json{{"preset", preset}, {"divergence_h", e1}, {"divergence_h2", e2}, {"order", order},
                        {"max_relative_flux_error", err}, {"flux", std::move(flux)}});
  }
  c.pass = best_order > 1.8 && worst_order < 2.2 && worst_flux < 0.05;
  c.detail = "div j order in [" + fmt(best_order, 3) + ", " + fmt(worst_order, 3) +
             "] (target 2); max relative disk-flux error " + fmt(worst_flux) + " (limit 5e-2)";
  c.data["presets"] = std::move(rows);
  return c;
}

// 7 ---------------------------------------------------------------------------------

/// Residuals below this are round-off: the integrand is integrated exactly
/// and there is no discretization error left to decrease.
inline constexpr double kRoundoffFloor = 1e-12;

inline Check convergence(const Options& opt) {
  Check c{7, "convergence", true, "", json::object()};
  json table = json::array();
  int failed = 0, exact = 0;
  for (const auto& pc : opt.presets) {
    const SpinorField f = SpinorField::preset(pc.preset);
    const double rc = std::abs(whitehead_value(f, S3Grid(opt.coarse)) - static_cast<double>(pc.expected));
    const double rf = std::abs(whitehead_value(f, S3Grid(opt.fine)) - static_cast<double>(pc.expected));
    std::string status;
    if (rc < kRoundoffFloor && rf < kRoundoffFloor) {
      status = "exact";
      ++exact;
    } else if (rf < rc) {
      status = "decreasing";
    } else {
      status = "not decreasing";
      ++failed;
    }
    json row;
    row["preset"] = pc.preset;
    row["residual_" + std::to_string(opt.coarse)] = rc;
    row["residual_" + std::to_string(opt.fine)] = rf;
    if (status == "decreasing") row["order"] = std::log(rc / rf) / std::log(double(opt.fine) / opt.coarse);
    row["status"] = status;
    table.push_back(std::move(row));
  }
  c.pass = failed == 0;
  c.detail = std::to_string(opt.presets.size() - failed - exact) + " presets decrease strictly from " +
             std::to_string(opt.coarse) + "^3 to " + std::to_string(opt.fine) + "^3, " + std::to_string(exact) +
             " exact to round-off at both, " + std::to_string(failed) + " fail";
  c.data["table"] = std::move(table);
  return c;
}

// ------------------------------------------------------------------------------------

inline std::vector<Check> run_all(const Options& opt) {
  return {grand_identity(opt), gauge_invariance(opt), curvature_equivalence(opt), linking_oracles(opt),
          white_formula(opt),  current_structure(opt), convergence(opt)};
}

inline json report(const std::vector<Check>& checks) {
  json j;
  j["format"] = "hopf-verify";
  j["version"] = io::kReportFormatVersion;
  bool all = true;
  json arr = json::array();
  for (const auto& c : checks) {
    all = all && c.pass;
    arr.push_back(json{{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}, {"data", c.data}});
  }
  j["pass"] = all;
  j["checks"] = std::move(arr);
  return j;
}

/// Plain-text convergence table of check 7.
inline std::string convergence_table(const Check& c, const Options& opt) {
  std::ostringstream s;
  const std::string kc = "residual_" + std::to_string(opt.coarse), kf = "residual_" + std::to_string(opt.fine);
  s << "preset          " << kc << "      " << kf << "      status\n";
  for (const auto& row : c.data["table"]) {
    std::string name = row["preset"].get<std::string>();
    name.resize(16, ' ');
    s << name << fmt(row[kc].get<double>()) << "      " << fmt(row[kf].get<double>()) << "      "
      << row["status"].get<std::string>() << "\n";
  }
  return s.str();
}

}  // namespace hopf::verify
