#pragma once
// End-to-end runs: pick targets and a fiber box for a field, run the selected
// methods, and collect everything into a report with a single exit verdict.

#include <chrono>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hopf/fibers.hpp"
#include "hopf/fields.hpp"
#include "hopf/invariant.hpp"
#include "hopf/io.hpp"
#include "hopf/links.hpp"

namespace hopf {

/// Point of S2 at polar angle theta and azimuth phi.
inline Vec3 from_spherical(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

/// The boundary value m0 is the image of every far point, so its fiber runs
/// through infinity. The default target sits 0.6 rad from -m0, away from both
/// poles (critical values of the twisted and power presets).
inline std::vector<Vec3> default_targets(const SpinorField& field) {
  return {perturb_target(-field.boundary_value(), 0.6)};
}

/// A fixed value of S3 that is regular for every preset.
inline Vec4 default_regular_value() { return Vec4(0.31, -0.52, 0.67, 0.43).normalized(); }

struct FiberBox {
  double half = 3.0;  // analytic fields: start from [-half, half]^3
  int nodes = 64;
  double max_half = 24.0;  // enlarge (doubling) while open curves remain
  int max_nodes = 160;
};

struct RunOptions {
  std::array<int, 3> grid{64, 64, 64};
  std::vector<Vec3> targets;  // empty: default_targets
  std::set<Method> methods{Method::whitehead, Method::degree_integral, Method::preimage_count, Method::link_sum,
                           Method::loop_integral};
  double tolerance = kRoundingThreshold;
  bool timing = true;
  FiberBox box;
  ExtractionOptions extraction;
  PreimageOptions preimage;
  double pushoff_angle = 0.02;
};

/// Parses a comma-separated method list; "all" selects every method, "links"
/// is an alias for link_sum, "degree" for degree_integral, "preimage" for
/// preimage_count and "loop" for loop_integral.
inline std::set<Method> parse_methods(const std::string& list) {
  std::set<Method> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const std::size_t comma = std::min(list.find(',', pos), list.size());
    const std::string tok = list.substr(pos, comma - pos);
    if (tok == "all") {
      out.insert({Method::whitehead, Method::degree_integral, Method::preimage_count, Method::link_sum,
                  Method::loop_integral});
    } else if (tok == "whitehead") {
      out.insert(Method::whitehead);
    } else if (tok == "degree" || tok == "degree_integral") {
      out.insert(Method::degree_integral);
    } else if (tok == "preimage" || tok == "preimage_count") {
      out.insert(Method::preimage_count);
    } else if (tok == "links" || tok == "link_sum") {
      out.insert(Method::link_sum);
    } else if (tok == "loop" || tok == "loop_integral") {
      out.insert(Method::loop_integral);
    } else if (!tok.empty()) {
      throw InvalidArgument("unknown method '" + tok + "'");
    }
    pos = comma + 1;
  }
  if (out.empty()) throw InvalidArgument("no methods selected");
  return out;
}

/// Fibers of one target together with their framings and linking data.
struct FamilyRun {
  Vec3 target = Vec3::UnitZ();
  KnotFamily family;
  std::vector<FramedCurve> framings;
  std::optional<LinkReport> links;
  std::optional<HopfEstimate> loop;
  std::string error;
};

inline BoxGrid box_for(const SpinorField& field, double half, int nodes) {
  if (const SampledData* d = field.data()) return d->grid;
  return BoxGrid::cube(half, nodes);
}

/// Extracts the fibers of `target`, enlarging the box for analytic fields
/// until no open curve remains, then frames every closed curve by push-off.
inline FamilyRun extract_family(const SpinorField& field, const Vec3& target, const RunOptions& opt) {
  FamilyRun run;
  run.target = target.normalized();
  double half = opt.box.half;
  int nodes = opt.box.nodes;
  BoxGrid grid = box_for(field, half, nodes);
  for (;;) {
    run.family = extract_fibers(field, grid, run.target, opt.extraction);
    if (run.family.open_curves.empty() || !field.analytic() || 2.0 * half > opt.box.max_half) break;
    half *= 2.0;
    nodes = std::min(opt.box.max_nodes, 2 * nodes);
    grid = box_for(field, half, nodes);
  }
  for (const auto& c : run.family.curves)
    run.framings.push_back(pushoff_framing(field, c, grid, opt.pushoff_angle, opt.extraction));
  return run;
}

struct MethodResult {
  HopfEstimate estimate;
  double seconds = 0.0;
  std::string error;  // non-empty: the method failed and `estimate` is not meaningful
};

struct HopfReport {
  std::string field;
  std::array<int, 3> grid{0, 0, 0};
  std::vector<MethodResult> results;
  std::vector<FamilyRun> families;
  std::vector<std::string> warnings;
  bool open_curves = false;

  /// Integer shared by all converged estimates, if they agree.
  std::optional<long> common_integer() const {
    std::optional<long> v;
    for (const auto& r : results) {
      if (!r.error.empty() || !r.estimate.converged) continue;
      if (v && *v != r.estimate.rounded) return std::nullopt;
      v = r.estimate.rounded;
    }
    return v;
  }
  bool agree() const { return common_integer().has_value(); }
  bool failures() const {
    for (const auto& r : results)
      if (!r.error.empty()) return true;
    return false;
  }
  /// 0 when the converged methods agree; 2 on disagreement, open curves or a
  /// failed method.
  int exit_code() const { return agree() && !open_curves && !failures() ? 0 : 2; }
};

namespace detail {

template <class F>
MethodResult timed(Method method, F&& f) {
  MethodResult r;
  r.estimate.method = method;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    r.estimate = f();
  } catch (const Error& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace detail

inline HopfReport run_hopf(const SpinorField& field, const RunOptions& opt) {
  HopfReport rep;
  rep.field = field.name();
  rep.grid = opt.grid;
  const S3Grid grid(opt.grid[0], opt.grid[1], opt.grid[2]);
  auto rethreshold = [&](HopfEstimate e) { return make_estimate(e.value, e.method, e.resolution, opt.tolerance); };

  if (opt.methods.count(Method::whitehead))
    rep.results.push_back(detail::timed(Method::whitehead, [&] { return rethreshold(hopf_whitehead(field, grid)); }));
  if (opt.methods.count(Method::degree_integral))
    rep.results.push_back(detail::timed(Method::degree_integral, [&] { return rethreshold(gauss_degree_integral(field, grid)); }));
  if (opt.methods.count(Method::preimage_count))
    rep.results.push_back(detail::timed(Method::preimage_count, [&] {
      return rethreshold(hopf_preimage_estimate(field, default_regular_value(), opt.preimage));
    }));

  const bool want_links = opt.methods.count(Method::link_sum) || opt.methods.count(Method::loop_integral);
  if (want_links) {
    const std::vector<Vec3> targets = opt.targets.empty() ? default_targets(field) : opt.targets;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const auto t0 = std::chrono::steady_clock::now();
      FamilyRun run;
      try {
        run = extract_family(field, targets[t], opt);
      } catch (const Error& e) {
        run.target = targets[t];
        run.error = e.what();
      }
      const double extract_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      for (const auto& w : run.family.warnings) rep.warnings.push_back("target " + std::to_string(t) + ": " + w);
      if (!run.family.open_curves.empty()) rep.open_curves = true;
      const std::string tag = "target:" + std::to_string(t) + ",segments:" + std::to_string(opt.extraction.resample_segments);
      if (opt.methods.count(Method::link_sum)) {
        MethodResult r = detail::timed(Method::link_sum, [&] {
          if (!run.error.empty()) throw Error(run.error);
          run.links = hopf_from_links(run.family, run.framings);
          return make_estimate(run.links->h_link_sum, Method::link_sum, tag, opt.tolerance);
        });
        r.seconds += extract_seconds;
        rep.results.push_back(std::move(r));
      }
      if (opt.methods.count(Method::loop_integral)) {
        MethodResult r = detail::timed(Method::loop_integral, [&] {
          if (!run.error.empty()) throw Error(run.error);
          run.loop = hopf_loop_integral(run.family, run.framings);
          return make_estimate(run.loop->value, Method::loop_integral, tag, opt.tolerance);
        });
        rep.results.push_back(std::move(r));
      }
      rep.families.push_back(std::move(run));
    }
  }
  for (const auto& r : rep.results)
    if (r.error.empty() && !r.estimate.converged)
      rep.warnings.push_back(std::string(to_string(r.estimate.method)) + " did not converge (residual " +
                             std::to_string(r.estimate.residual) + ")");
  return rep;
}

inline io::json family_summary(const FamilyRun& run) {
  io::json j;
  j["target"] = io::to_json(run.target);
  j["closed_curves"] = run.family.curves.size();
  j["open_curves"] = run.family.open_curves.size();
  j["rejected_short"] = run.family.rejected_short;
  std::vector<int> w;
  std::vector<double> len;
  for (const auto& c : run.family.curves) {
    w.push_back(c.winding);
    len.push_back(c.length());
  }
  j["windings"] = w;
  j["lengths"] = len;
  if (run.links) j["links"] = io::to_json(*run.links);
  if (!run.error.empty()) j["error"] = run.error;
  return j;
}

inline io::json to_json(const HopfReport& rep, bool with_timing) {
  io::json j;
  j["format"] = "hopf-report";
  j["version"] = io::kReportFormatVersion;
  j["field"] = rep.field;
  j["grid"] = rep.grid;
  io::json methods = io::json::array();
  for (const auto& r : rep.results) {
    io::json m = io::to_json(r.estimate);
    if (!r.error.empty()) {
      m = io::json::object();
      m["method"] = to_string(r.estimate.method);
      m["error"] = r.error;
    }
    if (with_timing) m["seconds"] = r.seconds;
    methods.push_back(std::move(m));
  }
  j["methods"] = std::move(methods);
  io::json fams = io::json::array();
  for (const auto& f : rep.families) fams.push_back(family_summary(f));
  j["families"] = std::move(fams);
  const auto common = rep.common_integer();
  j["agree"] = common.has_value();
  j["hopf_invariant"] = common ? io::json(*common) : io::json(nullptr);
  j["open_curves"] = rep.open_curves;
  j["warnings"] = rep.warnings;
  return j;
}

}  // namespace hopf
