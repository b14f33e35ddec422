// hopf: Hopf invariant of maps S3 -> S2 by four routes, fiber extraction,
// linking reports and the verification matrix.
//
// Exit codes: 0 methods agree, 1 usage or data error, 2 disagreement or open curves.

#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hopf/hopf.hpp"

namespace {

using hopf::io::json;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kDisagree = 2;

struct Config {
  std::string preset;
  std::string input;
  std::string outside = "boundary";
  std::string grid = "64";
  std::string targets;
  std::string methods = "all";
  double tol = hopf::kRoundingThreshold;
  bool deterministic = false;
  unsigned threads = 0;
  std::string out;
  bool json = false;
  double box = 3.0;
  int box_nodes = 64;
  int segments = 256;
  std::vector<std::string> curve_files;
};

std::array<int, 3> parse_grid(const std::string& s) {
  std::vector<int> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || tok.empty()) throw hopf::InvalidArgument("bad --grid value '" + s + "'");
    v.push_back(n);
  }
  if (v.size() == 1) return {v[0], v[0], v[0]};
  if (v.size() == 3) return {v[0], v[1], v[2]};
  throw hopf::InvalidArgument("--grid takes N or N,N,N");
}

/// "theta,phi;theta,phi" in radians.
std::vector<hopf::Vec3> parse_targets(const std::string& s) {
  std::vector<hopf::Vec3> out;
  std::stringstream ss(s);
  std::string pair;
  while (std::getline(ss, pair, ';')) {
    if (pair.empty()) continue;
    const auto comma = pair.find(',');
    if (comma == std::string::npos) throw hopf::InvalidArgument("--targets entries are 'theta,phi'");
    try {
      std::size_t u1 = 0, u2 = 0;
      const std::string a = pair.substr(0, comma), b = pair.substr(comma + 1);
      const double theta = std::stod(a, &u1), phi = std::stod(b, &u2);
      if (u1 != a.size() || u2 != b.size()) throw std::invalid_argument("trailing");
      out.push_back(hopf::from_spherical(theta, phi));
    } catch (const std::exception&) {
      throw hopf::InvalidArgument("bad --targets entry '" + pair + "'");
    }
  }
  if (out.empty()) throw hopf::InvalidArgument("--targets is empty");
  return out;
}

hopf::SpinorField load_field(const Config& c) {
  if (!c.preset.empty() && !c.input.empty()) throw hopf::InvalidArgument("give either --preset or --input, not both");
  if (!c.input.empty()) {
    hopf::OutsidePolicy policy;
    if (c.outside == "boundary")
      policy = hopf::OutsidePolicy::boundary_value;
    else if (c.outside == "error")
      policy = hopf::OutsidePolicy::error;
    else
      throw hopf::InvalidArgument("--outside takes 'boundary' or 'error'");
    return hopf::io::read_sampled_field(c.input, policy);
  }
  if (c.preset.empty()) throw hopf::InvalidArgument("a field source is required: --preset NAME[:params] or --input PATH");
  return hopf::SpinorField::preset(c.preset);
}

hopf::RunOptions run_options(const Config& c) {
  hopf::RunOptions o;
  o.grid = parse_grid(c.grid);
  if (!c.targets.empty()) o.targets = parse_targets(c.targets);
  o.methods = hopf::parse_methods(c.methods);
  if (!(c.tol > 0.0 && c.tol < 0.5)) throw hopf::InvalidArgument("--tol must lie in (0, 0.5)");
  o.tolerance = c.tol;
  o.timing = !c.deterministic;
  if (!(c.box > 0.0)) throw hopf::InvalidArgument("--box must be positive");
  o.box.half = c.box;
  o.box.nodes = c.box_nodes;
  if (c.segments < 8) throw hopf::InvalidArgument("--segments must be at least 8");
  o.extraction.resample_segments = c.segments;
  return o;
}

void emit(const Config& c, const json& doc, const std::string& summary) {
  const std::string text = doc.dump(2) + "\n";
  if (!c.out.empty()) hopf::io::write_text(c.out, text);
  if (c.json)
    std::cout << text;
  else
    std::cout << summary;
}

std::string num(double v, int prec = 8) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(prec) << v;
  return s.str();
}

// --- hopf ---------------------------------------------------------------------------

int cmd_hopf(const Config& c) {
  const hopf::SpinorField field = load_field(c);
  const hopf::RunOptions opt = run_options(c);
  const hopf::HopfReport rep = hopf::run_hopf(field, opt);
  std::ostringstream s;
  s << "field " << rep.field << "  grid " << rep.grid[0] << "x" << rep.grid[1] << "x" << rep.grid[2] << "\n";
  for (const auto& r : rep.results) {
    s << "  " << std::left << std::setw(16) << hopf::to_string(r.estimate.method);
    if (!r.error.empty()) {
      s << "error: " << r.error;
    } else {
      s << std::setw(14) << num(r.estimate.value) << " -> " << std::setw(4) << r.estimate.rounded << " residual "
        << hopf::verify::fmt(r.estimate.residual, 2) << (r.estimate.converged ? "" : " (unconverged)");
      if (opt.timing) s << "  " << num(r.seconds, 2) << "s";
    }
    s << "\n";
  }
  for (const auto& w : rep.warnings) s << "warning: " << w << "\n";
  const auto h = rep.common_integer();
  if (rep.exit_code() == kOk)
    s << "H = " << *h << "\n";
  else
    s << "methods do not agree" << (rep.open_curves ? " (open curves present)" : "") << "\n";
  emit(c, hopf::to_json(rep, opt.timing), s.str());
  return rep.exit_code();
}

// --- fibers -------------------------------------------------------------------------

int cmd_fibers(const Config& c) {
  const hopf::SpinorField field = load_field(c);
  hopf::RunOptions opt = run_options(c);
  const std::vector<hopf::Vec3> targets = opt.targets.empty() ? hopf::default_targets(field) : opt.targets;
  std::vector<hopf::KnotFamily> families;
  std::vector<std::vector<hopf::FramedCurve>> framings;
  std::ostringstream s;
  bool open = false;
  if (const hopf::SampledData* d = field.data()) {
    const double dev = d->boundary_deviation();
    if (dev > 1e-2)
      s << "warning: boundary shell deviates from m0 by " << hopf::verify::fmt(dev, 2)
        << "; fibers may leave the box\n";
  }
  for (std::size_t t = 0; t < targets.size(); ++t) {
    hopf::FamilyRun run = hopf::extract_family(field, targets[t], opt);
    s << "target " << t << " (" << num(run.target[0], 4) << ", " << num(run.target[1], 4) << ", "
      << num(run.target[2], 4) << "): " << run.family.curves.size() << " closed, " << run.family.open_curves.size()
      << " open\n";
    for (const auto& curve : run.family.curves)
      s << "  closed  W=" << curve.winding << "  length " << num(curve.length(), 4) << "  segments "
        << curve.segments() << "\n";
    for (const auto& curve : run.family.open_curves)
      s << "  open    length " << num(curve.length(), 4) << "  segments " << curve.segments() << "\n";
    if (run.family.curves.empty() && run.family.open_curves.empty()) s << "warning: empty family\n";
    for (const auto& w : run.family.warnings) s << "warning: " << w << "\n";
    open = open || !run.family.open_curves.empty();
    families.push_back(std::move(run.family));
    framings.push_back(std::move(run.framings));
  }
  emit(c, hopf::io::curve_file_json(families, &framings), s.str());
  return open ? kDisagree : kOk;
}

// --- link ---------------------------------------------------------------------------

int cmd_link(const Config& c) {
  if (c.curve_files.empty()) throw hopf::InvalidArgument("link needs at least one curve file");
  std::vector<hopf::io::StoredFamily> stored;
  for (const auto& f : c.curve_files)
    for (auto& fam : hopf::io::read_curve_file(f)) stored.push_back(std::move(fam));

  json doc;
  doc["format"] = "hopf-link-report";
  doc["version"] = hopf::io::kReportFormatVersion;
  json fams = json::array();
  std::ostringstream s;
  bool open = false;
  std::vector<hopf::Polyline> all;
  for (std::size_t k = 0; k < stored.size(); ++k) {
    auto& sf = stored[k];
    json fj;
    fj["target"] = hopf::io::to_json(sf.family.target);
    if (!sf.family.open_curves.empty()) {
      open = true;
      fj["error"] = std::to_string(sf.family.open_curves.size()) + " open curve(s); linking sum undefined";
      s << "family " << k << ": " << sf.family.open_curves.size() << " open curve(s), excluded\n";
      fams.push_back(std::move(fj));
      continue;
    }
    std::vector<hopf::FramedCurve> framings;
    std::vector<std::string> framing_kind;
    for (std::size_t i = 0; i < sf.family.curves.size(); ++i) {
      const auto& curve = sf.family.curves[i];
      if (!sf.framings[i].empty()) {
        framings.push_back(hopf::make_framed(curve.points, sf.framings[i]));
        framing_kind.push_back("stored");
      } else {
        framings.push_back(hopf::blackboard_framing(curve.points));
        framing_kind.push_back("blackboard");
      }
      all.push_back(curve.points);
    }
    const hopf::LinkReport rep = hopf::hopf_from_links(sf.family, framings);
    fj["framing"] = framing_kind;
    fj["report"] = hopf::io::to_json(rep);
    s << "family " << k << ": " << sf.family.curves.size() << " curve(s)\n";
    for (std::size_t i = 0; i < rep.windings.size(); ++i)
      s << "  curve " << i << "  W=" << rep.windings[i] << "  SL=" << rep.self_linking[i] << " ("
        << framing_kind[i] << ")  Tw=" << num(rep.twist[i], 4) << "  Wr=" << num(rep.writhe[i], 4) << "\n";
    for (Eigen::Index a = 0; a < rep.linking.rows(); ++a)
      for (Eigen::Index b = a + 1; b < rep.linking.cols(); ++b)
        s << "  Lk(" << a << "," << b << ") = " << num(rep.linking(a, b), 6) << "\n";
    s << "  H_link_sum = " << num(rep.h_link_sum, 6) << " -> " << rep.h_rounded << "\n";
    fams.push_back(std::move(fj));
  }
  doc["families"] = std::move(fams);
  // Pairwise linking across every closed curve of every input.
  json pair = json::array();
  for (std::size_t a = 0; a < all.size(); ++a) {
    json row = json::array();
    for (std::size_t b = 0; b < all.size(); ++b) row.push_back(a == b ? 0.0 : hopf::gauss_linking(all[a], all[b]));
    pair.push_back(std::move(row));
  }
  doc["pairwise_linking"] = std::move(pair);
  doc["open_curves"] = open;
  emit(c, doc, s.str());
  return open ? kDisagree : kOk;
}

// --- verify -------------------------------------------------------------------------

int cmd_verify(const Config& c) {
  hopf::verify::Options opt;
  const auto g = parse_grid(c.grid);
  if (g[0] != g[1] || g[1] != g[2] || g[0] < 4) throw hopf::InvalidArgument("verify takes a cubic --grid N with N >= 4");
  opt.fine = g[0];
  opt.coarse = g[0] / 2;
  opt.timing = !c.deterministic;
  opt.run = run_options(c);
  if (!c.preset.empty()) {
    bool found = false;
    for (const auto& pc : hopf::verify::standard_presets())
      if (pc.preset == c.preset) {
        opt.presets = {pc};
        found = true;
      }
    if (!found) throw hopf::InvalidArgument("verify knows the expected invariant only for the standard presets");
  }
  const auto checks = hopf::verify::run_all(opt);
  std::ostringstream s;
  bool all = true;
  for (const auto& ch : checks) {
    all = all && ch.pass;
    s << (ch.pass ? "PASS" : "FAIL") << "  " << ch.id << ". " << ch.name << ": " << ch.detail << "\n";
  }
  s << "\nconvergence of the Whitehead integral\n" << hopf::verify::convergence_table(checks.back(), opt);
  emit(c, hopf::verify::report(checks), s.str());
  return all ? kOk : kDisagree;
}

void add_field_flags(CLI::App* app, Config& c) {
  app->add_option("--preset", c.preset, "Analytic field: constant, hopf, twisted:P,Q, power:N");
  app->add_option("--input", c.input, "Sampled field file");
  app->add_option("--outside", c.outside, "Sampled fields outside the box: boundary (default) or error");
}

void add_common_flags(CLI::App* app, Config& c) {
  app->add_option("--grid", c.grid, "S3 quadrature nodes: N or N,N,N (default 64)");
  app->add_option("--targets", c.targets, "Targets on S2 as 'theta,phi;...' in radians");
  app->add_option("--methods", c.methods,
                  "Comma list of whitehead, degree, preimage, links, loop, or all (default all)");
  app->add_option("--tol", c.tol, "Rounding threshold for convergence flags (default 0.1)");
  app->add_flag("--deterministic", c.deterministic, "Omit timings so reports are byte-reproducible");
  app->add_option("--threads", c.threads, "Worker threads (default: hardware concurrency)");
  app->add_option("--out", c.out, "Write the JSON document to this path");
  app->add_flag("--json", c.json, "Print the JSON document instead of the summary");
  app->add_option("--box", c.box, "Half-width of the initial fiber box for analytic fields (default 3)");
  app->add_option("--box-nodes", c.box_nodes, "Nodes per axis of the fiber box (default 64)");
  app->add_option("--segments", c.segments, "Segments per resampled fiber (default 256)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hopf invariant of maps S3 -> S2: Whitehead integral, Gauss-map degree, fiber linking sum, "
               "Biot-Savart loop integral"};
  app.require_subcommand(1);
  Config c;
  auto* hopf_cmd = app.add_subcommand("hopf", "Compute the Hopf invariant by the selected methods");
  auto* fibers_cmd = app.add_subcommand("fibers", "Extract preimage curves and write a curve file");
  auto* link_cmd = app.add_subcommand("link", "Linking report for curve files");
  auto* verify_cmd = app.add_subcommand("verify", "Run the verification matrix");
  for (auto* sub : {hopf_cmd, fibers_cmd, verify_cmd}) add_field_flags(sub, c);
  for (auto* sub : {hopf_cmd, fibers_cmd, link_cmd, verify_cmd}) add_common_flags(sub, c);
  link_cmd->add_option("curves", c.curve_files, "Curve files")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  try {
    hopf::thread_count() = c.threads;
    if (hopf_cmd->parsed()) return cmd_hopf(c);
    if (fibers_cmd->parsed()) return cmd_fibers(c);
    if (link_cmd->parsed()) return cmd_link(c);
    return cmd_verify(c);
  } catch (const hopf::OpenCurve& e) {
    std::cerr << "hopf: " << e.what() << "\n";
    return kDisagree;
  } catch (const hopf::Error& e) {
    std::cerr << "hopf: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "hopf: " << e.what() << "\n";
    return kUsage;
  }
}
