#pragma once
// File formats: sampled spinor fields (text header + base64 or raw
// little-endian float64 payload) and JSON curve files. Layouts are described
// in docs/formats.md.

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <boost/archive/iterators/base64_from_binary.hpp>
#include <boost/archive/iterators/binary_from_base64.hpp>
#include <boost/archive/iterators/transform_width.hpp>
#include <json.hpp>

#include "hopf/error.hpp"
#include "hopf/fibers.hpp"
#include "hopf/fields.hpp"
#include "hopf/links.hpp"

namespace hopf::io {

using json = nlohmann::ordered_json;

inline constexpr int kFieldFormatVersion = 1;
inline constexpr int kCurveFormatVersion = 1;
inline constexpr int kReportFormatVersion = 1;

// --- base64 ---------------------------------------------------------------------

inline std::string base64_encode(const std::string& bytes) {
  namespace it = boost::archive::iterators;
  using enc = it::base64_from_binary<it::transform_width<std::string::const_iterator, 6, 8>>;
  std::string out(enc(bytes.begin()), enc(bytes.end()));
  out.append((3 - bytes.size() % 3) % 3, '=');
  return out;
}

inline std::string base64_decode(std::string text) {
  namespace it = boost::archive::iterators;
  std::erase_if(text, [](unsigned char c) { return std::isspace(c); });
  if (text.size() % 4 != 0) throw FormatError("base64: length is not a multiple of 4");
  std::size_t pad = 0;
  while (!text.empty() && text.back() == '=') {
    text.pop_back();
    ++pad;
  }
  if (pad > 2) throw FormatError("base64: bad padding");
  for (unsigned char c : text)
    if (!std::isalnum(c) && c != '+' && c != '/') throw FormatError("base64: invalid character");
  using dec = it::transform_width<it::binary_from_base64<std::string::const_iterator>, 8, 6>;
  std::string out(dec(text.begin()), dec(text.end()));
  // transform_width emits a trailing partial byte for unpadded tails.
  out.resize((text.size() + pad) / 4 * 3 - pad);
  return out;
}

// --- little-endian float64 ----------------------------------------------------------

inline void put_f64(std::string& out, double v) {
  std::uint64_t u = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((u >> (8 * b)) & 0xffu));
}

inline double get_f64(const char* p) {
  std::uint64_t u = 0;
  for (int b = 0; b < 8; ++b) u |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[b])) << (8 * b);
  return std::bit_cast<double>(u);
}

inline std::string encode_spinors(const std::vector<Spinor>& values) {
  std::string out;
  out.reserve(values.size() * 32);
  for (const Spinor& z : values) {
    put_f64(out, z[0].real());
    put_f64(out, z[0].imag());
    put_f64(out, z[1].real());
    put_f64(out, z[1].imag());
  }
  return out;
}

inline std::vector<Spinor> decode_spinors(const std::string& bytes, std::size_t count) {
  if (bytes.size() != count * 32)
    throw FormatError("sampled field: payload has " + std::to_string(bytes.size()) + " bytes, expected " +
                      std::to_string(count * 32));
  std::vector<Spinor> out(count);
  for (std::size_t n = 0; n < count; ++n) {
    const char* p = bytes.data() + 32 * n;
    out[n] = Spinor(Complex(get_f64(p), get_f64(p + 8)), Complex(get_f64(p + 16), get_f64(p + 24)));
  }
  return out;
}

// --- sampled fields ---------------------------------------------------------------

enum class Encoding { base64, raw };

/// Writes a sampled field. With Encoding::raw the payload goes to a sidecar
/// file named `<stem>.bin` next to `path`.
inline void write_sampled_field(const std::filesystem::path& path, const BoxGrid& grid,
                                const std::vector<Spinor>& values, const Vec3& boundary_m,
                                Encoding enc = Encoding::base64) {
  if (values.size() != grid.size()) throw InvalidArgument("write_sampled_field: value count does not match grid");
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out.precision(17);
  out << "hopf-sampled-field " << kFieldFormatVersion << "\n";
  out << "dims " << grid.dims()[0] << " " << grid.dims()[1] << " " << grid.dims()[2] << "\n";
  out << "lo " << grid.lo()[0] << " " << grid.lo()[1] << " " << grid.lo()[2] << "\n";
  out << "hi " << grid.hi()[0] << " " << grid.hi()[1] << " " << grid.hi()[2] << "\n";
  out << "boundary_m " << boundary_m[0] << " " << boundary_m[1] << " " << boundary_m[2] << "\n";
  const std::string payload = encode_spinors(values);
  if (enc == Encoding::raw) {
    std::filesystem::path side = path;
    side.replace_extension(".bin");
    std::ofstream bin(side, std::ios::binary);
    if (!bin) throw FormatError("cannot write " + side.string());
    bin.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    out << "encoding raw\n";
    out << "data_file " << side.filename().string() << "\n";
  } else {
    out << "encoding base64\n";
    out << "data\n";
    const std::string b64 = base64_encode(payload);
    for (std::size_t i = 0; i < b64.size(); i += 76) out << b64.substr(i, 76) << "\n";
  }
  if (!out) throw FormatError("write failed: " + path.string());
}

inline std::shared_ptr<const SampledData> read_sampled_data(const std::filesystem::path& path,
                                                            OutsidePolicy policy = OutsidePolicy::boundary_value) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": empty file");
  {
    std::istringstream head(line);
    std::string magic;
    int version = 0;
    if (!(head >> magic >> version) || magic != "hopf-sampled-field")
      throw FormatError(path.string() + ": not a sampled field file");
    if (version != kFieldFormatVersion)
      throw FormatError(path.string() + ": unsupported format version " + std::to_string(version));
  }
  std::array<int, 3> dims{0, 0, 0};
  Vec3 lo, hi, m0;
  bool have_dims = false, have_lo = false, have_hi = false, have_m0 = false;
  std::string encoding, data_file, inline_data;
  bool in_data = false;
  auto read3 = [&](std::istringstream& s, auto& v, const std::string& key) {
    for (int a = 0; a < 3; ++a)
      if (!(s >> v[a])) throw FormatError(path.string() + ": bad value for '" + key + "'");
  };
  while (std::getline(in, line)) {
    if (in_data) {
      inline_data += line;
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    std::istringstream s(line);
    std::string key;
    s >> key;
    if (key == "dims") {
      read3(s, dims, key);
      have_dims = true;
    } else if (key == "lo") {
      read3(s, lo, key);
      have_lo = true;
    } else if (key == "hi") {
      read3(s, hi, key);
      have_hi = true;
    } else if (key == "boundary_m") {
      read3(s, m0, key);
      have_m0 = true;
    } else if (key == "encoding") {
      s >> encoding;
    } else if (key == "data_file") {
      s >> data_file;
    } else if (key == "data") {
      in_data = true;
    } else {
      throw FormatError(path.string() + ": unknown header key '" + key + "'");
    }
  }
  if (!(have_dims && have_lo && have_hi && have_m0)) throw FormatError(path.string() + ": incomplete header");
  if (std::abs(m0.norm() - 1.0) > 1e-6) throw FormatError(path.string() + ": boundary_m is not a unit vector");
  BoxGrid grid = [&] {
    try {
      return BoxGrid(lo, hi, dims);
    } catch (const InvalidArgument& e) {
      throw FormatError(path.string() + ": " + e.what());
    }
  }();
  std::string bytes;
  if (encoding == "base64") {
    if (!in_data) throw FormatError(path.string() + ": base64 encoding without a data section");
    bytes = base64_decode(inline_data);
  } else if (encoding == "raw") {
    if (data_file.empty()) throw FormatError(path.string() + ": raw encoding without data_file");
    const auto side = path.parent_path() / data_file;
    std::ifstream bin(side, std::ios::binary);
    if (!bin) throw FormatError("cannot open " + side.string());
    bytes.assign(std::istreambuf_iterator<char>(bin), std::istreambuf_iterator<char>());
  } else {
    throw FormatError(path.string() + ": unknown encoding '" + encoding + "'");
  }
  return std::make_shared<const SampledData>(grid, decode_spinors(bytes, grid.size()), m0, policy);
}

inline SpinorField read_sampled_field(const std::filesystem::path& path,
                                      OutsidePolicy policy = OutsidePolicy::boundary_value) {
  return SpinorField::sampled(read_sampled_data(path, policy));
}

// --- curves ---------------------------------------------------------------------

inline json to_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

inline Vec3 vec3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw FormatError("expected a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline json curve_to_json(const FiberCurve& c, const std::vector<Vec3>* framing = nullptr) {
  json j;
  j["closed"] = c.closed;
  j["winding"] = c.winding;
  j["target"] = to_json(c.target);
  j["segments"] = c.segments();
  j["length"] = c.length();
  json pts = json::array();
  for (const Vec3& p : c.points) pts.push_back(to_json(p));
  j["points"] = std::move(pts);
  if (framing) {
    json f = json::array();
    for (const Vec3& v : *framing) f.push_back(to_json(v));
    j["framing"] = std::move(f);
  }
  return j;
}

struct StoredCurve {
  FiberCurve curve;
  std::vector<Vec3> framing;  // empty when the file carries none
};

inline StoredCurve curve_from_json(const json& j) {
  StoredCurve s;
  try {
    s.curve.closed = j.at("closed").get<bool>();
    s.curve.winding = j.at("winding").get<int>();
    s.curve.target = j.contains("target") ? vec3_from_json(j["target"]) : Vec3(0.0, 0.0, 1.0);
    for (const auto& p : j.at("points")) s.curve.points.push_back(vec3_from_json(p));
    if (j.contains("framing"))
      for (const auto& f : j["framing"]) s.framing.push_back(vec3_from_json(f));
  } catch (const json::exception& e) {
    throw FormatError(std::string("curve: ") + e.what());
  }
  if (s.curve.points.size() < 3) throw FormatError("curve: fewer than 3 points");
  if (!s.framing.empty() && s.framing.size() != s.curve.points.size())
    throw FormatError("curve: framing count does not match point count");
  return s;
}

/// A family as stored in a curve file, with optional per-curve framings.
struct StoredFamily {
  KnotFamily family;
  std::vector<std::vector<Vec3>> framings;  // parallel to family.curves
};

inline json family_to_json(const KnotFamily& fam, const std::vector<FramedCurve>* framings = nullptr) {
  json j;
  j["target"] = to_json(fam.target);
  json meta;
  meta["lo"] = to_json(fam.metadata.lo);
  meta["hi"] = to_json(fam.metadata.hi);
  meta["dims"] = fam.metadata.dims;
  meta["probe_radius"] = fam.metadata.probe_radius;
  meta["resample_segments"] = fam.metadata.resample_segments;
  meta["jitter_attempts"] = fam.metadata.jitter_attempts;
  meta["rejected_short"] = fam.rejected_short;
  j["metadata"] = std::move(meta);
  json curves = json::array();
  for (std::size_t i = 0; i < fam.curves.size(); ++i)
    curves.push_back(curve_to_json(fam.curves[i], framings ? &(*framings)[i].framing : nullptr));
  for (const auto& c : fam.open_curves) curves.push_back(curve_to_json(c));
  j["curves"] = std::move(curves);
  j["warnings"] = fam.warnings;
  return j;
}

inline StoredFamily family_from_json(const json& j) {
  StoredFamily s;
  try {
    s.family.target = j.contains("target") ? vec3_from_json(j["target"]) : Vec3(0.0, 0.0, 1.0);
    if (j.contains("metadata")) {
      const auto& m = j["metadata"];
      if (m.contains("lo")) s.family.metadata.lo = vec3_from_json(m["lo"]);
      if (m.contains("hi")) s.family.metadata.hi = vec3_from_json(m["hi"]);
      if (m.contains("dims")) s.family.metadata.dims = m["dims"].get<std::array<int, 3>>();
    }
    for (const auto& c : j.at("curves")) {
      StoredCurve sc = curve_from_json(c);
      if (sc.curve.closed) {
        s.family.curves.push_back(std::move(sc.curve));
        s.framings.push_back(std::move(sc.framing));
      } else {
        s.family.open_curves.push_back(std::move(sc.curve));
      }
    }
    if (j.contains("warnings")) s.family.warnings = j["warnings"].get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("family: ") + e.what());
  }
  return s;
}

inline json curve_file_json(const std::vector<KnotFamily>& families,
                            const std::vector<std::vector<FramedCurve>>* framings = nullptr) {
  json j;
  j["format"] = "hopf-curves";
  j["version"] = kCurveFormatVersion;
  json fams = json::array();
  for (std::size_t i = 0; i < families.size(); ++i)
    fams.push_back(family_to_json(families[i], framings ? &(*framings)[i] : nullptr));
  j["families"] = std::move(fams);
  return j;
}

inline std::vector<StoredFamily> parse_curve_file(const json& j) {
  if (j.value("format", "") != "hopf-curves") throw FormatError("not a hopf-curves document");
  if (j.value("version", 0) != kCurveFormatVersion) throw FormatError("unsupported curve file version");
  if (!j.contains("families") || !j["families"].is_array()) throw FormatError("curve file: missing 'families'");
  std::vector<StoredFamily> out;
  for (const auto& f : j["families"]) out.push_back(family_from_json(f));
  return out;
}

inline json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

inline std::vector<StoredFamily> read_curve_file(const std::filesystem::path& path) {
  return parse_curve_file(read_json(path));
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
}

// --- reports ----------------------------------------------------------------------

inline json to_json(const HopfEstimate& e) {
  json j;
  j["method"] = to_string(e.method);
  j["value"] = e.value;
  j["rounded"] = e.rounded;
  j["residual"] = e.residual;
  j["converged"] = e.converged;
  j["resolution"] = e.resolution;
  return j;
}

inline json to_json(const LinkReport& r) {
  json j;
  const auto n = r.linking.rows();
  json mat = json::array();
  for (Eigen::Index a = 0; a < n; ++a) {
    json row = json::array();
    for (Eigen::Index b = 0; b < n; ++b) row.push_back(r.linking(a, b));
    mat.push_back(std::move(row));
  }
  j["linking"] = std::move(mat);
  j["windings"] = r.windings;
  j["self_linking"] = r.self_linking;
  j["twist"] = r.twist;
  j["writhe"] = r.writhe;
  j["h_link_sum"] = r.h_link_sum;
  j["h_rounded"] = r.h_rounded;
  return j;
}

}  // namespace hopf::io
