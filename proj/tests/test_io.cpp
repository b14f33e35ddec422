#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "hopf/fixtures.hpp"
#include "hopf/io.hpp"

using namespace hopf;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "hopf_io_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Base64, KnownVectors) {
  EXPECT_EQ(io::base64_encode(""), "");
  EXPECT_EQ(io::base64_encode("M"), "TQ==");
  EXPECT_EQ(io::base64_encode("Ma"), "TWE=");
  EXPECT_EQ(io::base64_encode("Man"), "TWFu");
  EXPECT_EQ(io::base64_decode("TWFu\nTQ=="), "ManM");
}

TEST(Base64, RoundTrip) {
  std::mt19937_64 rng(41);
  for (std::size_t len = 0; len < 40; ++len) {
    std::string s(len, '\0');
    for (auto& ch : s) ch = static_cast<char>(rng() & 0xff);
    EXPECT_EQ(io::base64_decode(io::base64_encode(s)), s);
  }
}

TEST(SampledFile, RoundTripIsBitExact) {
  const SpinorField f = SpinorField::twisted(2, 1);
  const BoxGrid grid(Vec3(-1, -2, -1.5), Vec3(1, 2, 0.5), {5, 7, 6});
  const auto values = sample_on_box(f, grid);
  for (auto enc : {io::Encoding::base64, io::Encoding::raw}) {
    const auto path = scratch(enc == io::Encoding::raw ? "raw.field" : "b64.field");
    io::write_sampled_field(path, grid, values, f.boundary_value(), enc);
    const auto data = io::read_sampled_data(path);
    EXPECT_EQ(data->grid.dims(), grid.dims());
    EXPECT_EQ(data->grid.lo(), grid.lo());
    EXPECT_EQ(data->grid.hi(), grid.hi());
    ASSERT_EQ(data->values.size(), values.size());
    // Loading renormalizes, which may move the last bit.
    for (std::size_t i = 0; i < values.size(); ++i) EXPECT_NEAR((data->values[i] - values[i]).norm(), 0.0, 1e-15);
    EXPECT_NEAR((data->boundary_m - f.boundary_value()).norm(), 0.0, 1e-15);
  }
}

TEST(SampledFile, PayloadIsBitExact) {
  const auto values = sample_on_box(SpinorField::power(3), BoxGrid::cube(1.0, 4));
  const std::string bytes = io::encode_spinors(values);
  EXPECT_EQ(bytes.size(), 32 * values.size());
  EXPECT_EQ(io::decode_spinors(io::base64_decode(io::base64_encode(bytes)), values.size()), values);
  EXPECT_THROW(io::decode_spinors(bytes.substr(1), values.size()), FormatError);
}

TEST(SampledFile, MalformedInputs) {
  const auto path = scratch("bad.field");
  auto expect_bad = [&](const std::string& text) {
    io::write_text(path, text);
    EXPECT_THROW(io::read_sampled_data(path), FormatError) << text;
  };
  const std::string head = "hopf-sampled-field 1\ndims 2 2 2\nlo -1 -1 -1\nhi 1 1 1\nboundary_m 0 0 1\n";
  expect_bad("");
  expect_bad("something else\n");
  expect_bad("hopf-sampled-field 9\n");
  expect_bad(head + "encoding base64\ndata\nAAAA\n");               // payload too short
  expect_bad(head + "encoding zip\n");                               // unknown encoding
  expect_bad(head + "colour blue\n");                                // unknown key
  expect_bad("hopf-sampled-field 1\ndims 2 2 2\nencoding base64\n");  // incomplete header
  expect_bad(head + "encoding raw\ndata_file missing.bin\n");
  EXPECT_THROW(io::read_sampled_data(scratch("does_not_exist.field")), FormatError);
}

TEST(CurveFile, RoundTrip) {
  const FramedCurve fc = fixtures::twisted_unknot(2, 64);
  KnotFamily fam;
  fam.target = Vec3(0.6, 0, 0.8);
  FiberCurve c;
  c.points = fc.base;
  c.winding = -1;
  c.target = fam.target;
  fam.curves.push_back(c);
  FiberCurve open = c;
  open.closed = false;
  open.winding = 0;
  fam.open_curves.push_back(open);
  fam.warnings.push_back("note");
  const std::vector<std::vector<FramedCurve>> framings{{fc}};
  const auto parsed = io::parse_curve_file(io::json::parse(io::curve_file_json({fam}, &framings).dump()));
  ASSERT_EQ(parsed.size(), 1u);
  const auto& s = parsed[0];
  ASSERT_EQ(s.family.curves.size(), 1u);
  EXPECT_EQ(s.family.open_curves.size(), 1u);
  EXPECT_EQ(s.family.curves[0].winding, -1);
  EXPECT_EQ(s.family.curves[0].points, c.points);
  ASSERT_EQ(s.framings.size(), 1u);
  EXPECT_EQ(s.framings[0], fc.framing);
  EXPECT_EQ(s.family.warnings, fam.warnings);
  EXPECT_EQ(make_framed(s.family.curves[0].points, s.framings[0]).framing.size(), 64u);
}

TEST(CurveFile, Rejects) {
  EXPECT_THROW(io::parse_curve_file(io::json::parse(R"({"format":"other","version":1,"families":[]})")), FormatError);
  EXPECT_THROW(io::parse_curve_file(io::json::parse(R"({"format":"hopf-curves","version":2,"families":[]})")),
               FormatError);
  EXPECT_THROW(io::parse_curve_file(io::json::parse(R"({"format":"hopf-curves","version":1,"families":[{"curves":3}]})")),
               FormatError);
}
