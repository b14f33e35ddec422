// Writes the input files used by the command-line tests.
#include <filesystem>
#include <iostream>

#include "hopf/fixtures.hpp"
#include "hopf/io.hpp"

using namespace hopf;

namespace {

KnotFamily family_of(const std::vector<Polyline>& curves, bool closed = true) {
  KnotFamily fam;
  for (const auto& c : curves) {
    FiberCurve fc;
    fc.points = c;
    fc.closed = closed;
    fc.winding = closed ? 1 : 0;
    (closed ? fam.curves : fam.open_curves).push_back(fc);
  }
  return fam;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_test_data DIR\n";
    return 1;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);
  const SpinorField h = SpinorField::hopf();

  const BoxGrid big = BoxGrid::cube(2.5, 48);
  io::write_sampled_field(dir / "hopf_sampled.field", big, sample_on_box(h, big), h.boundary_value());
  const BoxGrid small(Vec3(-1.5, -1.5, -0.5), Vec3(0.5, 1.5, 0.5), {32, 48, 16});
  io::write_sampled_field(dir / "open.field", small, sample_on_box(h, small), h.boundary_value(), io::Encoding::raw);
  io::write_text(dir / "corrupt.field", "hopf-sampled-field 1\ndims 4 4 4\nlo -1 -1 -1\nhi 1 1 1\nboundary_m 0 0 1\n"
                                        "encoding base64\ndata\nAAAA\n");

  const auto [a, b] = fixtures::hopf_link();
  io::write_text(dir / "hopf_link.json", io::curve_file_json({family_of({a, b})}).dump(2));
  const FramedCurve unknot = fixtures::twisted_unknot(0);
  io::write_text(dir / "unknot.json", io::curve_file_json({family_of({unknot.base})}).dump(2));
  io::write_text(dir / "open_curve.json", io::curve_file_json({family_of({a}, false)}).dump(2));
  io::write_text(dir / "malformed.json", "{\"format\": \"hopf-curves\", \"version\": 1, \"families\": [{\"curves\": 3}]}");
  return 0;
}
