// Acceptance suite: one PASS/FAIL line per criterion. Criteria 1-7 come from
// the verification matrix; criterion 8 runs the matrix a second time with a
// different thread count and compares the deterministic reports byte for byte.
#include <cstdio>
#include <iostream>
#include <string>

#include "hopf/parallel.hpp"
#include "hopf/verify.hpp"

int main() {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  hopf::verify::Options opt;
  opt.timing = false;

  hopf::thread_count() = 1;
  const auto checks = hopf::verify::run_all(opt);
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.pass;
    std::cout << (c.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << c.detail << "\n";
  }
  const std::string first = hopf::verify::report(checks).dump(2);

  hopf::thread_count() = 4;
  const std::string second = hopf::verify::report(hopf::verify::run_all(opt)).dump(2);
  const bool same = first == second;
  all = all && same;
  std::cout << (same ? "PASS" : "FAIL") << " criterion 8 (determinism): reports from 1 and 4 threads are "
            << (same ? "byte-identical" : "different") << " (" << first.size() << " bytes)\n";

  std::cout << "\n" << hopf::verify::convergence_table(checks.back(), opt);
  return all ? 0 : 1;
}
