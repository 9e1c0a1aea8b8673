// Acceptance suite: one PASS/FAIL line per criterion, exit 1 on any failure.

#include <cstdlib>
#include <iostream>
#include <string>

#include "trl/selftest.hpp"

int main(int argc, char** argv) {
  trl::selftest::Options opt;
  bool timings = true;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--workers" && i + 1 < argc) opt.exec.workers = static_cast<unsigned>(std::stoul(argv[++i]));
    if (a == "--no-timings") timings = false;
  }
  const auto results = trl::selftest::run(opt, [&](const trl::selftest::CriterionResult& r) {
    std::cout << trl::selftest::format(r, timings) << std::endl;
  });
  const bool ok = trl::selftest::all_pass(results);
  std::cout << (ok ? "acceptance: all criteria pass" : "acceptance: FAILED") << std::endl;
  return ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
