// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero on any failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "shockline/acceptance.hpp"

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "acceptance_out";
  std::filesystem::remove_all(dir);
  const bool ok = shockline::acceptance::run_acceptance(dir, std::cout);
  std::cout << (ok ? "ALL CRITERIA PASSED" : "ACCEPTANCE FAILED") << std::endl;
  return ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
