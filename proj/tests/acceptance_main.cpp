// Acceptance suite: one test case per criterion, stated tolerances pinned in
// core/src/acceptance.cpp. Prints one PASS/FAIL line per criterion.

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>

#include "pplab/acceptance.hpp"

using namespace pplab;

namespace {
CriterionResult run_and_print(int id) {
  CriterionResult r = run_criterion(id);
  std::printf("criterion %2d [%s] %s\n", r.id, r.pass ? "PASS" : "FAIL", r.name.c_str());
  if (!r.pass) std::printf("%s\n", r.details.dump(2).c_str());
  std::fflush(stdout);
  return r;
}
}  // namespace

TEST_CASE("criterion 1: normalization suite") { CHECK(run_and_print(1).pass); }
TEST_CASE("criterion 2: extremal functions") { CHECK(run_and_print(2).pass); }
TEST_CASE("criterion 3: capacity") { CHECK(run_and_print(3).pass); }
TEST_CASE("criterion 4: gradient-energy mass") { CHECK(run_and_print(4).pass); }
TEST_CASE("criterion 5: majorant") { CHECK(run_and_print(5).pass); }
TEST_CASE("criterion 6: capacity decay") { CHECK(run_and_print(6).pass); }
TEST_CASE("criterion 7: energy probes") { CHECK(run_and_print(7).pass); }
TEST_CASE("criterion 8: Lebesgue analysis") { CHECK(run_and_print(8).pass); }
TEST_CASE("criterion 9: alpha > 2 failure") { CHECK(run_and_print(9).pass); }
TEST_CASE("criterion 10: exponential moments") { CHECK(run_and_print(10).pass); }
TEST_CASE("criterion 11: determinism") { CHECK(run_and_print(11).pass); }

int main(int argc, char** argv) {
  doctest::Context ctx;
  ctx.applyCommandLine(argc, argv);
  return ctx.run();
}
