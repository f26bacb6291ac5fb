// Runs the full verification suite and prints one pass/fail line per
// criterion. Exit status 0 only when every criterion passes.

#include <cstdio>
#include <iostream>

#include "thermo/parallel.hpp"
#include "thermo/selftest.hpp"

int main() {
  const int workers = thermo::default_worker_count();
  std::printf("acceptance suite (%d workers)\n", workers);
  const thermo::SelftestReport report = thermo::run_selftest(workers, &std::cout);
  int passed = 0;
  for (const auto& c : report.criteria) passed += c.pass ? 1 : 0;
  std::printf("ACCEPTANCE: %d/%d criteria passed\n", passed,
              static_cast<int>(report.criteria.size()));
  return report.all_passed ? 0 : 1;
}
