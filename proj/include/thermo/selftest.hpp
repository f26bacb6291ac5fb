#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "thermo/csvio.hpp"

namespace thermo {

struct CheckRecord {
  std::string metric;
  double value = 0.0;
  double threshold = 0.0;
  std::string comparator;  // "<=", ">=", "in", "=="
  bool pass = false;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = true;
  std::string detail;
  std::vector<CheckRecord> checks;
};

struct SelftestReport {
  std::vector<CriterionResult> criteria;
  bool all_passed = true;
};

// Runs the built-in verification suite; prints one pass/fail line per
// criterion to `progress` when given. Every reported value is a
// deterministic function of the criteria definitions (independent of the
// worker count).
SelftestReport run_selftest(int workers, std::ostream* progress = nullptr);

// Flattens a report into the selftest CSV (one row per check).
CsvTable selftest_csv(const SelftestReport& report);

}  // namespace thermo
