#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace subpois::cli {

struct Check {
  std::string name;
  double measured = 0.0;   // discrepancy or statistic
  double tolerance = 0.0;  // pass iff measured <= tolerance
  bool pass = false;
};

struct Report {
  std::string suite;
  std::vector<Check> checks;

  bool passed() const;
};

struct VerifyOptions {
  std::uint64_t seed = 42;
  std::int64_t replicates = 100000;
  unsigned threads = 0;
};

/// Suite names accepted by run_suite.
const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite.
Report run_suite(const std::string& suite, const VerifyOptions& options);

void print_report(const Report& report, std::ostream& out);

}  // namespace subpois::cli
