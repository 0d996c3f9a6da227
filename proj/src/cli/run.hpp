#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace subpois::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kValidationError = 1, kVerificationFailure = 2, kIoError = 3 };

/// Inclusive grid "a..b" (or a single value "a") with a positive step.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;

  static Range parse(const std::string& text, double step);
  std::vector<double> values() const;
  std::vector<long long> integers() const;
};

struct RunSpec {
  std::string command;

  double lambda = 1.0;
  std::string mu = "1";  // a range only for `hitting --prob`
  std::string jumps = "unit";
  double zeta = 1.0;
  double eta = 0.0;
  double sigma = 1.0;

  std::string t;  // empty selects the per-command default
  std::string z;
  std::string n;
  std::string k = "1";
  double t_step = 1.0;
  double z_step = 0.01;
  double mu_step = 0.1;

  std::string boundary = "constant";
  bool mass = false;
  bool prob = false;
  bool mean = false;
  int horizon = 5;
  std::string quantity = "z";
  double sim_horizon = 0.0;

  std::string suite;
  std::uint64_t seed = 42;
  std::int64_t replicates = 1000;
  unsigned threads = 0;

  double tolerance = 1e-13;
  int max_terms = 100000;

  std::string format = "csv";
  std::string output;  // empty writes to stdout
};

/// Parses argv and executes; returns a process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Executes a parsed RunSpec.
int execute(const RunSpec& spec, std::ostream& out, std::ostream& err);

}  // namespace subpois::cli
