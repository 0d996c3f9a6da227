#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "run.hpp"
#include "table.hpp"

using subpois::cli::run_cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "subpois");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("number formatting") {
  using subpois::cli::format_number;
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(123456789012345.0) == "1.23456789012e+14");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("pmf table sums to one") {
  const auto r = run({"pmf", "--lambda", "4", "--mu", "3", "--t", "1"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find('\r') == std::string::npos);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.front() == std::vector<std::string>{"t", "n", "pmf"});
  double s = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) s += std::stod(rows[i][2]);
  CHECK(std::fabs(s - 1.0) < 1e-10);
}

TEST_CASE("figure 1 masses") {
  const auto r = run({"density", "--jumps", "exp", "--mu", "1", "--zeta", "1", "--lambda", "1", "--t", "1..5", "--mass"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  const double expected[] = {0.4685, 0.7175, 0.8499, 0.9202, 0.9576};
  REQUIRE(rows.size() == 6);
  for (int i = 0; i < 5; ++i) CHECK(std::fabs(std::stod(rows[i + 1][1]) - expected[i]) < 5e-5);
}

TEST_CASE("density grid integrates to the continuous mass") {
  const auto r = run({"density", "--jumps", "exp", "--zeta", "1", "--t", "1", "--z", "0.005..40", "--z-step", "0.01"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  double s = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) s += 0.01 * std::stod(rows[i][2]);
  CHECK(std::fabs(s - 0.4685) < 1e-3);
}

TEST_CASE("hitting probabilities and json output") {
  const auto r = run({"hitting", "--prob", "--mu", "0.1..5", "--mu-step", "0.1", "--k", "1..4", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["metadata"]["version"] == "0.1.0");
  CHECK(j["metadata"]["seed"] == "42");
  CHECK(j["columns"] == nlohmann::json::array({"mu", "k", "probability"}));
  CHECK(j["rows"].size() == 50 * 4);
  bool found = false;
  for (const auto& row : j["rows"]) {
    if (std::fabs(row["mu"].get<double>() - 1.0) < 1e-12 && row["k"] == 1) {
      CHECK(row["probability"].get<double>() == doctest::Approx(0.581977).epsilon(1e-6));
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("other commands produce tables") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"cdf", "--lambda", "2", "--n", "0..5"},
           {"cdf", "--jumps", "normal", "--eta", "0.5", "--z", "-1..1", "--z-step", "0.5"},
           {"moments", "--jumps", "exp", "--zeta", "2", "--t", "0..3"},
           {"crossing", "--k", "1..3", "--t", "0..4"},
           {"crossing", "--boundary", "decreasing", "--k", "4", "--t", "0..5", "--t-step", "0.5"},
           {"crossing", "--boundary", "increasing", "--k", "2", "--t", "0..4", "--t-step", "0.25"},
           {"crossing", "--mean", "--k", "1..4"},
           {"hitting", "--k", "3", "--lambda", "2", "--t", "0..5"},
           {"avoiding", "--k", "2", "--horizon", "3"},
           {"simulate", "--replicates", "50", "--jumps", "exp"},
           {"simulate", "--replicates", "50", "--quantity", "crossing", "--k", "2"},
           {"simulate", "--replicates", "50", "--quantity", "hitting", "--k", "2"}}) {
    const auto r = run(args);
    CHECK_MESSAGE(r.code == 0, args[0] << ": " << r.err);
    CHECK(parse_csv(r.out).size() > 1);
  }
}

TEST_CASE("avoiding table rows") {
  const auto r = run({"avoiding", "--k", "1", "--horizon", "2"});
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 1 + 1 + 2 + 3);
  CHECK(rows[1] == std::vector<std::string>{"1", "0", "0", "1"});
}

TEST_CASE("validation errors exit 1 and name the constraint") {
  auto r = run({"pmf", "--lambda", "-1"});
  CHECK(r.code == 1);
  CHECK(r.err.find("lambda") != std::string::npos);
  CHECK(run({"pmf", "--t", "3..1"}).code == 1);
  CHECK(run({"pmf", "--t", "0..1", "--t-step", "0"}).code == 1);
  CHECK(run({"density", "--jumps", "unit"}).code == 1);
  CHECK(run({"cdf", "--jumps", "cauchy"}).code == 1);
  CHECK(run({"crossing", "--k", "0"}).code == 1);
  CHECK(run({"pmf", "--format", "xml"}).code == 1);
  CHECK(run({"pmf", "--bogus"}).code == 1);
  CHECK(run({"verify", "no-such-suite"}).code == 1);
  CHECK(run({}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("output files, environment directory and determinism") {
  const auto dir = std::filesystem::temp_directory_path() / "subpois_cli_test";
  std::filesystem::create_directories(dir);
  ::setenv("SUBPOIS_OUTPUT_DIR", dir.c_str(), 1);
  REQUIRE(run({"simulate", "--replicates", "200", "--jumps", "normal", "--seed", "5", "-o", "a.csv"}).code == 0);
  REQUIRE(run({"simulate", "--replicates", "200", "--jumps", "normal", "--seed", "5", "-o", "b.csv"}).code == 0);
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const auto a = slurp(dir / "a.csv");
  CHECK(!a.empty());
  CHECK(a == slurp(dir / "b.csv"));
  ::unsetenv("SUBPOIS_OUTPUT_DIR");
  CHECK(run({"pmf", "-o", "/nonexistent-dir/x/y.csv"}).code == 3);
  std::filesystem::remove_all(dir);
}

TEST_CASE("verify suites") {
  auto r = run({"verify", "formula-cross-checks"});
  CHECK_MESSAGE(r.code == 0, r.out);
  CHECK(r.out.find("[FAIL]") == std::string::npos);
  r = run({"verify", "figure-reproduction"});
  CHECK_MESSAGE(r.code == 0, r.out);
  r = run({"verify", "analytic-vs-mc", "--seed", "42", "--replicates", "100000"});
  CHECK_MESSAGE(r.code == 0, r.out);
}
