#include "run.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <stdexcept>

#include <CLI11.hpp>

#include "subpois/cpp.hpp"
#include "subpois/crossing.hpp"
#include "subpois/errors.hpp"
#include "subpois/iterated.hpp"
#include "subpois/kernels.hpp"
#include "subpois/mc.hpp"
#include "table.hpp"
#include "verify.hpp"

namespace subpois::cli {

namespace {

/// Raised for inconsistent flag combinations; maps to exit code 1.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw UsageError("not a number: '" + s + "'");
  return v;
}

JumpSpec jump_spec(const RunSpec& spec) {
  JumpSpec j;
  if (spec.jumps == "unit") {
    j = JumpSpec::unit();
  } else if (spec.jumps == "exp") {
    j = JumpSpec::exponential(spec.zeta);
  } else if (spec.jumps == "normal") {
    j = JumpSpec::normal(spec.eta, spec.sigma);
  } else {
    throw UsageError("--jumps must be one of unit, exp, normal");
  }
  j.validate();
  return j;
}

double single_mu(const RunSpec& spec) {
  const auto r = Range::parse(spec.mu, spec.mu_step);
  if (r.lo != r.hi) throw UsageError("--mu accepts a range only with `hitting --prob`");
  return r.lo;
}

ModelParams model(const RunSpec& spec) {
  ModelParams p{spec.lambda, single_mu(spec)};
  p.validate();
  return p;
}

SeriesControl control(const RunSpec& spec) {
  SeriesControl c{spec.tolerance, spec.max_terms};
  c.validate();
  return c;
}

std::vector<double> t_grid(const RunSpec& spec, const std::string& fallback) {
  return Range::parse(spec.t.empty() ? fallback : spec.t, spec.t_step).values();
}

std::vector<double> z_grid(const RunSpec& spec, const JumpSpec& jumps, bool skip_zero) {
  std::string text = spec.z;
  if (text.empty()) text = jumps.kind == JumpKind::normal ? "-10..10" : "0..10";
  auto z = Range::parse(text, spec.z_step).values();
  if (skip_zero) std::erase_if(z, [](double v) { return v == 0.0; });
  if (z.empty()) throw UsageError("z grid is empty");
  return z;
}

Table make_table(const RunSpec& spec, std::vector<std::string> columns) {
  Table t;
  t.columns = std::move(columns);
  t.metadata["command"] = spec.command;
  t.metadata["lambda"] = format_number(spec.lambda);
  t.metadata["mu"] = spec.mu;
  t.metadata["jumps"] = spec.jumps;
  if (spec.jumps == "exp") t.metadata["zeta"] = format_number(spec.zeta);
  if (spec.jumps == "normal") {
    t.metadata["eta"] = format_number(spec.eta);
    t.metadata["sigma"] = format_number(spec.sigma);
  }
  t.metadata["seed"] = std::to_string(spec.seed);
  t.metadata["tolerance"] = format_number(spec.tolerance);
  t.metadata["version"] = kVersion;
  return t;
}

Table cmd_pmf(const RunSpec& spec) {
  const IteratedLaw law(model(spec), control(spec));
  Table tab = make_table(spec, {"t", "n", "pmf"});
  for (double t : t_grid(spec, "1")) {
    if (spec.n.empty()) {
      const auto p = law.pmf_vector(t);
      for (std::size_t n = 0; n < p.size(); ++n) tab.add_row({t, static_cast<long long>(n), p[n]});
    } else {
      for (long long n : Range::parse(spec.n, 1.0).integers()) tab.add_row({t, n, law.pmf(n, t)});
    }
  }
  return tab;
}

Table cmd_cdf(const RunSpec& spec) {
  const auto jumps = jump_spec(spec);
  const auto params = model(spec);
  const auto ctl = control(spec);
  if (jumps.kind == JumpKind::degenerate_unit) {
    const IteratedLaw law(params, ctl);
    Table tab = make_table(spec, {"t", "n", "cdf"});
    for (double t : t_grid(spec, "1")) {
      std::vector<long long> ns;
      if (spec.n.empty()) {
        const auto cut = static_cast<long long>(law.pmf_vector(t).size());
        for (long long n = 0; n < cut; ++n) ns.push_back(n);
      } else {
        ns = Range::parse(spec.n, 1.0).integers();
      }
      for (long long n : ns) tab.add_row({t, n, law.cdf(n, t)});
    }
    return tab;
  }
  Table tab = make_table(spec, {"t", "z", "cdf"});
  const auto zs = z_grid(spec, jumps, false);
  for (double t : t_grid(spec, "1")) {
    const SubordinatedLaw law(params, jumps, t, ctl);
    for (double z : zs) tab.add_row({t, z, law.cdf(z)});
  }
  return tab;
}

Table cmd_density(const RunSpec& spec) {
  const auto jumps = jump_spec(spec);
  if (!jumps.absolutely_continuous()) {
    throw UsageError("density requires --jumps exp or normal (unit jumps give a discrete law; use pmf)");
  }
  const auto params = model(spec);
  const auto ctl = control(spec);
  if (spec.mass) {
    Table tab = make_table(spec, {"t", "mass", "atom"});
    for (double t : t_grid(spec, "1")) {
      tab.add_row({t, continuous_mass(t, params, jumps, ctl), atom_mass_Z(t, params)});
    }
    return tab;
  }
  Table tab = make_table(spec, {"t", "z", "density"});
  const auto zs = z_grid(spec, jumps, true);
  for (double t : t_grid(spec, "1")) {
    const SubordinatedLaw law(params, jumps, t, ctl);
    for (double z : zs) tab.add_row({t, z, t > 0.0 ? law.density(z) : 0.0});
  }
  return tab;
}

Table cmd_moments(const RunSpec& spec) {
  const auto jumps = jump_spec(spec);
  const auto params = model(spec);
  Table tab = make_table(spec, {"t", "mean", "variance", "dispersion_index"});
  for (double t : t_grid(spec, "1")) {
    const auto m = moments_Z(t, params, jumps);
    tab.add_row({t, m.mean, m.variance, m.dispersion_index});
  }
  return tab;
}

Boundary boundary_of(const std::string& kind, int k) {
  if (kind == "constant") return Boundary::constant(k);
  if (kind == "decreasing") return Boundary::linear_decreasing(k);
  if (kind == "increasing") return Boundary::linear_increasing(k);
  throw UsageError("--boundary must be one of constant, decreasing, increasing");
}

std::vector<int> k_values(const RunSpec& spec) {
  std::vector<int> ks;
  for (long long k : Range::parse(spec.k, 1.0).integers()) {
    if (k < 1) throw UsageError("--k must be >= 1");
    ks.push_back(static_cast<int>(k));
  }
  return ks;
}

Table cmd_crossing(const RunSpec& spec) {
  const IteratedLaw law(model(spec), control(spec));
  const auto ks = k_values(spec);
  if (spec.mean) {
    if (spec.boundary != "constant") throw UsageError("--mean is available for --boundary constant only");
    Table tab = make_table(spec, {"k", "mean"});
    for (int k : ks) tab.add_row({static_cast<long long>(k), mean_crossing_time_constant(k, law)});
    return tab;
  }
  const auto ts = t_grid(spec, "0..10");
  if (spec.boundary == "constant") {
    Table tab = make_table(spec, {"k", "t", "survival", "density"});
    for (int k : ks) {
      const auto b = Boundary::constant(k);
      for (double t : ts) {
        const double dens = t > 0.0 ? crossing_density_constant(k, t, law)
                                    : (k == 1 ? law.params().leave_rate() : 0.0);
        tab.add_row({static_cast<long long>(k), t, survival_nonincreasing(b, t, law), dens});
      }
    }
    return tab;
  }
  Table tab = make_table(spec, {"k", "t", "survival"});
  for (int k : ks) {
    const auto b = boundary_of(spec.boundary, k);
    if (b.nonincreasing()) {
      for (double t : ts) tab.add_row({static_cast<long long>(k), t, survival_nonincreasing(b, t, law)});
    } else {
      double t_max = 0.0;
      for (double t : ts) t_max = std::max(t_max, t);
      const auto table = avoiding_table(k, static_cast<int>(std::floor(t_max)), law);
      for (double t : ts) {
        tab.add_row({static_cast<long long>(k), t, survival_linear_increasing(table, t, law)});
      }
    }
  }
  return tab;
}

Table cmd_hitting(const RunSpec& spec) {
  const auto ks = k_values(spec);
  if (spec.prob) {
    Table tab = make_table(spec, {"mu", "k", "probability"});
    for (double mu : Range::parse(spec.mu, spec.mu_step).values()) {
      for (int k : ks) tab.add_row({mu, static_cast<long long>(k), hitting_probability(k, mu)});
    }
    return tab;
  }
  const IteratedLaw law(model(spec), control(spec));
  Table tab = make_table(spec, {"k", "t", "density", "cdf"});
  for (int k : ks) {
    for (double t : t_grid(spec, "0..10")) {
      tab.add_row({static_cast<long long>(k), t, hitting_density(k, t, law), hitting_cdf(k, t, law)});
    }
  }
  return tab;
}

Table cmd_avoiding(const RunSpec& spec) {
  const IteratedLaw law(model(spec), control(spec));
  if (spec.horizon < 0) throw UsageError("--horizon must be >= 0");
  Table tab = make_table(spec, {"k", "n", "j", "g"});
  for (int k : k_values(spec)) {
    const auto table = avoiding_table(k, spec.horizon, law);
    for (int n = 0; n <= table.horizon(); ++n) {
      const auto& row = table.row(n);
      for (std::size_t j = 0; j < row.size(); ++j) {
        tab.add_row({static_cast<long long>(k), static_cast<long long>(n), static_cast<long long>(j), row[j]});
      }
    }
  }
  return tab;
}

Table cmd_simulate(const RunSpec& spec) {
  const auto jumps = jump_spec(spec);
  const auto params = model(spec);
  const mc::SimConfig config{spec.seed, spec.replicates, spec.sim_horizon, spec.threads};
  config.validate();
  if (spec.quantity == "z") {
    Table tab = make_table(spec, {"replicate", "t", "z"});
    for (double t : t_grid(spec, "1")) {
      const auto z = mc::simulate_Z(t, params, jumps, config);
      for (std::size_t i = 0; i < z.size(); ++i) tab.add_row({static_cast<long long>(i), t, z[i]});
    }
    return tab;
  }
  const auto ks = k_values(spec);
  if (ks.size() != 1) throw UsageError("simulate accepts a single --k");
  if (spec.quantity == "crossing") {
    const auto times = mc::simulate_crossing_times(boundary_of(spec.boundary, ks.front()), params, jumps, config);
    Table tab = make_table(spec, {"replicate", "time"});
    for (std::size_t i = 0; i < times.size(); ++i) tab.add_row({static_cast<long long>(i), times[i]});
    return tab;
  }
  if (spec.quantity == "hitting") {
    if (jumps.kind != JumpKind::degenerate_unit) throw UsageError("hitting simulation requires --jumps unit");
    const auto hits = mc::simulate_hitting(ks.front(), params, config);
    Table tab = make_table(spec, {"replicate", "status", "time"});
    for (std::size_t i = 0; i < hits.size(); ++i) {
      const char* status = hits[i].status == mc::HitStatus::hit     ? "hit"
                           : hits[i].status == mc::HitStatus::never ? "never"
                                                                    : "censored";
      const double time =
          hits[i].status == mc::HitStatus::hit ? hits[i].time : std::numeric_limits<double>::infinity();
      tab.add_row({static_cast<long long>(i), std::string(status), time});
    }
    return tab;
  }
  throw UsageError("--quantity must be one of z, crossing, hitting");
}

std::filesystem::path output_path(const RunSpec& spec) {
  std::filesystem::path p(spec.output);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("SUBPOIS_OUTPUT_DIR"); dir != nullptr && dir[0] != '\0') {
      p = std::filesystem::path(dir) / p;
    }
  }
  return p;
}

void emit(const RunSpec& spec, const Table& table, std::ostream& out) {
  if (spec.format != "csv" && spec.format != "json") throw UsageError("--format must be csv or json");
  auto write = [&](std::ostream& os) {
    if (spec.format == "csv") {
      write_csv(table, os);
    } else {
      write_json(table, os);
    }
  };
  if (spec.output.empty()) {
    write(out);
    return;
  }
  const auto path = output_path(spec);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open output file '" + path.string() + "'");
  write(file);
  file.flush();
  if (!file) throw IoError("failed writing output file '" + path.string() + "'");
}

}  // namespace

Range Range::parse(const std::string& text, double step) {
  if (!(step > 0.0)) throw UsageError("range step must be positive");
  Range r;
  r.step = step;
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    r.lo = r.hi = parse_double(text);
  } else {
    r.lo = parse_double(text.substr(0, dots));
    r.hi = parse_double(text.substr(dots + 2));
  }
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi)) throw UsageError("range bounds must be finite");
  if (r.hi < r.lo) throw UsageError("empty range '" + text + "'");
  return r;
}

std::vector<double> Range::values() const {
  const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(count) + 1);
  for (long long i = 0; i <= count; ++i) v.push_back(lo + static_cast<double>(i) * step);
  return v;
}

std::vector<long long> Range::integers() const {
  if (lo != std::floor(lo) || hi != std::floor(hi)) throw UsageError("integer range expected");
  std::vector<long long> v;
  for (long long i = static_cast<long long>(lo); i <= static_cast<long long>(hi); ++i) v.push_back(i);
  return v;
}

int execute(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  static const std::map<std::string, std::function<Table(const RunSpec&)>> commands{
      {"pmf", cmd_pmf},           {"cdf", cmd_cdf},           {"density", cmd_density},
      {"moments", cmd_moments},   {"crossing", cmd_crossing}, {"hitting", cmd_hitting},
      {"avoiding", cmd_avoiding}, {"simulate", cmd_simulate}};
  try {
    if (spec.command == "verify") {
      const auto report = run_suite(spec.suite, {spec.seed, spec.replicates, spec.threads});
      print_report(report, out);
      return report.passed() ? kOk : kVerificationFailure;
    }
    const auto it = commands.find(spec.command);
    if (it == commands.end()) throw UsageError("unknown command '" + spec.command + "'");
    emit(spec, it->second(spec), out);
    return kOk;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    // Validation failures from the library name the violated constraint.
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunSpec spec;
  CLI::App app{"Law, moments and first-passage quantities of a compound Poisson process with "
               "Poisson subordinator"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::optional<double> step;
  auto model_flags = [&spec, &step](CLI::App* sub) {
    sub->add_option("--step", step, "Step of the command's main grid (t, z or mu)");
    sub->add_option("--lambda", spec.lambda, "Subordinator intensity");
    sub->add_option("--mu", spec.mu, "Inner Poisson intensity (range with hitting --prob)");
    sub->add_option("--tol", spec.tolerance, "Series truncation tolerance");
    sub->add_option("--max-terms", spec.max_terms, "Series term cap");
    sub->add_option("--format", spec.format, "csv or json");
    sub->add_option("--output,-o", spec.output, "Output file (default stdout)");
    sub->add_option("--seed", spec.seed, "Random seed");
  };
  auto jump_flags = [&spec](CLI::App* sub) {
    sub->add_option("--jumps", spec.jumps, "Jump law: unit, exp, normal");
    sub->add_option("--zeta", spec.zeta, "Exponential jump rate");
    sub->add_option("--eta", spec.eta, "Normal jump mean");
    sub->add_option("--sigma", spec.sigma, "Normal jump standard deviation");
  };
  auto t_flags = [&spec](CLI::App* sub) {
    sub->add_option("--t", spec.t, "Time grid a..b");
    sub->add_option("--t-step", spec.t_step, "Time grid step (default 1)");
  };

  auto* pmf = app.add_subcommand("pmf", "Iterated Poisson pmf p_n(t)");
  model_flags(pmf);
  t_flags(pmf);
  pmf->add_option("--n", spec.n, "State range (default: up to the tail cutoff)");

  auto* cdf = app.add_subcommand("cdf", "CDF of Z(t)");
  model_flags(cdf);
  jump_flags(cdf);
  t_flags(cdf);
  cdf->add_option("--n", spec.n, "State range (unit jumps)");
  cdf->add_option("--z", spec.z, "Value grid a..b (continuous jumps)");
  cdf->add_option("--z-step", spec.z_step, "Value grid step (default 0.01)");

  auto* density = app.add_subcommand("density", "Density of the continuous part of Z(t)");
  model_flags(density);
  jump_flags(density);
  t_flags(density);
  density->add_option("--z", spec.z, "Value grid a..b");
  density->add_option("--z-step", spec.z_step, "Value grid step (default 0.01)");
  density->add_flag("--mass", spec.mass, "Emit integrated continuous mass and atom per t");

  auto* moments = app.add_subcommand("moments", "Mean, variance and dispersion index");
  model_flags(moments);
  jump_flags(moments);
  t_flags(moments);

  auto* crossing = app.add_subcommand("crossing", "First-crossing survival and density");
  model_flags(crossing);
  t_flags(crossing);
  crossing->add_option("--boundary", spec.boundary, "constant, decreasing (k - t) or increasing (k + t)");
  crossing->add_option("--k", spec.k, "Boundary level range");
  crossing->add_flag("--mean", spec.mean, "Mean crossing time (constant boundary)");

  auto* hitting = app.add_subcommand("hitting", "First-hitting density, CDF and probability");
  model_flags(hitting);
  t_flags(hitting);
  hitting->add_option("--k", spec.k, "Target state range");
  hitting->add_flag("--prob", spec.prob, "Hitting probability over a --mu range");
  hitting->add_option("--mu-step", spec.mu_step, "mu grid step (default 0.1)");

  auto* avoiding = app.add_subcommand("avoiding", "Avoiding probabilities for the boundary k + t");
  model_flags(avoiding);
  avoiding->add_option("--k", spec.k, "Boundary offset");
  avoiding->add_option("--horizon", spec.horizon, "Last integer time");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo samples");
  model_flags(simulate);
  jump_flags(simulate);
  t_flags(simulate);
  simulate->add_option("--replicates", spec.replicates, "Number of replicates");
  simulate->add_option("--quantity", spec.quantity, "z, crossing or hitting");
  simulate->add_option("--boundary", spec.boundary, "Boundary for --quantity crossing");
  simulate->add_option("--k", spec.k, "Boundary level or target state");
  simulate->add_option("--horizon", spec.sim_horizon, "Censoring horizon (default 50 mean sojourns)");
  simulate->add_option("--threads", spec.threads, "Worker threads (0 = all cores)");

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("suite", spec.suite, "analytic-vs-mc, formula-cross-checks, figure-reproduction")
      ->required();
  verify->add_option("--seed", spec.seed, "Random seed");
  std::int64_t verify_replicates = 100000;
  verify->add_option("--replicates", verify_replicates, "Monte Carlo replicates (default 100000)");
  verify->add_option("--threads", spec.threads, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kValidationError;
  }
  for (auto* sub : app.get_subcommands()) spec.command = sub->get_name();
  if (spec.command == "verify") spec.replicates = verify_replicates;
  if (step) {
    if (spec.command == "hitting" && spec.prob) {
      spec.mu_step = *step;
    } else if ((spec.command == "cdf" || spec.command == "density") && spec.jumps != "unit" && !spec.mass) {
      spec.z_step = *step;
    } else {
      spec.t_step = *step;
    }
  }
  return execute(spec, out, err);
}

}  // namespace subpois::cli
