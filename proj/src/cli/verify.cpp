#include "verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "subpois/cpp.hpp"
#include "subpois/crossing.hpp"
#include "subpois/iterated.hpp"
#include "subpois/mc.hpp"
#include "subpois/special.hpp"
#include "subpois/stats.hpp"
#include "table.hpp"

namespace subpois::cli {

namespace {

Check make_check(std::string name, double measured, double tolerance) {
  return {std::move(name), measured, tolerance, measured <= tolerance};
}

double rel_diff(double a, double b) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return scale == 0.0 ? 0.0 : std::fabs(a - b) / scale;
}

constexpr std::array<double, 3> kLambdas{1.0, 2.0, 4.0};
constexpr std::array<double, 3> kMus{0.5, 1.0, 3.0};
constexpr std::array<double, 3> kTimes{0.5, 1.0, 2.0};

void for_grid(const std::function<void(const IteratedLaw&, double)>& fn) {
  for (double lambda : kLambdas) {
    for (double mu : kMus) {
      const IteratedLaw law({lambda, mu});
      for (double t : kTimes) fn(law, t);
    }
  }
}

Report formula_cross_checks() {
  Report r{"formula-cross-checks", {}};

  double worst = 0.0;
  for_grid([&](const IteratedLaw& law, double t) {
    for (int n = 1; n <= 30; ++n) worst = std::max(worst, rel_diff(law.pmf_recursive(n, t), law.pmf(n, t)));
  });
  r.checks.push_back(make_check("pmf_recursive == pmf (relative)", worst, 1e-10));

  worst = 0.0;
  for_grid([&](const IteratedLaw& law, double t) {
    for (int n = 0; n <= 20; ++n) worst = std::max(worst, std::fabs(law.cdf_closed_form(n, t) - law.cdf(n, t)));
  });
  r.checks.push_back(make_check("cdf_closed_form == cdf", worst, 1e-12));

  worst = 0.0;
  for_grid([&](const IteratedLaw& law, double t) {
    for (int n = 0; n <= 10; ++n) {
      for (int s = 1; s <= 3; ++s) {
        const double split = t * s / 4.0;
        CompensatedSum conv;
        for (int j = 0; j <= n; ++j) conv.add(law.pmf(j, split) * law.pmf(n - j, t - split));
        worst = std::max(worst, std::fabs(conv.value() - law.pmf(n, t)));
      }
    }
  });
  r.checks.push_back(make_check("semigroup p_n(t) = sum p_j(s) p_{n-j}(t-s)", worst, 1e-10));

  worst = 0.0;
  for_grid([&](const IteratedLaw& law, double t) {
    for (int n = 0; n <= 10; ++n) {
      worst = std::max(worst, std::fabs(cpp_cdf_Z(n + 0.5, t, law.params(), JumpSpec::unit()) -
                                        law.cdf(n, t)));
    }
  });
  r.checks.push_back(make_check("unit-jump H_Z(n + 1/2) == P_n", worst, 1e-12));

  double worst_generic = 0.0;
  double worst_alt = 0.0;
  double worst_density = 0.0;
  for (double lambda : {1.0, 2.0}) {
    for (double zeta : {0.5, 1.0, 2.0}) {
      const ModelParams p{lambda, 1.0};
      for (double t : {0.5, 1.0, 3.0}) {
        for (double z = 0.0; z <= 12.0; z += 0.75) {
          const double h = exp_jump_cdf(z, t, p, zeta);
          worst_generic = std::max(worst_generic,
                                   std::fabs(h - cpp_cdf_Z(z, t, p, JumpSpec::exponential(zeta))));
          worst_alt = std::max(worst_alt, std::fabs(h - exp_jump_cdf_alternative(z, t, p, zeta)));
          if (z > 0.0) {
            worst_density = std::max(
                worst_density, std::fabs(exp_jump_density(z, t, p, zeta) -
                                         cpp_density_Z(z, t, p, JumpSpec::exponential(zeta))));
          }
        }
      }
    }
  }
  r.checks.push_back(make_check("exp_jump_cdf == generic H_Z", worst_generic, 1e-10));
  r.checks.push_back(make_check("exp_jump_cdf == alternative form", worst_alt, 1e-10));
  r.checks.push_back(make_check("exp_jump_density == generic h_Z", worst_density, 1e-10));

  double worst_series = 0.0;
  double worst_rec = 0.0;
  for (int n = 0; n <= 20; ++n) {
    for (double x : {0.1, 1.0, 10.0, 50.0}) {
      const double dob = bell_poly(n, x).value;
      worst_series = std::max(worst_series, rel_diff(dob, std::exp(log_bell_series(n, x))));
      if (n < 20) {
        const double rec = x * (bell_poly_derivative(n, x) + dob);
        worst_rec = std::max(worst_rec, rel_diff(bell_poly(n + 1, x).value, rec));
      }
    }
  }
  r.checks.push_back(make_check("Bell Dobinski == series (relative)", worst_series, 1e-10));
  r.checks.push_back(make_check("Bell recursion B_{n+1} = x(B'_n + B_n) (relative)", worst_rec, 1e-9));

  worst = 0.0;
  double worst_mean = 0.0;
  for (double lambda : {1.0, 2.0}) {
    for (double mu : {0.5, 1.0, 3.0}) {
      const IteratedLaw law({lambda, mu});
      for (int k = 1; k <= 8; ++k) {
        for (double t : {0.25, 1.0, 2.5, 6.0}) {
          worst = std::max(worst, std::fabs(crossing_density_constant(k, t, law) -
                                            crossing_density_constant_stirling(k, t, law)));
        }
        double sojourns = 0.0;
        for (int j = 0; j < k; ++j) sojourns += law.mean_sojourn(j);
        worst_mean = std::max(worst_mean, rel_diff(mean_crossing_time_constant(k, law), sojourns));
      }
    }
  }
  r.checks.push_back(make_check("crossing density: Bell derivative == Stirling form", worst, 1e-10));
  r.checks.push_back(make_check("E(T) closed form == sum of mean sojourns (relative)", worst_mean, 1e-10));

  worst = 0.0;
  for (double mu : {0.5, 1.0, 2.0}) {
    const IteratedLaw law({1.0, mu});
    const double t_far = 200.0 / law.params().leave_rate();
    for (int k = 1; k <= 4; ++k) {
      worst = std::max(worst, std::fabs(hitting_cdf(k, t_far, law) - hitting_probability(k, mu)));
    }
  }
  r.checks.push_back(make_check("hitting_cdf(large t) == pi_k", worst, 1e-8));
  return r;
}

Report figure_reproduction() {
  Report r{"figure-reproduction", {}};
  const std::array<std::array<double, 5>, 2> caption{
      {{0.4685, 0.7175, 0.8499, 0.9202, 0.9576}, {0.7175, 0.9202, 0.9775, 0.9936, 0.9982}}};
  double worst_atom = 0.0;
  double worst_quad = 0.0;
  for (int l = 0; l < 2; ++l) {
    const ModelParams p{l == 0 ? 1.0 : 2.0, 1.0};
    for (int i = 0; i < 5; ++i) {
      const double t = i + 1.0;
      const double expected = caption[l][i];
      worst_atom = std::max(worst_atom, std::fabs(1.0 - atom_mass_Z(t, p) - expected));
      const double quad = integrate([&](double z) { return exp_jump_density(z, t, p, 1.0); }, 0.0,
                                    200.0, 1e-10);
      worst_quad = std::max(worst_quad, std::fabs(quad - expected));
    }
  }
  r.checks.push_back(make_check("Figure 1 masses: 1 - atom vs caption", worst_atom, 5e-5));
  r.checks.push_back(make_check("Figure 1 masses: quadrature of density vs caption", worst_quad, 1e-4));

  double worst = 0.0;
  for (double mu : {3.0, 4.0}) {
    const IteratedLaw law({4.0, mu});
    for (double t : {1.0, 2.0, 3.0}) {
      CompensatedSum s;
      for (double v : law.pmf_vector(t)) s.add(v);
      worst = std::max(worst, std::fabs(s.value() - 1.0));
    }
  }
  r.checks.push_back(make_check("Figure 3 pmf normalization", worst, 1e-10));

  r.checks.push_back(make_check("Figure 6 pi_1(mu = 1) == 1/(e - 1)",
                                std::fabs(hitting_probability(1, 1.0) - 1.0 / std::expm1(1.0)), 1e-12));
  // Each pi_k(mu) decreases in mu; at the right edge (mu = 5) the curves are
  // ordered k = 1..4 from bottom to top.
  double rise = 0.0;
  for (int k = 1; k <= 4; ++k) {
    double prev = 1.0;
    for (int i = 1; i <= 50; ++i) {
      const double v = hitting_probability(k, 0.1 * i);
      rise = std::max(rise, v - prev);
      prev = v;
    }
  }
  r.checks.push_back(make_check("Figure 6 pi_k(mu) nonincreasing in mu", rise, 0.0));
  double order_violation = 0.0;
  for (int k = 1; k < 4; ++k) {
    order_violation = std::max(order_violation, hitting_probability(k, 5.0) - hitting_probability(k + 1, 5.0));
  }
  r.checks.push_back(make_check("Figure 6 ordering at mu = 5", order_violation, 0.0));

  // Figure 4: survival nonincreasing in t for both boundary kinds.
  const IteratedLaw fig4({2.0, 1.0});
  double increase = 0.0;
  for (int k : {2, 4, 6, 8, 10}) {
    for (auto b : {Boundary::linear_decreasing(k), Boundary::constant(k)}) {
      double prev = 1.0;
      for (double t = 0.0; t <= 12.0; t += 0.05) {
        const double s = survival_nonincreasing(b, t, fig4);
        increase = std::max(increase, s - prev);
        prev = s;
      }
    }
  }
  r.checks.push_back(make_check("Figure 4 survival nonincreasing", increase, 1e-12));

  worst = 0.0;
  for (double lambda : {1.0, 2.0}) {
    const IteratedLaw law({lambda, 1.0});
    for (int k = 1; k <= 4; ++k) {
      const double mass = integrate_to_infinity([&](double t) { return hitting_density(k, t, law); }, 0.0);
      worst = std::max(worst, std::fabs(mass - hitting_probability(k, 1.0)));
    }
  }
  r.checks.push_back(make_check("Figure 5 density mass == pi_k", worst, 1e-8));

  const IteratedLaw fig7({2.0, 1.0});
  increase = 0.0;
  double order = 0.0;
  std::array<AvoidingTable, 4> tables{avoiding_table(1, 10, fig7), avoiding_table(2, 10, fig7),
                                      avoiding_table(3, 10, fig7), avoiding_table(4, 10, fig7)};
  for (double t = 0.0; t <= 10.0; t += 0.05) {
    for (int k = 1; k <= 4; ++k) {
      const double s = survival_linear_increasing(tables[k - 1], t, fig7);
      const double prev = survival_linear_increasing(tables[k - 1], std::max(0.0, t - 0.05), fig7);
      increase = std::max(increase, s - prev);
      if (k > 1) {
        order = std::max(order, survival_linear_increasing(tables[k - 2], t, fig7) - s);
      }
    }
  }
  r.checks.push_back(make_check("Figure 7 survival nonincreasing", increase, 1e-12));
  r.checks.push_back(make_check("Figure 7 ordering k = 1..4 bottom to top", order, 1e-12));
  return r;
}

Report analytic_vs_mc(const VerifyOptions& opt) {
  Report r{"analytic-vs-mc", {}};
  const std::int64_t n = opt.replicates;
  mc::SimConfig config{opt.seed, n, 0.0, opt.threads};
  const double ks1 = 1.63 / std::sqrt(static_cast<double>(n));

  {
    const ModelParams p{1.0, 1.0};
    const auto jumps = JumpSpec::exponential(1.0);
    const SubordinatedLaw law(p, jumps, 1.0);
    const auto z = mc::simulate_Z(1.0, p, jumps, config);
    const double d = stats::ks_distance(z, [&](double x) { return law.cdf(x); },
                                        [&](double x) { return law.cdf_left(x); });
    r.checks.push_back(make_check("KS exponential jumps (1% band)", d, ks1));
    const double zeros = static_cast<double>(std::count(z.begin(), z.end(), 0.0)) / n;
    // P{Z(t) = 0} for continuous jumps is exactly the atom p_0(t).
    const double atom = law.atom();
    r.checks.push_back(make_check("atom frequency (3 SE)", std::fabs(zeros - atom),
                                  3.0 * stats::binomial_se(atom, n)));
  }
  {
    const ModelParams p{1.0, 1.0};
    const auto jumps = JumpSpec::normal(0.5, 1.0);
    const SubordinatedLaw law(p, jumps, 1.0);
    const auto z = mc::simulate_Z(1.0, p, jumps, {opt.seed + 1, n, 0.0, opt.threads});
    const double d = stats::ks_distance(z, [&](double x) { return law.cdf(x); },
                                        [&](double x) { return law.cdf_left(x); });
    r.checks.push_back(make_check("KS normal jumps (1% band)", d, ks1));
  }
  {
    const IteratedLaw law({4.0, 3.0});
    const auto probs = law.pmf_vector(1.0);
    const auto z = mc::simulate_Z(1.0, law.params(), JumpSpec::unit(), {opt.seed + 2, n, 0.0, opt.threads});
    std::vector<std::int64_t> counts(probs.size(), 0);
    for (double v : z) {
      const auto idx = static_cast<std::size_t>(v);
      if (idx < counts.size()) ++counts[idx];
    }
    const auto chi = stats::chi_square_gof(counts, probs, n);
    // Reported as 1 - p so that "measured <= tolerance" reads as p >= 0.01.
    r.checks.push_back(make_check("chi-square iterated pmf (lambda=4, mu=3, t=1), 1 - p", 1.0 - chi.p_value, 0.99));
  }
  {
    const ModelParams p{2.0, 1.0};
    const auto times = mc::simulate_crossing_times(Boundary::constant(1), p, JumpSpec::unit(),
                                                   {opt.seed + 3, n, 0.0, opt.threads});
    const double rate = p.leave_rate();
    const double d = stats::ks_distance(times, [&](double t) { return -std::expm1(-rate * t); });
    r.checks.push_back(make_check("KS constant boundary k=1 vs exponential (5% band)", d,
                                  1.36 / std::sqrt(static_cast<double>(n))));
  }
  {
    for (int k = 1; k <= 4; ++k) {
      const ModelParams p{1.0, 1.0};
      const auto hits = mc::simulate_hitting(k, p, {opt.seed + 10 + static_cast<std::uint64_t>(k), n, 0.0, opt.threads});
      const double freq =
          static_cast<double>(std::count_if(hits.begin(), hits.end(),
                                            [](const mc::HitOutcome& h) { return h.status == mc::HitStatus::hit; })) /
          n;
      const double pi = hitting_probability(k, 1.0);
      r.checks.push_back(make_check("hit frequency k=" + std::to_string(k) + " (3 SE)",
                                    std::fabs(freq - pi), 3.0 * stats::binomial_se(pi, n)));
    }
  }
  {
    const IteratedLaw law({2.0, 1.0});
    const double t = 2.5;
    const auto times = mc::simulate_crossing_times(Boundary::linear_increasing(2), law.params(),
                                                   JumpSpec::unit(), {opt.seed + 20, n, 10.0, opt.threads});
    const double surv = static_cast<double>(std::count_if(times.begin(), times.end(),
                                                          [t](double x) { return x > t; })) / n;
    const double exact = survival_linear_increasing(2, t, law);
    r.checks.push_back(make_check("linear increasing survival k=2, t=2.5 (3 SE)", std::fabs(surv - exact),
                                  3.0 * stats::binomial_se(exact, n)));
  }
  {
    const IteratedLaw law({2.0, 1.0});
    const double t = 1.5;
    const auto times = mc::simulate_crossing_times(Boundary::linear_decreasing(4), law.params(),
                                                   JumpSpec::unit(), {opt.seed + 21, n, 10.0, opt.threads});
    const double surv = static_cast<double>(std::count_if(times.begin(), times.end(),
                                                          [t](double x) { return x > t; })) / n;
    const double exact = survival_nonincreasing(Boundary::linear_decreasing(4), t, law);
    r.checks.push_back(make_check("linear decreasing survival k=4, t=1.5 (3 SE)", std::fabs(surv - exact),
                                  3.0 * stats::binomial_se(exact, n)));
  }
  return r;
}

}  // namespace

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"analytic-vs-mc", "formula-cross-checks",
                                              "figure-reproduction"};
  return names;
}

Report run_suite(const std::string& suite, const VerifyOptions& options) {
  if (suite == "formula-cross-checks") return formula_cross_checks();
  if (suite == "figure-reproduction") return figure_reproduction();
  if (suite == "analytic-vs-mc") {
    if (options.replicates < 100) throw std::invalid_argument("analytic-vs-mc needs >= 100 replicates");
    return analytic_vs_mc(options);
  }
  throw std::invalid_argument("unknown verification suite '" + suite + "'");
}

void print_report(const Report& report, std::ostream& out) {
  for (const auto& c : report.checks) {
    out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": measured=" << format_number(c.measured)
        << " tolerance=" << format_number(c.tolerance) << '\n';
  }
  const auto failed = std::count_if(report.checks.begin(), report.checks.end(),
                                    [](const Check& c) { return !c.pass; });
  out << report.suite << ": " << (report.checks.size() - failed) << "/" << report.checks.size()
      << " checks passed\n";
}

}  // namespace subpois::cli
