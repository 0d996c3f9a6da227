#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "subpois/crossing.hpp"
#include "subpois/errors.hpp"
#include "subpois/mc.hpp"
#include "subpois/stats.hpp"

using namespace subpois;

TEST_CASE("rng streams") {
  mc::Rng a(42, 3), b(42, 3), c(42, 4), d(43, 3);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(x != d());
  mc::Rng u(1, 0);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double v = u.uniform();
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
  CHECK(std::fabs(sum / 100000 - 0.5) < 3.0 * std::sqrt(1.0 / 12 / 100000));
}

TEST_CASE("poisson variates match the pmf") {
  for (double mean : {0.3, 4.0, 9.9, 10.0, 37.5, 400.0}) {
    mc::Rng rng(7, static_cast<std::uint64_t>(mean * 10));
    const int n = 200000;
    const auto cells = static_cast<std::size_t>(mean + 12 * std::sqrt(mean) + 15);
    std::vector<std::int64_t> counts(cells, 0);
    std::int64_t overflow = 0;
    for (int i = 0; i < n; ++i) {
      const auto k = mc::sample_poisson(rng, mean);
      REQUIRE(k >= 0);
      if (static_cast<std::size_t>(k) < cells) ++counts[k]; else ++overflow;
    }
    CHECK(overflow == 0);
    std::vector<double> probs(cells);
    for (std::size_t k = 0; k < cells; ++k) probs[k] = poisson_pmf(static_cast<long long>(k), mean);
    const auto chi = stats::chi_square_gof(counts, probs, n);
    CHECK_MESSAGE(chi.p_value > 0.001, "mean " << mean << " p " << chi.p_value);
  }
  mc::Rng rng(1, 1);
  CHECK(mc::sample_poisson(rng, 0.0) == 0);
}

TEST_CASE("W and Z samplers") {
  const int n = 1000000;
  const double mu = 1.3;
  for (const auto& j : {JumpSpec::exponential(2.0), JumpSpec::normal(0.5, 1.0)}) {
    mc::Rng rng(11, 0);
    std::vector<double> w(n);
    int zeros = 0;
    for (auto& v : w) {
      v = mc::sample_W(j, mu, rng);
      zeros += v == 0.0;
    }
    const auto est = stats::mean_estimate(w);
    CHECK(std::fabs(est.mean - mu * j.mean()) < 3.0 * est.std_error);
    const double p = std::exp(-mu);
    CHECK(std::fabs(static_cast<double>(zeros) / n - p) < 3.0 * stats::binomial_se(p, n));
  }
  mc::Rng rng(3, 0);
  for (int i = 0; i < 1000; ++i) {
    const double w = mc::sample_W(JumpSpec::unit(), mu, rng);
    CHECK(w == std::floor(w));
    CHECK(w >= 0.0);
  }
}

TEST_CASE("paths") {
  const ModelParams p{0.05, 1.0};
  const int n = 100000;
  int empty = 0;
  double count_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    mc::Rng rng(5, i);
    const auto path = mc::simulate_path(p, JumpSpec::unit(), 1.0, rng);
    empty += path.epochs.empty();
    count_sum += static_cast<double>(path.epochs.size());
  }
  const double pe = std::exp(-0.05);
  CHECK(std::fabs(static_cast<double>(empty) / n - pe) < 3.0 * stats::binomial_se(pe, n));
  CHECK(std::fabs(count_sum / n - 0.05) < 3.0 * std::sqrt(0.05 / n));

  mc::Rng rng(9, 0);
  const auto path = mc::simulate_path({3.0, 2.0}, JumpSpec::normal(1.0, 1.0), 10.0, rng);
  REQUIRE(path.epochs.size() == path.increments.size());
  REQUIRE(path.epochs.size() == path.cumulative.size());
  double run = 0.0;
  for (std::size_t i = 0; i < path.epochs.size(); ++i) {
    if (i > 0) CHECK(path.epochs[i] > path.epochs[i - 1]);
    CHECK(path.epochs[i] <= 10.0);
    run += path.increments[i];
    CHECK(path.cumulative[i] == doctest::Approx(run));
    CHECK(path.value_at(path.epochs[i]) == path.cumulative[i]);
  }
  CHECK(path.value_at(0.0) == 0.0);

  // Z(t) mean.
  const ModelParams q{2.0, 1.5};
  const auto z = mc::simulate_Z(2.0, q, JumpSpec::exponential(0.5), {3, 200000, 0.0, 0});
  const auto est = stats::mean_estimate(z);
  CHECK(std::fabs(est.mean - 2.0 * 1.5 * 2.0 * 2.0) < 3.0 * est.std_error);
}

TEST_CASE("empirical pmf of Z(t) passes chi-square") {
  for (auto [lambda, mu, t] : {std::tuple{4.0, 3.0, 1.0}, std::tuple{4.0, 4.0, 1.0}, std::tuple{2.0, 1.0, 2.0}}) {
    const ModelParams p{lambda, mu};
    const int n = 200000;
    const auto z = mc::simulate_Z(t, p, JumpSpec::unit(), {123, n, 0.0, 0});
    const auto probs = IteratedLaw(p).pmf_vector(t);
    std::vector<std::int64_t> counts(probs.size(), 0);
    for (double v : z) {
      const auto k = static_cast<std::size_t>(v);
      if (k < counts.size()) ++counts[k];
    }
    const auto chi = stats::chi_square_gof(counts, probs, n);
    CHECK_MESSAGE(chi.p_value > 0.01, "lambda " << lambda << " mu " << mu << " p " << chi.p_value);
  }
}

TEST_CASE("first crossing samples") {
  const ModelParams p{2.0, 1.0};
  const double rate = p.leave_rate();
  std::vector<double> times;
  for (int i = 0; i < 100000; ++i) {
    mc::Rng rng(31, i);
    const auto t = mc::first_crossing_sample(Boundary::constant(1), p, JumpSpec::unit(), 1e9, rng);
    REQUIRE(t.has_value());
    times.push_back(*t);
  }
  const double d = stats::ks_distance(times, [&](double t) { return t <= 0 ? 0.0 : -std::expm1(-rate * t); });
  CHECK(d < stats::ks_critical(100000, 0.05));

  // Process frozen at 0: the descending boundary reaches it at t = k.
  const ModelParams frozen{1e-12, 1.0};
  mc::Rng rng(1, 0);
  CHECK(*mc::first_crossing_sample(Boundary::linear_decreasing(3), frozen, JumpSpec::unit(), 10.0, rng) == 3.0);
  const auto g = Boundary::general(3, [](double t) { return std::max(0.0, 3.0 - t * t); });
  CHECK(*mc::first_crossing_sample(g, frozen, JumpSpec::unit(), 10.0, rng) ==
        doctest::Approx(std::sqrt(3.0)).epsilon(1e-11));
  CHECK(!mc::first_crossing_sample(Boundary::constant(2), frozen, JumpSpec::unit(), 10.0, rng).has_value());

  // Boundary k + t: censored fraction tracks the long-run survival.
  const IteratedLaw law(p);
  const auto ts = mc::simulate_crossing_times(Boundary::linear_increasing(2), p, JumpSpec::unit(), {17, 100000, 40.0, 0});
  const double censored = std::count_if(ts.begin(), ts.end(), [](double t) { return std::isinf(t); }) / 1e5;
  const double surv = survival_linear_increasing(2, 40.0, law);
  CHECK(std::fabs(censored - surv) < 3.0 * stats::binomial_se(surv, 100000) + 1e-4);

  // Boundary k - t against the analytic survival.
  const auto td = mc::simulate_crossing_times(Boundary::linear_decreasing(4), p, JumpSpec::unit(), {19, 100000, 0.0, 0});
  const double alive = std::count_if(td.begin(), td.end(), [](double t) { return t > 1.5; }) / 1e5;
  const double sd = survival_nonincreasing(Boundary::linear_decreasing(4), 1.5, law);
  CHECK(std::fabs(alive - sd) < 3.0 * stats::binomial_se(sd, 100000));
}

TEST_CASE("hitting samples") {
  const ModelParams p{1.0, 1.0};
  mc::Rng rng(1, 0);
  CHECK_THROWS_AS(mc::hitting_sample(1, p, JumpSpec::exponential(1.0), 10.0, rng), WrongOperation);
  for (double lambda : {1.0, 2.0}) {
    const ModelParams q{lambda, 1.0};
    const auto hits = mc::simulate_hitting(3, q, {23, 200000, 0.0, 0});
    const double f = std::count_if(hits.begin(), hits.end(), [](const mc::HitOutcome& h) { return h.status == mc::HitStatus::hit; }) / 2e5;
    const double pk = hitting_probability(3, 1.0);
    CHECK(std::fabs(f - pk) < 3.0 * stats::binomial_se(pk, 200000));
  }
  const auto big = mc::simulate_hitting(1, {1.0, 8.0}, {2, 20000, 0.0, 0});
  const double f = std::count_if(big.begin(), big.end(), [](const mc::HitOutcome& h) { return h.status == mc::HitStatus::hit; }) / 2e4;
  CHECK(f < 0.01);
}

TEST_CASE("results do not depend on the thread count") {
  const ModelParams p{2.0, 1.0};
  const auto j = JumpSpec::normal(0.3, 1.0);
  const auto a = mc::simulate_Z(1.5, p, j, {99, 5000, 0.0, 1});
  const auto b = mc::simulate_Z(1.5, p, j, {99, 5000, 0.0, 7});
  CHECK(a == b);
  const auto c = mc::simulate_crossing_times(Boundary::linear_decreasing(3), p, JumpSpec::unit(), {5, 3000, 0.0, 1});
  const auto d = mc::simulate_crossing_times(Boundary::linear_decreasing(3), p, JumpSpec::unit(), {5, 3000, 0.0, 5});
  CHECK(c == d);
  CHECK_THROWS_AS((mc::SimConfig{1, 0, 0.0, 0}).validate(), DomainError);
  CHECK(mc::default_horizon(p) == doctest::Approx(50.0 / p.leave_rate()));
}

TEST_CASE("goodness-of-fit helpers") {
  // Atom-aware KS distance: half the mass at 0 and a uniform on (0, 1].
  std::vector<double> s{0.0, 0.0, 0.25, 0.75};
  auto cdf = [](double x) { return x < 0 ? 0.0 : std::min(1.0, 0.5 + 0.5 * x); };
  auto left = [](double x) { return x <= 0 ? 0.0 : std::min(1.0, 0.5 + 0.5 * x); };
  CHECK(stats::ks_distance(s, cdf, left) == doctest::Approx(0.125));
  CHECK(stats::ks_critical(10000, 0.05) == doctest::Approx(0.0136).epsilon(0.01));
  CHECK(stats::ks_critical(10000, 0.01) == doctest::Approx(0.0163).epsilon(0.01));
  const std::vector<std::int64_t> obs{50, 50};
  const std::vector<double> pr{0.5, 0.5};
  const auto chi = stats::chi_square_gof(obs, pr, 100);
  CHECK(chi.statistic == 0.0);
  CHECK(chi.p_value == doctest::Approx(1.0));
}

TEST_CASE("hitting-time histogram against the analytic law") {
  const ModelParams p{2.0, 1.0};
  const IteratedLaw law(p);
  const int k = 3;
  const std::int64_t n = 200000;
  const auto hits = mc::simulate_hitting(k, p, {41, n, 0.0, 0});
  // Cells: (b_i, b_{i+1}] for hit times, one tail cell, one "never" cell.
  std::vector<double> edges;
  for (double b = 0.0; b <= 6.0; b += 0.25) edges.push_back(b);
  std::vector<std::int64_t> counts(edges.size() + 1, 0);
  for (const auto& h : hits) {
    if (h.status != mc::HitStatus::hit) {
      ++counts.back();
      continue;
    }
    const auto it = std::lower_bound(edges.begin(), edges.end(), h.time);
    ++counts[static_cast<std::size_t>(it - edges.begin()) - 1];
  }
  std::vector<double> probs(counts.size());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    probs[i] = hitting_cdf(k, edges[i + 1], law) - hitting_cdf(k, edges[i], law);
  }
  const double pk = hitting_probability(k, 1.0);
  probs[edges.size() - 1] = pk - hitting_cdf(k, edges.back(), law);
  probs.back() = 1.0 - pk;
  const auto chi = stats::chi_square_gof(counts, probs, n);
  CHECK_MESSAGE(chi.p_value > 0.05, "p = " << chi.p_value);
}

TEST_CASE("mean crossing time and avoiding frequency by simulation") {
  const ModelParams p{2.0, 1.0};
  const IteratedLaw law(p);
  const auto times = mc::simulate_crossing_times(Boundary::constant(3), p, JumpSpec::unit(), {43, 100000, 0.0, 0});
  REQUIRE(std::none_of(times.begin(), times.end(), [](double t) { return std::isinf(t); }));
  const auto est = stats::mean_estimate(times);
  CHECK(std::fabs(est.mean - mean_crossing_time_constant(3, law)) < 3.0 * est.std_error);

  const auto lin = mc::simulate_crossing_times(Boundary::linear_increasing(2), p, JumpSpec::unit(), {47, 100000, 4.0, 0});
  const double alive = std::count_if(lin.begin(), lin.end(), [](double t) { return t > 3.0; }) / 1e5;
  const double g = avoiding_table(2, 3, law).row_sum(3);
  CHECK(std::fabs(alive - g) < 3.0 * stats::binomial_se(g, 100000));
}
