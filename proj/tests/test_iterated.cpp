#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "subpois/errors.hpp"
#include "subpois/iterated.hpp"

using namespace subpois;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

// Independent oracle: condition on N(t) = j and sum Poisson(mu j) masses.
double pmf_by_conditioning(long long n, double t, double lambda, double mu) {
  double s = 0.0;
  for (int j = 0; j < 400; ++j) s += poisson_pmf(j, lambda * t) * poisson_pmf(n, mu * j);
  return s;
}

const double kLambdas[] = {1.0, 2.0, 4.0};
const double kMus[] = {0.5, 1.0, 3.0};
const double kTimes[] = {0.5, 1.0, 2.0};

}  // namespace

TEST_CASE("closed-form low states") {
  const ModelParams p{2.0, 1.0};
  const IteratedLaw law(p);
  const double t = 1.3;
  const double p0 = std::exp(-p.lambda * t * (1 - std::exp(-p.mu)));
  CHECK(law.pmf(0, t) == doctest::Approx(p0).epsilon(1e-14));
  CHECK(law.pmf(1, t) == doctest::Approx(p0 * p.mu * p.lambda * t * std::exp(-p.mu)).epsilon(1e-14));
  CHECK(law.pmf(0, 0.0) == 1.0);
  CHECK(law.pmf(3, 0.0) == 0.0);
  CHECK(law.cdf(5, 0.0) == 1.0);
  CHECK(law.cdf(0, t) == law.pmf(0, t));
  CHECK_THROWS_AS(law.pmf(-1, t), DomainError);
  CHECK_THROWS_AS(law.pmf(1, -1.0), DomainError);
  CHECK_THROWS_AS((ModelParams{0.0, 1.0}).validate(), DomainError);
  CHECK_THROWS_AS((ModelParams{1.0, -2.0}).validate(), DomainError);
}

TEST_CASE("pmf agrees with conditioning on the subordinator") {
  for (double lambda : kLambdas) {
    for (double mu : kMus) {
      const IteratedLaw law({lambda, mu});
      for (double t : kTimes) {
        for (long long n : {0, 1, 2, 5, 11, 25, 40}) {
          const double oracle = pmf_by_conditioning(n, t, lambda, mu);
          CHECK(std::fabs(law.pmf(n, t) - oracle) < 1e-14 + 1e-11 * oracle);
        }
      }
    }
  }
}

TEST_CASE("normalization, moments, recursion, closed form") {
  for (double lambda : kLambdas) {
    for (double mu : kMus) {
      const IteratedLaw law({lambda, mu});
      for (double t : kTimes) {
        const auto p = law.pmf_vector(t);
        double s = 0.0, m1 = 0.0, m2 = 0.0;
        for (std::size_t n = 0; n < p.size(); ++n) {
          s += p[n];
          m1 += n * p[n];
          m2 += double(n) * n * p[n];
        }
        CHECK(std::fabs(s - 1.0) < 1e-10);
        CHECK(rel(m1, lambda * mu * t) < 1e-6);
        CHECK(rel(m2 - m1 * m1, lambda * mu * (1 + mu) * t) < 1e-6);
        for (int n = 1; n <= 25; ++n) {
          CHECK(rel(law.pmf_recursive(n, t), law.pmf(n, t)) < 1e-10);
          CHECK(std::fabs(law.cdf_closed_form(n, t) - law.cdf(n, t)) < 1e-12);
        }
      }
    }
  }
  const IteratedLaw law({2.0, 1.0});
  CHECK(rel(law.pmf_recursive(5, 1.5), law.pmf(5, 1.5)) < 1e-10);
  CHECK(law.cdf_closed_form(0, 1.0) == doctest::Approx(law.pmf(0, 1.0)).epsilon(1e-14));
  CHECK(law.cdf_closed_form(4, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  double partial = 0.0;
  for (int j = 0; j <= 3; ++j) partial += law.pmf(j, 1.0);
  CHECK(std::fabs(law.cdf(3, 1.0) - partial) < 1e-12);
  CHECK_THROWS_AS(law.pmf_recursive(0, 1.0), DomainError);
}

TEST_CASE("semigroup identity") {
  for (double lambda : kLambdas) {
    for (double mu : kMus) {
      const IteratedLaw law({lambda, mu});
      for (double t : kTimes) {
        const double s = 0.4 * t;
        for (int n = 0; n <= 20; ++n) {
          double conv = 0.0;
          for (int j = 0; j <= n; ++j) conv += law.pmf(j, s) * law.pmf(n - j, t - s);
          CHECK(std::fabs(conv - law.pmf(n, t)) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("log-space evaluation far in the tail") {
  const IteratedLaw law({4.0, 3.0});
  for (long long n : {150, 300, 1000}) {
    const double lp = law.log_pmf(n, 20.0);
    CHECK(std::isfinite(lp));
    CHECK(rel(lp, std::log(pmf_by_conditioning(n, 20.0, 4.0, 3.0))) < 1e-9);
  }
  CHECK(law.cdf(100000, 1.0) == 1.0);
}

TEST_CASE("conditional law given Z(t) = n") {
  const IteratedLaw law({1.5, 0.8});
  CHECK(law.conditional_pmf(0, 0.3, 1.0, 0) == 1.0);
  for (int n = 0; n <= 12; ++n) {
    double s = 0.0;
    for (int k = 0; k <= n; ++k) s += law.conditional_pmf(k, 0.7, 2.0, n);
    CHECK(std::fabs(s - 1.0) < 1e-10);
  }
  // Bayes oracle: P(Z(s)=k) P(Z(t-s)=n-k) / P(Z(t)=n).
  const double oracle = law.pmf(2, 0.7) * law.pmf(3, 1.3) / law.pmf(5, 2.0);
  CHECK(rel(law.conditional_pmf(2, 0.7, 2.0, 5), oracle) < 1e-10);
  CHECK_THROWS_AS(law.conditional_pmf(4, 0.5, 1.0, 3), DomainError);
  CHECK_THROWS_AS(law.conditional_pmf(1, 1.0, 1.0, 3), DomainError);
}

TEST_CASE("dispersion and sojourn") {
  CHECK(IteratedLaw({3.0, 1.0}).dispersion_index() == 2.0);
  CHECK(IteratedLaw({3.0, 1e-9}).dispersion_index() == doctest::Approx(1.0));

  const IteratedLaw law({2.0, 3.0});
  const auto p = law.pmf_vector(1.0);
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    m1 += n * p[n];
    m2 += double(n) * n * p[n];
  }
  CHECK(std::fabs((m2 - m1 * m1) / m1 - 4.0) < 1e-6);

  const IteratedLaw unit({1.0, 1.0});
  CHECK(unit.mean_sojourn(0) == doctest::Approx(1.0 / (1.0 - std::exp(-1.0))).epsilon(1e-13));
  CHECK(unit.mean_sojourn(0) == doctest::Approx(1.5819767).epsilon(1e-7));
  const double occupation = integrate_to_infinity([&](double t) { return unit.pmf(2, t); }, 0.0, 1e-12);
  CHECK(std::fabs(unit.mean_sojourn(2) - occupation) < 1e-8);
  for (int n = 0; n <= 20; ++n) {
    const double s = law.mean_sojourn(n);
    CHECK(std::isfinite(s));
    CHECK(s > 0.0);
  }
}

TEST_CASE("poisson limit of the Levy exponent") {
  const auto [psi0, lim0] = levy_exponent_limit_check(0.0, 1.0, 0.1);
  CHECK(psi0 == 0.0);
  CHECK(lim0 == 0.0);
  const auto [psi, lim] = levy_exponent_limit_check(1.0, 1.0, 1e-3);
  CHECK(std::fabs(psi - lim) < 1e-3);
  const auto e1 = levy_exponent_limit_check(0.5, 2.0, 0.02);
  const auto e2 = levy_exponent_limit_check(0.5, 2.0, 0.01);
  const double ratio = std::fabs(e2.first - e2.second) / std::fabs(e1.first - e1.second);
  CHECK(ratio == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("series control is honoured") {
  const IteratedLaw loose({4.0, 3.0}, {1e-4, 100000});
  const IteratedLaw tight({4.0, 3.0}, {1e-14, 100000});
  CHECK(loose.pmf_vector(1.0).size() < tight.pmf_vector(1.0).size());
  const IteratedLaw capped({4.0, 3.0}, {1e-14, 10});
  CHECK(capped.pmf_vector(1.0).size() == 10);
  for (double tol : {1e-6, 1e-13}) {
    const long long cut = iterated_tail_cutoff({4.0, 3.0}, 1.0, tol);
    double tail = 0.0;
    for (long long n = cut; n < cut + 400; ++n) tail += pmf_by_conditioning(n, 1.0, 4.0, 3.0);
    CHECK(tail <= tol);
    CHECK(tail > tol * 1e-4);  // the bound is not wildly conservative
  }
}
