#pragma once

#include <cstdint>
#include <functional>
#include <limits>

namespace subpois {

/// Controls every truncated infinite series in the library.
///
/// `tolerance` bounds the neglected tail mass of a Poisson-type mixture;
/// `max_terms` is a hard cap on the number of evaluated terms.
struct SeriesControl {
  double tolerance = 1e-13;
  int max_terms = 100000;

  /// Throws DomainError unless 0 < tolerance < 1 and max_terms >= 1.
  void validate() const;
};

/// Highest degree for which Stirling numbers (and hence bell_poly) are exact
/// in 64-bit unsigned arithmetic. Bell(25) ~ 4.6e18 < 2^64; Bell(26) is not.
inline constexpr int kMaxExactDegree = 25;

struct BellEval {
  int n = 0;
  double x = 0.0;
  double value = 0.0;
  double log_value = 0.0;  // -inf when value == 0
};

// ---- Poisson kernels -------------------------------------------------------

double log_poisson_pmf(long long m, double a);
double poisson_pmf(long long m, double a);
/// P(n; a) = sum_{i<=n} poisson_pmf(i, a).
double poisson_cdf(long long n, double a);

/// Smallest N such that P{Poisson(a) >= N} <= tol (Chernoff bound).
long long poisson_tail_cutoff(double a, double tol);

// ---- Stirling / Bell -------------------------------------------------------

/// Exact S_2(n, k) for 0 <= n <= kMaxExactDegree; 0 when k > n.
std::uint64_t stirling2(int n, int k);

/// B_n(x) = sum_k S_2(n,k) x^k, compensated summation; n <= kMaxExactDegree.
BellEval bell_poly(int n, double x);

/// B'_n(x) by coefficient differentiation; defined for all x >= 0.
double bell_poly_derivative(int n, double x);

/// log B_n(x) for any n >= 0: exact Dobinski for small n, otherwise the
/// positive series sum_k k^n x^k e^{-x}/k! in log-sum-exp form.
double log_bell(int n, double x);

/// log of sum_k k^n x^k e^{-x}/k! summed outward from its mode until terms
/// fall below `rel_tol` of the running total. Exposed for cross-checks.
double log_bell_series(int n, double x, double rel_tol = 1e-18, int max_terms = 1000000);

// ---- Gamma / normal --------------------------------------------------------

/// gamma(a, z) = int_0^z t^{a-1} e^{-t} dt.
double lower_incomplete_gamma(double a, double z);

/// Standard normal CDF via erfc.
double normal_cdf(double x);
double normal_pdf(double x);

// ---- Summation -------------------------------------------------------------

/// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double v);
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// Running log-sum-exp accumulator; value() is log of the total.
class LogSum {
 public:
  void add(double log_term);
  double value() const;

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double scaled_ = 0.0;
};

// ---- Quadrature ------------------------------------------------------------

/// Adaptive Gauss-Kronrod on [a, b] with absolute tolerance `abs_tol`.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10);

/// Integral over [a, inf).
double integrate_to_infinity(const std::function<double(double)>& f, double a,
                             double abs_tol = 1e-10);

}  // namespace subpois
