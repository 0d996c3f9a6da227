#include "subpois/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "subpois/errors.hpp"

namespace subpois {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

using StirlingTable =
    std::array<std::array<std::uint64_t, kMaxExactDegree + 1>, kMaxExactDegree + 1>;

// Additive recurrence S(n,k) = k S(n-1,k) + S(n-1,k-1); every entry is a
// partial sum of Bell(n) so nothing overflows up to kMaxExactDegree.
const StirlingTable& stirling_table() {
  static const StirlingTable table = [] {
    StirlingTable t{};
    t[0][0] = 1;
    for (int n = 1; n <= kMaxExactDegree; ++n) {
      for (int k = 1; k <= n; ++k) {
        t[n][k] = static_cast<std::uint64_t>(k) * t[n - 1][k] + t[n - 1][k - 1];
      }
    }
    return t;
  }();
  return table;
}

void check_degree(int n, const char* who) {
  if (n < 0) throw DomainError(std::string(who) + ": negative degree");
  if (n > kMaxExactDegree) {
    throw UnsupportedDegree(std::string(who) + ": degree " + std::to_string(n) +
                            " exceeds exact limit " + std::to_string(kMaxExactDegree));
  }
}

// lgamma(k+1) - (k+1/2) log k + k - log sqrt(2 pi), the Stirling remainder.
double stirling_error(double k) {
  constexpr double kHalfLog2Pi = 0.91893853320467274178;
  if (k <= 15.0) return std::lgamma(k + 1.0) - (k + 0.5) * std::log(k) + k - kHalfLog2Pi;
  const double kk = k * k;
  constexpr double s0 = 1.0 / 12, s1 = 1.0 / 360, s2 = 1.0 / 1260, s3 = 1.0 / 1680, s4 = 1.0 / 1188;
  return (s0 - (s1 - (s2 - (s3 - s4 / kk) / kk) / kk) / kk) / k;
}

// k log(k/a) + a - k without cancellation when k is close to a.
double deviance(double k, double a) {
  if (std::fabs(k - a) < 0.1 * (k + a)) {
    double v = (k - a) / (k + a);
    double sum = (k - a) * v;
    double ej = 2.0 * k * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double next = sum + ej / (2 * j + 1);
      if (next == sum) break;
      sum = next;
    }
    return sum;
  }
  return k * std::log(k / a) + a - k;
}

// log of k^n x^k e^{-x} / k!, extended to real k >= 0. The Poisson factor
// uses the saddle-point form, which stays accurate when k and x are large.
double log_term(int n, double x, double k) {
  if (k == 0.0) return n == 0 ? -x : kNegInf;
  constexpr double kLog2Pi = 1.8378770664093454836;
  const double log_pois = -0.5 * (kLog2Pi + std::log(k)) - stirling_error(k) - deviance(k, x);
  return n * std::log(k) + log_pois;
}

}  // namespace

void SeriesControl::validate() const {
  if (!(tolerance > 0.0 && tolerance < 1.0)) {
    throw DomainError("SeriesControl: tolerance must lie in (0, 1)");
  }
  if (max_terms < 1) throw DomainError("SeriesControl: max_terms must be >= 1");
}

void CompensatedSum::add(double v) {
  const double t = sum_ + v;
  if (std::fabs(sum_) >= std::fabs(v)) {
    carry_ += (sum_ - t) + v;
  } else {
    carry_ += (v - t) + sum_;
  }
  sum_ = t;
}

void LogSum::add(double log_term) {
  if (log_term == kNegInf) return;
  if (log_term <= max_) {
    scaled_ += std::exp(log_term - max_);
  } else {
    scaled_ = scaled_ * std::exp(max_ - log_term) + 1.0;
    max_ = log_term;
  }
}

double LogSum::value() const {
  if (max_ == kNegInf) return kNegInf;
  return max_ + std::log(scaled_);
}

double log_poisson_pmf(long long m, double a) {
  if (m < 0) throw DomainError("poisson_pmf: negative count");
  if (!(a >= 0.0)) throw DomainError("poisson_pmf: negative mean");
  if (a == 0.0) return m == 0 ? 0.0 : kNegInf;
  const double md = static_cast<double>(m);
  return md * std::log(a) - a - std::lgamma(md + 1.0);
}

double poisson_pmf(long long m, double a) { return std::exp(log_poisson_pmf(m, a)); }

long long poisson_tail_cutoff(double a, double tol) {
  if (!(a >= 0.0)) throw DomainError("poisson_tail_cutoff: negative mean");
  if (a == 0.0) return 1;
  if (!(a < 1e15)) return std::numeric_limits<long long>::max() / 4;
  const double log_tol = std::log(tol);
  // log P{X >= N} <= N - a - N log(N/a) for N > a.
  auto log_bound = [a](double n) { return n - a - n * std::log(n / a); };
  long long lo = static_cast<long long>(std::floor(a)) + 1;
  if (log_bound(static_cast<double>(lo)) <= log_tol) return lo;
  long long hi = lo + 1;
  long long step = 1;
  while (log_bound(static_cast<double>(hi)) > log_tol) {
    lo = hi;
    step *= 2;
    hi += step;
  }
  while (hi - lo > 1) {
    const long long mid = lo + (hi - lo) / 2;
    if (log_bound(static_cast<double>(mid)) <= log_tol) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double poisson_cdf(long long n, double a) {
  if (!(a >= 0.0)) throw DomainError("poisson_cdf: negative mean");
  if (n < 0) return 0.0;
  if (a == 0.0) return 1.0;
  const long long last = std::min(n, poisson_tail_cutoff(a, 1e-18));
  // Terms below e^-745 underflow anyway; skip the far left tail for large a.
  long long first = 0;
  if (a > 700.0) {
    first = std::max<long long>(0, static_cast<long long>(a - 40.0 * std::sqrt(a)));
  }
  CompensatedSum s;
  for (long long i = first; i <= last; ++i) s.add(poisson_pmf(i, a));
  return std::min(1.0, s.value());
}

std::uint64_t stirling2(int n, int k) {
  check_degree(n, "stirling2");
  if (k < 0) throw DomainError("stirling2: negative block count");
  if (k > n) return 0;
  return stirling_table()[n][k];
}

BellEval bell_poly(int n, double x) {
  check_degree(n, "bell_poly");
  if (!(x >= 0.0)) throw DomainError("bell_poly: negative argument");
  const auto& row = stirling_table()[n];
  CompensatedSum s;
  double power = 1.0;
  for (int k = 0; k <= n; ++k) {
    if (row[k] != 0) s.add(static_cast<double>(row[k]) * power);
    power *= x;
  }
  BellEval out{n, x, s.value(), 0.0};
  if (out.value > 0.0 && std::isfinite(out.value)) {
    out.log_value = std::log(out.value);
  } else if (out.value == 0.0) {
    out.log_value = kNegInf;
  } else {
    LogSum ls;
    const double lx = std::log(x);
    for (int k = 1; k <= n; ++k) ls.add(std::log(static_cast<double>(row[k])) + k * lx);
    out.log_value = ls.value();
  }
  return out;
}

double bell_poly_derivative(int n, double x) {
  check_degree(n, "bell_poly_derivative");
  if (!(x >= 0.0)) throw DomainError("bell_poly_derivative: negative argument");
  const auto& row = stirling_table()[n];
  CompensatedSum s;
  double power = 1.0;
  for (int k = 1; k <= n; ++k) {
    s.add(static_cast<double>(k) * static_cast<double>(row[k]) * power);
    power *= x;
  }
  return s.value();
}

double log_bell_series(int n, double x, double rel_tol, int max_terms) {
  if (n < 0) throw DomainError("log_bell_series: negative degree");
  if (!(x >= 0.0)) throw DomainError("log_bell_series: negative argument");
  if (x == 0.0) return n == 0 ? 0.0 : kNegInf;
  if (n == 0) return 0.0;
  const double lx = std::log(x);
  const double nd = static_cast<double>(n);
  // Far above n^2 only the top coefficients matter:
  // B_n(x) = x^n (1 + S_2(n,n-1)/x + S_2(n,n-2)/x^2 + O((n^2/x)^3)).
  if (x > 1e8 * nd * nd) {
    const double c1 = nd * (nd - 1.0) / 2.0;
    const double c2 = nd * (nd - 1.0) * (nd - 2.0) * (3.0 * nd - 5.0) / 24.0;
    return nd * lx + std::log1p(c1 / x + c2 / (x * x));
  }
  // Terms are log-concave in k: locate the mode by bisection on the sign of
  // the forward difference.
  auto rising = [&](double k) { return log_term(n, x, k + 1.0) > log_term(n, x, k); };
  double lo = 1.0;
  double hi = std::max(2.0, std::floor(x));
  if (!rising(lo)) {
    hi = lo;
  } else {
    while (rising(hi)) {
      lo = hi;
      hi *= 2.0;
    }
    while (hi - lo > 1.0) {
      const double mid = std::floor(0.5 * (lo + hi));
      (rising(mid) ? lo : hi) = mid;
    }
  }
  const double mode = hi;

  // A wide peak is summed on a coarser lattice: for a smooth summand of
  // width sigma, step h <= sigma/6 leaves an error near e^{-2 pi^2 36}.
  const double sigma = 1.0 / std::sqrt(nd / (mode * mode) + 1.0 / mode);
  const double h = std::max(1.0, std::floor(sigma / 6.0));

  const double peak = log_term(n, x, mode);
  const double cut = peak + std::log(rel_tol);
  LogSum total;
  total.add(peak);
  int used = 1;
  for (double k = mode + h; used < max_terms; k += h, ++used) {
    const double lt = log_term(n, x, k);
    total.add(lt);
    if (lt < cut) break;
  }
  for (double k = mode - h; k >= 1.0 && used < max_terms; k -= h, ++used) {
    const double lt = log_term(n, x, k);
    total.add(lt);
    if (lt < cut) break;
  }
  return total.value() + std::log(h);
}

double log_bell(int n, double x) {
  if (n < 0) throw DomainError("log_bell: negative degree");
  if (!(x >= 0.0)) throw DomainError("log_bell: negative argument");
  if (n <= kMaxExactDegree) return bell_poly(n, x).log_value;
  return log_bell_series(n, x);
}

double lower_incomplete_gamma(double a, double z) {
  if (!(a > 0.0)) throw DomainError("lower_incomplete_gamma: a must be positive");
  if (!(z >= 0.0)) throw DomainError("lower_incomplete_gamma: z must be nonnegative");
  if (z == 0.0) return 0.0;
  if (std::isinf(z)) return std::tgamma(a);
  return boost::math::tgamma_lower(a, z);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_pdf(double x) {
  constexpr double inv_sqrt_2pi = 0.39894228040143267794;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

namespace {

double adaptive_gk(const std::function<double(double)>& f, double a, double b,
                   double abs_tol, int depth) {
  double err = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &err);
  if (err <= abs_tol || depth >= 40 || b - a < 1e-12 * (1.0 + std::fabs(a))) return v;
  const double m = 0.5 * (a + b);
  return adaptive_gk(f, a, m, 0.5 * abs_tol, depth + 1) +
         adaptive_gk(f, m, b, 0.5 * abs_tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
  if (a == b) return 0.0;
  if (a > b) return -integrate(f, b, a, abs_tol);
  return adaptive_gk(f, a, b, abs_tol, 0);
}

double integrate_to_infinity(const std::function<double(double)>& f, double a,
                             double abs_tol) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(
      [&](double x) { return f(x); }, a, std::numeric_limits<double>::infinity(),
      std::max(abs_tol, std::sqrt(std::numeric_limits<double>::epsilon()) * 1e-4));
}

}  // namespace subpois
