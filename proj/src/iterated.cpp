#include "subpois/iterated.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/lambert_w.hpp>

#include "subpois/cpp.hpp"
#include "subpois/errors.hpp"

namespace subpois {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_time(double t, const char* who) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError(std::string(who) + ": t must be >= 0");
}

}  // namespace

long long iterated_tail_cutoff(const ModelParams& params, double t, double tol) {
  check_time(t, "iterated_tail_cutoff");
  if (t == 0.0) return 1;
  const double lt = params.lambda * t;
  const double mean = lt * params.mu;
  const double log_tol = std::log(tol);
  // Far beyond anything summable; callers cap by max_terms anyway.
  if (!(mean < 1e15)) return std::numeric_limits<long long>::max() / 4;
  // log E e^{sZ} = lambda t (exp(mu (e^s - 1)) - 1). The optimal s solves
  // u e^u = N e^mu / (lambda t) with u = mu e^s.
  auto log_bound = [&](double n) {
    const double u = boost::math::lambert_w0(n * std::exp(params.mu) / lt);
    if (u <= params.mu) return 0.0;
    const double s = std::log(u / params.mu);
    return -s * n + lt * std::expm1(u - params.mu);
  };
  long long lo = static_cast<long long>(std::floor(mean)) + 1;
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

IteratedLaw::IteratedLaw(ModelParams params, SeriesControl ctl)
    : params_(params), ctl_(ctl) {
  params_.validate();
  ctl_.validate();
}

double IteratedLaw::log_pmf(long long n, double t) const {
  check_time(t, "pmf");
  if (n < 0) throw DomainError("pmf: negative state");
  if (t == 0.0) return n == 0 ? 0.0 : kNegInf;
  const double x = params_.lambda * std::exp(-params_.mu) * t;
  const double nd = static_cast<double>(n);
  return -params_.leave_rate() * t + nd * std::log(params_.mu) - std::lgamma(nd + 1.0) +
         log_bell(static_cast<int>(n), x);
}

double IteratedLaw::pmf(long long n, double t) const { return std::exp(log_pmf(n, t)); }

std::vector<double> IteratedLaw::pmf_vector(double t, long long min_size) const {
  long long size = std::min<long long>(iterated_tail_cutoff(params_, t, ctl_.tolerance),
                                       ctl_.max_terms);
  size = std::max(size, min_size);
  std::vector<double> out(static_cast<std::size_t>(size));
  for (long long n = 0; n < size; ++n) out[static_cast<std::size_t>(n)] = pmf(n, t);
  return out;
}

double IteratedLaw::pmf_recursive(long long n, double t) const {
  if (n < 1) throw DomainError("pmf_recursive: recurrence starts at n = 1");
  check_time(t, "pmf_recursive");
  if (t == 0.0) return 0.0;
  const double x = params_.lambda * std::exp(-params_.mu) * t;
  const double log_mu = std::log(params_.mu);
  // coef[j] = mu^{j+1} / j!
  std::vector<double> coef(static_cast<std::size_t>(n));
  for (long long j = 0; j < n; ++j) {
    coef[j] = std::exp((j + 1) * log_mu - std::lgamma(static_cast<double>(j) + 1.0));
  }
  std::vector<double> p(static_cast<std::size_t>(n) + 1);
  p[0] = std::exp(-params_.leave_rate() * t);
  for (long long m = 1; m <= n; ++m) {
    CompensatedSum s;
    for (long long k = 1; k <= m; ++k) s.add(coef[m - k] * p[k - 1]);
    p[m] = x / static_cast<double>(m) * s.value();
  }
  return p[n];
}

double IteratedLaw::cdf(long long n, double t) const {
  check_time(t, "cdf");
  if (n < 0) return 0.0;
  if (t == 0.0) return 1.0;
  // The cutoff search only pays off when n reaches deep into the tail.
  const long long last = n <= 64 ? n : std::min(n, iterated_tail_cutoff(params_, t, 1e-18));
  CompensatedSum s;
  for (long long j = 0; j <= last; ++j) s.add(pmf(j, t));
  return std::min(1.0, s.value());
}

double IteratedLaw::cdf_closed_form(int n, double t) const {
  check_time(t, "cdf_closed_form");
  if (n < 0) return 0.0;
  if (n > kMaxExactDegree) throw UnsupportedDegree("cdf_closed_form: n exceeds exact limit");
  const double x = params_.lambda * std::exp(-params_.mu) * t;
  const double p0 = std::exp(-params_.leave_rate() * t);
  CompensatedSum bracket;
  bracket.add(1.0);
  double xk = 1.0;
  for (int k = 1; k <= n; ++k) {
    xk *= x;
    CompensatedSum c;
    for (int j = k; j <= n; ++j) {
      c.add(static_cast<double>(stirling2(j, k)) *
            std::exp(j * std::log(params_.mu) - std::lgamma(j + 1.0)));
    }
    bracket.add(xk * c.value());
  }
  return p0 * bracket.value();
}

double IteratedLaw::conditional_pmf(int k, double s, double t, int n) const {
  if (n < 0 || k < 0 || k > n) throw DomainError("conditional_pmf: need 0 <= k <= n");
  if (!(s > 0.0) || !(s < t)) throw DomainError("conditional_pmf: need 0 < s < t");
  const double a = params_.lambda * std::exp(-params_.mu);
  const double log_binom = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return std::exp(log_binom + log_bell(k, a * s) + log_bell(n - k, a * (t - s)) -
                  log_bell(n, a * t));
}

double IteratedLaw::mean_sojourn(int n) const {
  if (n < 0) throw DomainError("mean_sojourn: negative state");
  const double mu = params_.mu;
  // sum_{k>=0} k^n e^{-mu k} with 0^0 = 1; log-concave terms, mode near n/mu.
  auto log_term = [&](long long k) {
    if (k == 0) return n == 0 ? 0.0 : kNegInf;
    return n * std::log(static_cast<double>(k)) - mu * static_cast<double>(k);
  };
  long long mode = std::max<long long>(0, static_cast<long long>(std::floor(n / mu)));
  while (log_term(mode + 1) > log_term(mode)) ++mode;
  while (mode > 0 && log_term(mode - 1) > log_term(mode)) --mode;

  // Beyond the stopping point the tail is dominated by a geometric series of
  // ratio e^{-mu}; scale the threshold so that tail stays below tolerance.
  const double log_stop = std::log(ctl_.tolerance) + std::log(-std::expm1(-mu));
  LogSum total;
  total.add(log_term(mode));
  int used = 1;
  for (long long k = mode + 1; used < ctl_.max_terms; ++k, ++used) {
    const double lt = log_term(k);
    total.add(lt);
    if (lt < total.value() + log_stop) break;
  }
  for (long long k = mode - 1; k >= 0 && used < ctl_.max_terms; --k, ++used) {
    const double lt = log_term(k);
    total.add(lt);
    if (lt < total.value() + log_stop) break;
  }
  return std::exp(n * std::log(mu) - std::lgamma(n + 1.0) + total.value()) / params_.lambda;
}

std::pair<double, double> levy_exponent_limit_check(double theta, double xi, double mu) {
  if (!(mu > 0.0)) throw DomainError("levy_exponent_limit_check: mu must be positive");
  if (!(xi > 0.0)) throw DomainError("levy_exponent_limit_check: xi must be positive");
  const double psi = laplace_exponent(theta, ModelParams{xi / mu, mu}, JumpSpec::unit());
  return {psi, -xi * std::expm1(-theta)};
}

}  // namespace subpois
