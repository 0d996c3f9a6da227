#include "subpois/crossing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "subpois/errors.hpp"
#include "subpois/kernels.hpp"

namespace subpois {

namespace {

void check_level(int k, const char* who) {
  if (k < 1) throw DomainError(std::string(who) + ": boundary level k must be >= 1");
}

// C(i; m) = sum_{j=i}^{m} S_2(j, i) mu^j / j!
double stirling_weight(int i, int m, double mu) {
  CompensatedSum c;
  for (int j = i; j <= m; ++j) {
    c.add(static_cast<double>(stirling2(j, i)) * std::exp(j * std::log(mu) - std::lgamma(j + 1.0)));
  }
  return c.value();
}

// e^{log_scale} B_n(x) (or B'_n(x)), scaling each term separately so that a
// vanishing prefactor against a huge polynomial stays finite.
double scaled_bell(int n, double x, double log_scale, bool derivative) {
  if (x == 0.0) {
    const bool nonzero = derivative ? n >= 1 : n == 0;
    return nonzero ? std::exp(log_scale) : 0.0;
  }
  const double log_x = std::log(x);
  CompensatedSum s;
  for (int i = derivative ? 1 : 0; i <= n; ++i) {
    const auto s2 = stirling2(n, i);
    if (s2 == 0) continue;
    const double coeff = static_cast<double>(s2) * (derivative ? i : 1);
    s.add(coeff * std::exp(log_scale + (derivative ? i - 1 : i) * log_x));
  }
  return s.value();
}

}  // namespace

Boundary Boundary::constant(int k) {
  check_level(k, "Boundary");
  return {BoundaryKind::constant, k, {}};
}

Boundary Boundary::linear_decreasing(int k) {
  check_level(k, "Boundary");
  return {BoundaryKind::linear_decreasing, k, {}};
}

Boundary Boundary::linear_increasing(int k) {
  check_level(k, "Boundary");
  return {BoundaryKind::linear_increasing, k, {}};
}

Boundary Boundary::general(int k, std::function<double(double)> fn) {
  check_level(k, "Boundary");
  if (!fn) throw DomainError("Boundary: empty boundary function");
  if (fn(0.0) != static_cast<double>(k)) throw DomainError("Boundary: fn(0) must equal k");
  return {BoundaryKind::general_nonincreasing, k, std::move(fn)};
}

double Boundary::at(double t) const {
  switch (kind) {
    case BoundaryKind::constant: return k;
    case BoundaryKind::linear_decreasing: return std::max(k - t, 0.0);
    case BoundaryKind::linear_increasing: return k + t;
    case BoundaryKind::general_nonincreasing: return fn(t);
  }
  return k;
}

long long floor_minus(double x) { return static_cast<long long>(std::ceil(x)) - 1; }

double survival_nonincreasing(const Boundary& boundary, double t, const IteratedLaw& law) {
  if (!boundary.nonincreasing()) {
    throw WrongOperation("survival_nonincreasing: boundary is increasing; use survival_linear_increasing");
  }
  if (!(t >= 0.0)) throw DomainError("survival_nonincreasing: t must be >= 0");
  const double level = boundary.at(t);
  // Z(t) >= 0, so the crossing has certainly happened once beta reaches 0.
  if (level <= 0.0) return 0.0;
  return law.cdf(floor_minus(level), t);
}

double crossing_density_constant(int k, double t, const IteratedLaw& law) {
  check_level(k, "crossing_density_constant");
  if (!(t > 0.0)) throw DomainError("crossing_density_constant: t must be > 0");
  const auto& p = law.params();
  const double c = p.leave_rate();
  const double a = p.lambda * std::exp(-p.mu);
  const double x = a * t;
  const double log_p0 = -c * t;
  if (k == 1) return c * std::exp(log_p0);
  // psi = -d/dt P_{k-1}(t) = p_0 sum_{j<k} mu^j/j! [c B_j(x) - a B'_j(x)]
  CompensatedSum s;
  for (int j = 0; j < k; ++j) {
    const double log_w = log_p0 + j * std::log(p.mu) - std::lgamma(j + 1.0);
    s.add(c * scaled_bell(j, x, log_w, false) - a * scaled_bell(j, x, log_w, true));
  }
  return std::max(0.0, s.value());
}

double crossing_density_constant_stirling(int k, double t, const IteratedLaw& law) {
  check_level(k, "crossing_density_constant_stirling");
  if (!(t > 0.0)) throw DomainError("crossing_density_constant_stirling: t must be > 0");
  const auto& p = law.params();
  const double c = p.leave_rate();
  const double a = p.lambda * std::exp(-p.mu);
  const double x = a * t;
  const double p0 = std::exp(-c * t);
  const int m = k - 1;
  CompensatedSum first;
  first.add(1.0);
  CompensatedSum second;
  for (int i = 1; i <= m; ++i) {
    const double ci = stirling_weight(i, m, p.mu);
    first.add(std::pow(x, i) * ci);
    second.add(i * std::pow(x, i - 1) * ci);
  }
  return p0 * c * first.value() - p0 * a * second.value();
}

double mean_crossing_time_constant(int k, const IteratedLaw& law) {
  check_level(k, "mean_crossing_time_constant");
  const auto& p = law.params();
  const double b = std::expm1(p.mu);
  CompensatedSum bracket;
  bracket.add(1.0);
  for (int i = 1; i <= k - 1; ++i) {
    bracket.add(std::exp(std::lgamma(i + 1.0) - i * std::log(b)) * stirling_weight(i, k - 1, p.mu));
  }
  return bracket.value() / p.leave_rate();
}

double hitting_density(int k, double t, const IteratedLaw& law) {
  check_level(k, "hitting_density");
  if (!(t >= 0.0)) throw DomainError("hitting_density: t must be >= 0");
  const auto& p = law.params();
  const double x = p.lambda * std::exp(-p.mu) * t;
  const double log_pref = -p.mu + k * std::log(p.mu) - std::lgamma(k + 1.0) - p.leave_rate() * t;
  return p.lambda * scaled_bell(k, x, log_pref, true);
}

double hitting_cdf(int k, double t, const IteratedLaw& law) {
  check_level(k, "hitting_cdf");
  if (!(t >= 0.0)) throw DomainError("hitting_cdf: t must be >= 0");
  const auto& p = law.params();
  if (std::isinf(t)) return hitting_probability(k, p.mu);
  const double x = p.lambda * std::exp(-p.mu) * t;
  const double ct = p.leave_rate() * t;
  const double b = std::expm1(p.mu);
  CompensatedSum s;
  s.add(scaled_bell(k, x, -ct, false));
  // The j = 0 term carries S_2(k, 0) = 0 for k >= 1.
  for (int j = 0; j <= k; ++j) {
    const auto s2 = stirling2(k, j);
    if (s2 == 0) continue;
    s.add(static_cast<double>(s2) * lower_incomplete_gamma(j + 1.0, ct) / std::pow(b, j));
  }
  return std::exp(k * std::log(p.mu) - std::lgamma(k + 1.0)) * s.value();
}

double hitting_probability(int k, double mu) {
  check_level(k, "hitting_probability");
  if (!(mu > 0.0)) throw DomainError("hitting_probability: mu must be positive");
  if (k > kMaxExactDegree) throw UnsupportedDegree("hitting_probability: k exceeds exact limit");
  const double log_b = std::log(std::expm1(mu));
  const double log_pref = k * std::log(mu) - std::lgamma(k + 1.0);
  CompensatedSum s;
  for (int j = 1; j <= k; ++j) {
    s.add(std::exp(log_pref + std::log(static_cast<double>(stirling2(k, j))) +
                   std::lgamma(j + 1.0) - j * log_b));
  }
  return s.value();
}

double AvoidingTable::g(int n, int j) const {
  const auto& r = rows_.at(n);
  if (j < 0 || static_cast<std::size_t>(j) >= r.size()) return 0.0;
  return r[j];
}

double AvoidingTable::row_sum(int n) const {
  const auto& r = rows_.at(n);
  CompensatedSum s;
  for (double v : r) s.add(v);
  return s.value();
}

AvoidingTable avoiding_table(int k, int horizon, const IteratedLaw& law) {
  check_level(k, "avoiding_table");
  if (horizon < 0) throw DomainError("avoiding_table: horizon must be >= 0");
  // One-step kernel p_j(1) for every state reachable below the boundary.
  std::vector<double> step(static_cast<std::size_t>(k + std::max(horizon, 1)));
  for (std::size_t j = 0; j < step.size(); ++j) step[j] = law.pmf(static_cast<long long>(j), 1.0);

  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<std::size_t>(horizon) + 1);
  rows.push_back({1.0});
  for (int n = 1; n <= horizon; ++n) {
    // Below k + n the boundary cannot be reached inside (n-1, n]: paths are
    // nondecreasing and the boundary strictly increases.
    std::vector<double> next(static_cast<std::size_t>(k + n));
    kernels::convolve_truncated(rows.back(), step, next);
    rows.push_back(std::move(next));
  }
  return AvoidingTable(k, horizon, std::move(rows));
}

double survival_linear_increasing(int k, double t, const IteratedLaw& law) {
  check_level(k, "survival_linear_increasing");
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("survival_linear_increasing: t must be >= 0");
  return survival_linear_increasing(avoiding_table(k, static_cast<int>(std::floor(t)), law), t, law);
}

double survival_linear_increasing(const AvoidingTable& table, double t, const IteratedLaw& law) {
  if (!(t >= 0.0)) throw DomainError("survival_linear_increasing: t must be >= 0");
  const int n = static_cast<int>(std::floor(t));
  if (n > table.horizon()) throw DomainError("survival_linear_increasing: table horizon too short");
  if (t == static_cast<double>(n)) return table.row_sum(n);
  const int width = table.k() + n + 1;  // states 0..k+n stay below k + t
  std::vector<double> step(static_cast<std::size_t>(width));
  for (int j = 0; j < width; ++j) step[j] = law.pmf(j, t - n);
  std::vector<double> at_t(static_cast<std::size_t>(width));
  kernels::convolve_truncated(table.row(n), step, at_t);
  CompensatedSum s;
  for (double v : at_t) s.add(v);
  return s.value();
}

}  // namespace subpois
