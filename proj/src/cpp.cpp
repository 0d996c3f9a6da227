#include "subpois/cpp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>

#include "subpois/errors.hpp"

namespace subpois {

namespace {

void check_time(double t, const char* who) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError(std::string(who) + ": t must be >= 0");
}

// F_X^{(n)}(z-)
double jump_convolution_cdf_left(const JumpSpec& jumps, long long n, double z) {
  if (n == 0 || jumps.kind == JumpKind::degenerate_unit) {
    return z > static_cast<double>(n) ? 1.0 : 0.0;
  }
  return jump_convolution_cdf(jumps, n, z);
}

}  // namespace

double jump_convolution_cdf(const JumpSpec& jumps, long long n, double z) {
  if (n < 0) throw DomainError("jump_convolution_cdf: negative order");
  if (n == 0) return z >= 0.0 ? 1.0 : 0.0;
  const double nd = static_cast<double>(n);
  switch (jumps.kind) {
    case JumpKind::degenerate_unit:
      return z >= nd ? 1.0 : 0.0;
    case JumpKind::exponential:
      return z <= 0.0 ? 0.0 : boost::math::gamma_p(nd, jumps.zeta * z);
    case JumpKind::normal:
      return normal_cdf((z - nd * jumps.eta) / (jumps.sigma * std::sqrt(nd)));
  }
  return 0.0;
}

double jump_convolution_pdf(const JumpSpec& jumps, long long n, double z) {
  if (n < 1) throw DomainError("jump_convolution_pdf: order must be >= 1");
  const double nd = static_cast<double>(n);
  switch (jumps.kind) {
    case JumpKind::degenerate_unit:
      throw NoDensity("degenerate unit jumps have no density");
    case JumpKind::exponential:
      if (z <= 0.0) return 0.0;
      return jumps.zeta * boost::math::gamma_p_derivative(nd, jumps.zeta * z);
    case JumpKind::normal: {
      const double scale = jumps.sigma * std::sqrt(nd);
      return normal_pdf((z - nd * jumps.eta) / scale) / scale;
    }
  }
  return 0.0;
}

SubordinatedLaw::SubordinatedLaw(ModelParams params, JumpSpec jumps, double t,
                                 SeriesControl ctl)
    : params_(params), jumps_(jumps), t_(t) {
  jumps_.validate();
  check_time(t, "SubordinatedLaw");
  weights_ = IteratedLaw(params_, ctl).pmf_vector(t);
}

double SubordinatedLaw::cdf(double z) const {
  CompensatedSum s;
  for (std::size_t n = 0; n < weights_.size(); ++n) {
    s.add(weights_[n] * jump_convolution_cdf(jumps_, static_cast<long long>(n), z));
  }
  return std::clamp(s.value(), 0.0, 1.0);
}

double SubordinatedLaw::cdf_left(double z) const {
  CompensatedSum s;
  for (std::size_t n = 0; n < weights_.size(); ++n) {
    s.add(weights_[n] * jump_convolution_cdf_left(jumps_, static_cast<long long>(n), z));
  }
  return std::clamp(s.value(), 0.0, 1.0);
}

double SubordinatedLaw::density(double z) const {
  if (!jumps_.absolutely_continuous()) throw NoDensity("density: law of Z(t) is discrete");
  if (z == 0.0) throw DomainError("density: undefined at the atom z = 0");
  CompensatedSum s;
  for (std::size_t n = 1; n < weights_.size(); ++n) {
    s.add(weights_[n] * jump_convolution_pdf(jumps_, static_cast<long long>(n), z));
  }
  return std::max(0.0, s.value());
}

double cpp_cdf_Y(double y, double t, const ModelParams& params, const JumpSpec& jumps,
                 const SeriesControl& ctl) {
  params.validate();
  jumps.validate();
  ctl.validate();
  check_time(t, "cpp_cdf_Y");
  const double a = params.mu * t;
  const long long last =
      std::min<long long>(poisson_tail_cutoff(a, ctl.tolerance), ctl.max_terms);
  CompensatedSum s;
  for (long long m = 0; m <= last; ++m) s.add(poisson_pmf(m, a) * jump_convolution_cdf(jumps, m, y));
  return std::clamp(s.value(), 0.0, 1.0);
}

double cpp_cdf_Z(double z, double t, const ModelParams& params, const JumpSpec& jumps,
                 const SeriesControl& ctl) {
  return SubordinatedLaw(params, jumps, t, ctl).cdf(z);
}

double cpp_density_Z(double z, double t, const ModelParams& params, const JumpSpec& jumps,
                     const SeriesControl& ctl) {
  if (!jumps.absolutely_continuous()) throw NoDensity("density: law of Z(t) is discrete");
  return SubordinatedLaw(params, jumps, t, ctl).density(z);
}

double atom_mass_Z(double t, const ModelParams& params) {
  params.validate();
  check_time(t, "atom_mass_Z");
  return std::exp(-params.leave_rate() * t);
}

double exp_jump_cdf(double z, double t, const ModelParams& params, double zeta,
                    const SeriesControl& ctl) {
  JumpSpec::exponential(zeta).validate();
  check_time(t, "exp_jump_cdf");
  if (z < 0.0) return 0.0;
  if (t == 0.0) return 1.0;
  const auto p = IteratedLaw(params, ctl).pmf_vector(t);
  CompensatedSum s;
  s.add(1.0);
  for (std::size_t m = 1; m < p.size(); ++m) {
    s.add(-p[m] * poisson_cdf(static_cast<long long>(m) - 1, zeta * z));
  }
  return std::clamp(s.value(), 0.0, 1.0);
}

double exp_jump_cdf_alternative(double z, double t, const ModelParams& params, double zeta,
                                const SeriesControl& ctl) {
  JumpSpec::exponential(zeta).validate();
  check_time(t, "exp_jump_cdf_alternative");
  if (z < 0.0) return 0.0;
  if (t == 0.0) return 1.0;
  const auto p = IteratedLaw(params, ctl).pmf_vector(t);
  const double a = zeta * z;
  const long long last = std::min<long long>(poisson_tail_cutoff(a, ctl.tolerance), ctl.max_terms);
  CompensatedSum outer;
  CompensatedSum partial;  // P_j(t)
  for (long long j = 0; j <= last; ++j) {
    if (static_cast<std::size_t>(j) < p.size()) partial.add(p[j]);
    outer.add(poisson_pmf(j, a) * partial.value());
  }
  return std::clamp(outer.value(), 0.0, 1.0);
}

double exp_jump_density(double z, double t, const ModelParams& params, double zeta,
                        const SeriesControl& ctl) {
  JumpSpec::exponential(zeta).validate();
  check_time(t, "exp_jump_density");
  if (z < 0.0 || t == 0.0) return 0.0;
  const auto p = IteratedLaw(params, ctl).pmf_vector(t);
  CompensatedSum s;
  for (std::size_t m = 1; m < p.size(); ++m) {
    s.add(p[m] * poisson_pmf(static_cast<long long>(m) - 1, zeta * z));
  }
  return zeta * s.value();
}

double normal_jump_cdf(double z, double t, const ModelParams& params, double eta, double sigma,
                       const SeriesControl& ctl) {
  return SubordinatedLaw(params, JumpSpec::normal(eta, sigma), t, ctl).cdf(z);
}

double normal_jump_density(double z, double t, const ModelParams& params, double eta,
                           double sigma, const SeriesControl& ctl) {
  return SubordinatedLaw(params, JumpSpec::normal(eta, sigma), t, ctl).density(z);
}

double laplace_exponent(double theta, const ModelParams& params, const JumpSpec& jumps) {
  params.validate();
  jumps.validate();
  if (!std::isfinite(theta)) throw DomainError("laplace_exponent: theta must be finite");
  double one_minus_mx = 0.0;  // 1 - M_X(-theta)
  switch (jumps.kind) {
    case JumpKind::degenerate_unit:
      one_minus_mx = -std::expm1(-theta);
      break;
    case JumpKind::exponential:
      // M_X(-theta) = zeta / (zeta + theta) converges only for theta > -zeta.
      if (!(theta > -jumps.zeta)) {
        throw DomainError("laplace_exponent: theta outside convergence region (theta > -zeta)");
      }
      one_minus_mx = theta / (jumps.zeta + theta);
      break;
    case JumpKind::normal:
      one_minus_mx = -std::expm1(-jumps.eta * theta + 0.5 * jumps.sigma * jumps.sigma * theta * theta);
      break;
  }
  return -params.lambda * std::expm1(-params.mu * one_minus_mx);
}

MomentSummary moments_Z(double t, const ModelParams& params, const JumpSpec& jumps) {
  params.validate();
  jumps.validate();
  check_time(t, "moments_Z");
  MomentSummary m;
  m.xi = jumps.mean();
  m.sigma2 = jumps.variance();
  const double rate = params.lambda * params.mu * t;
  m.mean = rate * m.xi;
  m.variance = rate * (m.sigma2 + (params.mu + 1.0) * m.xi * m.xi);
  m.dispersion_index =
      m.mean != 0.0 ? m.variance / m.mean : std::numeric_limits<double>::quiet_NaN();
  return m;
}

double continuous_mass(double t, const ModelParams& params, const JumpSpec& jumps,
                       const SeriesControl& ctl) {
  if (!jumps.absolutely_continuous()) throw NoDensity("continuous_mass: law is discrete");
  check_time(t, "continuous_mass");
  if (t == 0.0) return 0.0;
  const SubordinatedLaw law(params, jumps, t, ctl);
  auto f = [&](double z) { return z == 0.0 ? 0.0 : law.density(z); };
  constexpr double kAbsTol = 1e-8;
  // The mixture is heavier-tailed than any single component, so the window
  // must cover the widest retained component rather than Z's own spread.
  const double m = static_cast<double>(law.weights().size());
  if (jumps.kind == JumpKind::exponential) {
    return integrate(f, 0.0, (m + 12.0 * std::sqrt(m) + 40.0) / jumps.zeta, kAbsTol);
  }
  const double spread = 12.0 * jumps.sigma * std::sqrt(m);
  const double lo = std::min(0.0, m * jumps.eta) - spread;
  const double hi = std::max(0.0, m * jumps.eta) + spread;
  return integrate(f, lo, 0.0, kAbsTol) + integrate(f, 0.0, hi, kAbsTol);
}

}  // namespace subpois
