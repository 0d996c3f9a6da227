#include "subpois/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "subpois/errors.hpp"
#include "subpois/special.hpp"

namespace subpois::stats {

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf,
                   const std::function<double(double)>& cdf_left) {
  if (samples.empty()) throw DomainError("ks_distance: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double worst = 0.0;
  std::size_t i = 0;
  while (i < samples.size()) {
    std::size_t j = i;
    while (j < samples.size() && samples[j] == samples[i]) ++j;
    const double x = samples[i];
    const double below = static_cast<double>(i) / n;
    const double upto = static_cast<double>(j) / n;
    const double f = cdf(x);
    const double f_left = cdf_left ? cdf_left(x) : f;
    worst = std::max({worst, std::fabs(upto - f), std::fabs(below - f_left)});
    i = j;
  }
  return worst;
}

double ks_critical(std::int64_t n, double alpha) {
  // c(alpha) = sqrt(-ln(alpha/2) / 2)
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

ChiSquare chi_square_gof(std::span<const std::int64_t> observed, std::span<const double> probs,
                         std::int64_t n, double min_expected) {
  if (observed.size() != probs.size()) throw DomainError("chi_square_gof: size mismatch");
  ChiSquare out;
  const double total = static_cast<double>(n);
  double pooled_obs = 0.0;
  double pooled_exp = 0.0;
  int cells = 0;
  double used_prob = 0.0;
  double used_obs = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double e = total * probs[i];
    if (e >= min_expected) {
      const double d = static_cast<double>(observed[i]) - e;
      out.statistic += d * d / e;
      ++cells;
    } else {
      pooled_obs += static_cast<double>(observed[i]);
      pooled_exp += e;
    }
    used_prob += probs[i];
    used_obs += static_cast<double>(observed[i]);
  }
  pooled_obs += total - used_obs;
  pooled_exp += total * std::max(0.0, 1.0 - used_prob);
  if (pooled_exp >= min_expected) {
    const double d = pooled_obs - pooled_exp;
    out.statistic += d * d / pooled_exp;
    ++cells;
  }
  out.dof = std::max(1, cells - 1);
  out.p_value = boost::math::gamma_q(0.5 * out.dof, 0.5 * out.statistic);
  return out;
}

MeanEstimate mean_estimate(std::span<const double> values) {
  if (values.size() < 2) throw DomainError("mean_estimate: need at least two values");
  CompensatedSum s;
  for (double v : values) s.add(v);
  const double n = static_cast<double>(values.size());
  const double mean = s.value() / n;
  CompensatedSum ss;
  for (double v : values) ss.add((v - mean) * (v - mean));
  return {mean, std::sqrt(ss.value() / (n - 1.0) / n)};
}

double binomial_se(double p, std::int64_t n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace subpois::stats
