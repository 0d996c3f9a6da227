#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace subpois::stats {

/// sup_x |F_n(x) - F(x)| over right and left limits at every sample point,
/// so distributions with atoms are handled. `samples` need not be sorted.
/// `cdf_left` defaults to `cdf` (continuous law).
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf,
                   const std::function<double(double)>& cdf_left = {});

/// Asymptotic Kolmogorov critical value c(alpha)/sqrt(n): 1.36 at 5%, 1.63 at 1%.
double ks_critical(std::int64_t n, double alpha);

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson goodness of fit over the cells with expected count >= min_expected;
/// remaining probability mass is pooled into one extra cell.
ChiSquare chi_square_gof(std::span<const std::int64_t> observed, std::span<const double> probs,
                         std::int64_t n, double min_expected = 5.0);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

MeanEstimate mean_estimate(std::span<const double> values);

/// Standard error of a binomial proportion with success probability p.
double binomial_se(double p, std::int64_t n);

}  // namespace subpois::stats
