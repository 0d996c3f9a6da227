#pragma once

#include <utility>
#include <vector>

#include "subpois/model.hpp"
#include "subpois/special.hpp"

namespace subpois {

/// Smallest N with P{Z(t) >= N} <= tol for the iterated Poisson process,
/// from the Chernoff bound on its moment generating function.
long long iterated_tail_cutoff(const ModelParams& params, double t, double tol);

/// The iterated Poisson process Z(t) = M[N(t)].
///
/// Its pmf p_n(t) is also the mixing law of every subordinated compound
/// Poisson process, so the continuous-jump evaluators reuse it.
class IteratedLaw {
 public:
  explicit IteratedLaw(ModelParams params, SeriesControl ctl = {});

  const ModelParams& params() const { return params_; }
  const SeriesControl& control() const { return ctl_; }

  double log_pmf(long long n, double t) const;
  double pmf(long long n, double t) const;
  /// p_0(t), ..., p_{N-1}(t) with N from the Chernoff tail cutoff (capped by
  /// max_terms). At least `min_size` entries are returned.
  std::vector<double> pmf_vector(double t, long long min_size = 1) const;

  /// Recurrence form; n >= 1.
  double pmf_recursive(long long n, double t) const;

  /// P_n(t) = sum_{j<=n} p_j(t).
  double cdf(long long n, double t) const;
  /// Stirling double-sum form with the inner power sum starting at k = 1
  /// (cross-check only, n <= kMaxExactDegree).
  double cdf_closed_form(int n, double t) const;

  /// P{Z(s) = k | Z(t) = n}, 0 < s < t.
  double conditional_pmf(int k, double s, double t, int n) const;

  double dispersion_index() const { return 1.0 + params_.mu; }

  /// E{S_n}, mean sojourn time in state n.
  double mean_sojourn(int n) const;

 private:
  ModelParams params_;
  SeriesControl ctl_;
};

/// Returns (Psi(theta) at lambda = xi/mu, xi (1 - e^{-theta})).
std::pair<double, double> levy_exponent_limit_check(double theta, double xi, double mu);

}  // namespace subpois
