#pragma once

#include <functional>
#include <vector>

#include "subpois/iterated.hpp"

namespace subpois {

enum class BoundaryKind { constant, linear_decreasing, linear_increasing, general_nonincreasing };

/// Crossing boundary beta_k(t) with beta_k(0) = k >= 1.
struct Boundary {
  BoundaryKind kind = BoundaryKind::constant;
  int k = 1;
  std::function<double(double)> fn;  // general_nonincreasing only

  static Boundary constant(int k);
  static Boundary linear_decreasing(int k);
  static Boundary linear_increasing(int k);
  /// `fn` must be nonincreasing with fn(0) == k; not checked beyond t = 0.
  static Boundary general(int k, std::function<double(double)> fn);

  double at(double t) const;
  bool nonincreasing() const { return kind != BoundaryKind::linear_increasing; }
};

/// Largest integer strictly smaller than x.
long long floor_minus(double x);

double survival_nonincreasing(const Boundary& boundary, double t, const IteratedLaw& law);

double crossing_density_constant(int k, double t, const IteratedLaw& law);
/// Stirling-coefficient form (index-corrected), for cross-checking.
double crossing_density_constant_stirling(int k, double t, const IteratedLaw& law);
double mean_crossing_time_constant(int k, const IteratedLaw& law);

double hitting_density(int k, double t, const IteratedLaw& law);
/// Accepts t = +inf.
double hitting_cdf(int k, double t, const IteratedLaw& law);
double hitting_probability(int k, double mu);

/// g(j; n) = P{Z(n) = j, T > n} for the boundary k + t, n = 0..horizon.
class AvoidingTable {
 public:
  AvoidingTable(int k, int horizon, std::vector<std::vector<double>> rows)
      : k_(k), horizon_(horizon), rows_(std::move(rows)) {}

  int k() const { return k_; }
  int horizon() const { return horizon_; }
  /// Row n holds j = 0..k+n-1 (row 0 holds only j = 0).
  const std::vector<double>& row(int n) const { return rows_.at(n); }
  double g(int n, int j) const;
  double row_sum(int n) const;

 private:
  int k_;
  int horizon_;
  std::vector<std::vector<double>> rows_;
};

AvoidingTable avoiding_table(int k, int horizon, const IteratedLaw& law);

double survival_linear_increasing(int k, double t, const IteratedLaw& law);
/// Reuses `table`; requires table.horizon() >= floor(t).
double survival_linear_increasing(const AvoidingTable& table, double t, const IteratedLaw& law);

}  // namespace subpois
