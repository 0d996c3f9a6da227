#pragma once

namespace subpois {

/// Intensities of the subordinator N(t) (lambda) and the inner Poisson
/// process M(t) (mu), events per unit time.
struct ModelParams {
  double lambda = 1.0;
  double mu = 1.0;

  void validate() const;
  /// Rate lambda (1 - e^{-mu}) at which Z leaves any state.
  double leave_rate() const;
};

enum class JumpKind { degenerate_unit, exponential, normal };

/// Law of a single jump X_i of the inner compound Poisson process.
struct JumpSpec {
  JumpKind kind = JumpKind::degenerate_unit;
  double zeta = 1.0;   // exponential rate
  double eta = 0.0;    // normal mean
  double sigma = 1.0;  // normal standard deviation

  static JumpSpec unit() { return {}; }
  static JumpSpec exponential(double zeta) { return {JumpKind::exponential, zeta, 0.0, 1.0}; }
  static JumpSpec normal(double eta, double sigma) {
    return {JumpKind::normal, 1.0, eta, sigma};
  }

  void validate() const;
  bool absolutely_continuous() const { return kind != JumpKind::degenerate_unit; }
  double mean() const;
  double variance() const;
};

}  // namespace subpois
