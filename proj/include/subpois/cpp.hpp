#pragma once

#include <vector>

#include "subpois/iterated.hpp"
#include "subpois/model.hpp"
#include "subpois/special.hpp"

namespace subpois {

struct MomentSummary {
  double mean = 0.0;
  double variance = 0.0;
  double dispersion_index = 0.0;  // NaN when mean == 0
  double xi = 0.0;                // jump mean
  double sigma2 = 0.0;            // jump variance
};

/// F_X^{(n)}(z), n-fold convolution of the jump CDF (closed forms only).
double jump_convolution_cdf(const JumpSpec& jumps, long long n, double z);
/// f_X^{(n)}(z) for absolutely continuous jumps, n >= 1.
double jump_convolution_pdf(const JumpSpec& jumps, long long n, double z);

/// Law of Z(t) = Y[N(t)] at a fixed time, with mixture weights p_n(t)
/// computed once. Cheap to evaluate on a grid.
class SubordinatedLaw {
 public:
  SubordinatedLaw(ModelParams params, JumpSpec jumps, double t, SeriesControl ctl = {});

  double t() const { return t_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Right-continuous CDF H_Z(z; t).
  double cdf(double z) const;
  /// Left limit H_Z(z-; t).
  double cdf_left(double z) const;
  /// Density of the absolutely continuous part, z != 0.
  double density(double z) const;
  /// P{Z(t) = 0} contributed by N-mixture index 0, i.e. e^{-lambda t (1-e^{-mu})}.
  double atom() const { return weights_.front(); }

 private:
  ModelParams params_;
  JumpSpec jumps_;
  double t_;
  std::vector<double> weights_;
};

double cpp_cdf_Y(double y, double t, const ModelParams& params, const JumpSpec& jumps,
                 const SeriesControl& ctl = {});
double cpp_cdf_Z(double z, double t, const ModelParams& params, const JumpSpec& jumps,
                 const SeriesControl& ctl = {});
double cpp_density_Z(double z, double t, const ModelParams& params, const JumpSpec& jumps,
                     const SeriesControl& ctl = {});
/// Mass of the atom at 0 contributed by N(t) = 0: e^{-lambda t (1-e^{-mu})}.
double atom_mass_Z(double t, const ModelParams& params);

// Exponential jumps.
double exp_jump_cdf(double z, double t, const ModelParams& params, double zeta,
                    const SeriesControl& ctl = {});
double exp_jump_cdf_alternative(double z, double t, const ModelParams& params, double zeta,
                                const SeriesControl& ctl = {});
double exp_jump_density(double z, double t, const ModelParams& params, double zeta,
                        const SeriesControl& ctl = {});

// Normal jumps.
double normal_jump_cdf(double z, double t, const ModelParams& params, double eta,
                       double sigma, const SeriesControl& ctl = {});
double normal_jump_density(double z, double t, const ModelParams& params, double eta,
                           double sigma, const SeriesControl& ctl = {});

/// Psi(theta) with E{e^{-theta Z(t)}} = e^{-t Psi(theta)}.
double laplace_exponent(double theta, const ModelParams& params, const JumpSpec& jumps);

MomentSummary moments_Z(double t, const ModelParams& params, const JumpSpec& jumps);

/// Integral of the density of Z(t) over z != 0, by adaptive quadrature.
double continuous_mass(double t, const ModelParams& params, const JumpSpec& jumps,
                       const SeriesControl& ctl = {});

}  // namespace subpois
