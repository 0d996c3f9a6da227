#include "subpois/model.hpp"

#include <cmath>

#include "subpois/errors.hpp"

namespace subpois {

void ModelParams::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be positive");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("mu must be positive");
}

double ModelParams::leave_rate() const { return -lambda * std::expm1(-mu); }

void JumpSpec::validate() const {
  switch (kind) {
    case JumpKind::degenerate_unit:
      return;
    case JumpKind::exponential:
      if (!(zeta > 0.0) || !std::isfinite(zeta)) throw DomainError("zeta must be positive");
      return;
    case JumpKind::normal:
      if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive");
      if (!std::isfinite(eta)) throw DomainError("eta must be finite");
      return;
  }
}

double JumpSpec::mean() const {
  switch (kind) {
    case JumpKind::degenerate_unit: return 1.0;
    case JumpKind::exponential: return 1.0 / zeta;
    case JumpKind::normal: return eta;
  }
  return 0.0;
}

double JumpSpec::variance() const {
  switch (kind) {
    case JumpKind::degenerate_unit: return 0.0;
    case JumpKind::exponential: return 1.0 / (zeta * zeta);
    case JumpKind::normal: return sigma * sigma;
  }
  return 0.0;
}

}  // namespace subpois
