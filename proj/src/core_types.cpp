#include "twinwell/core_types.hpp"

#include <cmath>
#include <sstream>

namespace twinwell {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw ValidationError(std::string(name) + " must be finite");
  }
}

}  // namespace

ModelParams make_params(double omega0, double delta_tunnel, double gamma_rate,
                        double beta, double eta) {
  require_finite(omega0, "omega0");
  require_finite(delta_tunnel, "delta_tunnel");
  require_finite(gamma_rate, "gamma_rate");
  require_finite(beta, "beta");
  require_finite(eta, "eta");
  if (omega0 <= 0.0 || delta_tunnel <= 0.0 || gamma_rate <= 0.0) {
    throw ValidationError("omega0, delta_tunnel and gamma_rate must be positive");
  }
  if (!(omega0 > delta_tunnel)) {
    throw ValidationError("omega0 must exceed delta_tunnel");
  }
  const double ds = delta_tunnel / omega0;
  if (ds >= kMaxDeltaSmall) {
    std::ostringstream msg;
    msg << "delta = Delta/omega0 = " << ds << " out of regime (must be < "
        << kMaxDeltaSmall << ")";
    throw ValidationError(msg.str());
  }
  if (beta < 0.0 || beta > kMaxBeta) {
    throw ValidationError("beta must lie in [0, 4]");
  }

  ModelParams p;
  p.omega0 = omega0;
  p.delta_tunnel = delta_tunnel;
  p.gamma_rate = gamma_rate;
  p.beta = beta;
  p.b = beta / omega0;
  p.eta = eta;
  p.delta_small = ds;
  p.gamma_ratio = gamma_rate / delta_tunnel;
  if (beta > kWarnBeta) {
    p.warnings.push_back("beta > 3: two-level reduction of the external motion is marginal");
  }
  return p;
}

ModelParams make_params_dimensionless(double omega0, double delta_small,
                                      double gamma_ratio, double beta,
                                      double eta) {
  require_finite(delta_small, "delta");
  require_finite(gamma_ratio, "gamma");
  const double delta_tunnel = delta_small * omega0;
  return make_params(omega0, delta_tunnel, gamma_ratio * delta_tunnel, beta, eta);
}

InitialExternalState InitialExternalState::normalized(double c_plus, double c_minus) {
  require_finite(c_plus, "c_plus");
  require_finite(c_minus, "c_minus");
  const double n = std::hypot(c_plus, c_minus);
  if (n == 0.0) throw ValidationError("initial external state must be nonzero");
  return {c_plus / n, c_minus / n};
}

InitialExternalState InitialExternalState::right_well() {
  return {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
}

InitialExternalState InitialExternalState::left_well() {
  return {1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)};
}

}  // namespace twinwell
