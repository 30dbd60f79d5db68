#pragma once
// Physical parameters and dimensionless groups shared by all modules.
// Scaled units: c = 1, hbar = 1, eps0 = 1; times in 1/omega0.

#include <stdexcept>
#include <string>
#include <vector>

namespace twinwell {

// Input rejected by a precondition (maps to CLI exit code 1).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical failure at run time (maps to CLI exit code 2).
class RuntimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelParams {
  double omega0 = 1.0;
  double delta_tunnel = 0.0;
  double gamma_rate = 0.0;
  double b = 0.0;
  double eta = 0.0;
  double beta = 0.0;
  double delta_small = 0.0;
  double gamma_ratio = 0.0;
  std::vector<std::string> warnings;

  bool operator==(const ModelParams&) const = default;
};

constexpr double kMaxDeltaSmall = 0.2;
constexpr double kMaxBeta = 4.0;
constexpr double kWarnBeta = 3.0;

ModelParams make_params(double omega0, double delta_tunnel, double gamma_rate,
                        double beta, double eta);

// Same parameters from the dimensionless groups delta = Delta/omega0 and
// gamma = Gamma/Delta.
ModelParams make_params_dimensionless(double omega0, double delta_small,
                                      double gamma_ratio, double beta,
                                      double eta);

struct InitialExternalState {
  double c_plus = 1.0;
  double c_minus = 0.0;

  // Normalizes (c_plus, c_minus); rejects the zero vector.
  static InitialExternalState normalized(double c_plus, double c_minus);
  static InitialExternalState right_well();
  static InitialExternalState left_well();
  static InitialExternalState plus() { return {1.0, 0.0}; }
  static InitialExternalState minus() { return {0.0, 1.0}; }
};

}  // namespace twinwell
