#pragma once
// Closed-form angular factors, decay rates and tunneling trajectory.

#include <complex>

#include "twinwell/core_types.hpp"

namespace twinwell {

struct ComplexRate {
  double re = 0.0;  // decay part
  double im = 0.0;  // line-shift part
};

struct TunnelingTrajectoryParams {
  double amplitude_A = 0.0;
  double phase_phi = 0.0;  // long-time z/(b/2) = A cos(Delta t + phi)
  double a_coeff = 0.0;
};

namespace si {
constexpr double hbar = 1.054571817e-34;
constexpr double c = 2.99792458e8;
constexpr double eps0 = 8.8541878128e-12;
constexpr double e_charge = 1.602176634e-19;
constexpr double alpha_fs = 7.2973525693e-3;
}  // namespace si

double h_angular(double eta, double mu);

double re_d(double eta, double beta);
std::complex<double> d_complex(double eta, double beta);
double a_coeff(double eta, double beta);

// SI: Gamma = omega0^3 dipole^2 / (3 pi eps0 hbar c^3).
double gamma_ww(double omega0, double dipole);
double dipole_from_gamma(double omega0, double gamma);

// Dipole moment in scaled units (eps0 = hbar = c = 1) giving rate gamma.
double dipole_scaled(double omega0, double gamma);

// Gamma_{+} (sign=+1) or Gamma_{-} (sign=-1) in units of Gamma(omega0).
ComplexRate gamma_pm_ratio(double eta, double beta, double delta_small, int sign);

// <z(t)> in the same length units as params.b.
double z_analytic(double t, const ModelParams& params, const InitialExternalState& init);

// t >> 1/Gamma form with a = 4/3 and c+ c- = 1/2.
double z_longtime(double t, const ModelParams& params);

// Coefficients of cos(Delta t) and sin(Delta t) in lim z/(b c+ c-).
struct LongTimeCoefficients {
  double cos_coeff = 0.0;
  double sin_coeff = 0.0;
};
LongTimeCoefficients longtime_coefficients(double a, double gamma_ratio);

TunnelingTrajectoryParams amp_A(double eta, double beta, double gamma_ratio);
// Amplitude for a given a coefficient (used for the a = 4/3 limits).
double amp_A_from_a(double a, double gamma_ratio);

}  // namespace twinwell
