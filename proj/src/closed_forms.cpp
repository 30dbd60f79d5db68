#include "twinwell/closed_forms.hpp"

#include <cmath>
#include <numbers>

namespace twinwell {

namespace {

using cd = std::complex<double>;
constexpr double kSeriesBeta = 0.5;
constexpr int kSeriesTerms = 24;

void require_beta(double beta) {
  if (!std::isfinite(beta) || beta < 0.0) {
    throw ValidationError("beta must be finite and non-negative");
  }
}

double coef_a(double eta) {
  const double s = std::sin(eta), c = std::cos(eta);
  return s * s + 2.0 * c * c;
}

double coef_b(double eta) {
  const double s = std::sin(eta), c = std::cos(eta);
  return s * s - 2.0 * c * c;
}

// int_0^1 mu^m cos(beta mu) dmu, even power series.
double cos_moment_series(int m, double beta) {
  double term = 1.0;  // (-1)^n beta^{2n} / (2n)!
  double sum = 0.0;
  for (int n = 0; n < kSeriesTerms; ++n) {
    sum += term / (2 * n + m + 1);
    term *= -beta * beta / ((2.0 * n + 1.0) * (2.0 * n + 2.0));
  }
  return sum;
}

// int_0^1 mu^m exp(i beta mu) dmu.
cd exp_moment_series(int m, double beta) {
  cd term = 1.0;  // (i beta)^n / n!
  cd sum = 0.0;
  for (int n = 0; n < 2 * kSeriesTerms; ++n) {
    sum += term / double(n + m + 1);
    term *= cd(0.0, beta) / double(n + 1);
  }
  return sum;
}

double sinc(double beta) {
  return beta < kSeriesBeta ? cos_moment_series(0, beta) : std::sin(beta) / beta;
}

double f2(double beta) {
  if (beta < kSeriesBeta) return cos_moment_series(2, beta);
  const double b3 = beta * beta * beta;
  return (2.0 * beta * std::cos(beta) + (beta * beta - 2.0) * std::sin(beta)) / b3;
}

}  // namespace

double h_angular(double eta, double mu) {
  if (!(std::abs(mu) <= 1.0)) throw ValidationError("h_angular: |mu| must be <= 1");
  const double s = std::sin(eta), c = std::cos(eta);
  return s * s + 2.0 * c * c + mu * mu * (s * s - 2.0 * c * c);
}

double re_d(double eta, double beta) {
  require_beta(beta);
  return 0.75 * (coef_a(eta) * sinc(beta) + coef_b(eta) * f2(beta));
}

std::complex<double> d_complex(double eta, double beta) {
  require_beta(beta);
  const double ca = coef_a(eta), cb = coef_b(eta);
  if (beta < kSeriesBeta) {
    return 0.75 * (ca * exp_moment_series(0, beta) + cb * exp_moment_series(2, beta));
  }
  const cd i(0.0, 1.0);
  const cd e = std::exp(i * beta);
  const cd m0 = (i / beta) * (1.0 - e);
  const cd m2 = (-2.0 * i + e * (2.0 * i + 2.0 * beta - i * beta * beta)) /
                (beta * beta * beta);
  return 0.75 * (ca * m0 + cb * m2);
}

double a_coeff(double eta, double beta) {
  require_beta(beta);
  return coef_a(eta) * (1.0 + sinc(beta)) + coef_b(eta) * (1.0 / 3.0 + f2(beta));
}

double gamma_ww(double omega0, double dipole) {
  if (!(omega0 > 0.0) || !(dipole > 0.0)) throw ValidationError("gamma_ww: inputs must be positive");
  return omega0 * omega0 * omega0 * dipole * dipole /
         (3.0 * std::numbers::pi * si::eps0 * si::hbar * si::c * si::c * si::c);
}

double dipole_from_gamma(double omega0, double gamma) {
  if (!(omega0 > 0.0) || !(gamma > 0.0)) throw ValidationError("dipole_from_gamma: inputs must be positive");
  return std::sqrt(gamma * 3.0 * std::numbers::pi * si::eps0 * si::hbar * si::c * si::c * si::c /
                   (omega0 * omega0 * omega0));
}

double dipole_scaled(double omega0, double gamma) {
  return std::sqrt(3.0 * std::numbers::pi * gamma / (omega0 * omega0 * omega0));
}

ComplexRate gamma_pm_ratio(double eta, double beta, double delta_small, int sign) {
  if (sign != 1 && sign != -1) throw ValidationError("gamma_pm_ratio: sign must be +1 or -1");
  if (!(delta_small >= 0.0 && delta_small < kMaxDeltaSmall)) {
    throw ValidationError("gamma_pm_ratio: delta must lie in [0, 0.2)");
  }
  const double s = 1.0 + sign * delta_small;
  const cd d0 = d_complex(eta, beta);
  const cd d1 = d_complex(eta, beta * s);
  const cd g = 0.5 * (1.0 + d0 + s * s * s * (1.0 - d1));
  return {g.real(), g.imag()};
}

double z_analytic(double t, const ModelParams& p, const InitialExternalState& init) {
  if (t < 0.0) throw ValidationError("z_analytic: t must be >= 0");
  const double a = a_coeff(p.eta, p.beta);
  const double g = p.gamma_ratio;
  const double e = std::exp(-p.gamma_rate * t);
  const double ph = p.delta_tunnel * t;
  const double c = std::cos(ph), s = std::sin(ph);
  const double lor = (g / 2.0) / (1.0 + g * g / 4.0);
  const double braces = a * (1.0 - e) * c +
                        (8.0 / 3.0 - a) * lor * ((1.0 + e) * s + (g / 2.0) * (1.0 - e) * c);
  return p.b * init.c_minus * init.c_plus * (e * c + 0.375 * braces);
}

double z_longtime(double t, const ModelParams& p) {
  const double g = p.gamma_ratio;
  const double u = 1.0 + g * g / 4.0;
  const double ph = p.delta_tunnel * t;
  return 0.5 * p.b *
         ((0.5 + (g * g / 8.0) / u) * std::cos(ph) + ((g / 4.0) / u) * std::sin(ph));
}

LongTimeCoefficients longtime_coefficients(double a, double g) {
  const double u = g * g / 4.0;
  return {0.375 * (a + 8.0 * u / 3.0) / (1.0 + u),
          0.375 * (8.0 / 3.0 - a) * (g / 2.0) / (1.0 + u)};
}

double amp_A_from_a(double a, double g) {
  if (!(g >= 0.0)) throw ValidationError("amp_A: gamma must be >= 0");
  if (std::isinf(g)) return 1.0;
  return 0.25 * std::sqrt((9.0 * a * a + 16.0 * g * g) / (4.0 + g * g));
}

TunnelingTrajectoryParams amp_A(double eta, double beta, double g) {
  const double a = a_coeff(eta, beta);
  TunnelingTrajectoryParams out;
  out.a_coeff = a;
  out.amplitude_A = amp_A_from_a(a, g);
  if (std::isinf(g)) {
    out.phase_phi = 0.0;
  } else {
    // A cos(x + phi) = A cos phi cos x - A sin phi sin x
    const LongTimeCoefficients lc = longtime_coefficients(a, g);
    out.phase_phi = std::atan2(-lc.sin_coeff, lc.cos_coeff);
  }
  return out;
}

}  // namespace twinwell
