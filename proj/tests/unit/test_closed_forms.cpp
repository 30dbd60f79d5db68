#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "twinwell/closed_forms.hpp"
#include "twinwell/quadrature.hpp"

using namespace twinwell;
using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

namespace {

cd d_by_quadrature(double eta, double beta) {
  const QuadratureRule q = gauss_legendre(64, 0.0, 1.0);
  cd s = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    const double mu = q.nodes[i];
    s += q.weights[i] * h_angular(eta, mu) * std::exp(cd(0.0, beta * mu));
  }
  return 0.75 * s;
}

double a_by_quadrature(double eta, double beta) {
  const QuadratureRule q = gauss_legendre(64, 0.0, 1.0);
  double s = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    const double mu = q.nodes[i];
    s += q.weights[i] * h_angular(eta, mu) * (1.0 + std::cos(beta * mu));
  }
  return s;
}

}  // namespace

TEST_CASE("h_angular matches the polarization sum") {
  const double eta = 0.3, mu = 0.4;
  const double s = std::sin(eta), c = std::cos(eta);
  CHECK(h_angular(eta, mu) == doctest::Approx(s * s + 2 * c * c + (s * s - 2 * c * c) * mu * mu));
}

TEST_CASE("angular factors agree with direct quadrature") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ue(0.0, kPi), ub(0.0, 4.0);
  for (int i = 0; i < 300; ++i) {
    const double eta = ue(rng), beta = ub(rng);
    const cd dq = d_by_quadrature(eta, beta);
    const cd dc = d_complex(eta, beta);
    CHECK(std::abs(dc - dq) < 1e-10);
    CHECK(std::abs(re_d(eta, beta) - dq.real()) < 1e-10);
    CHECK(std::abs(a_coeff(eta, beta) - a_by_quadrature(eta, beta)) < 1e-10);
    CHECK(std::abs(a_coeff(eta, beta) - (4.0 / 3.0 + 4.0 / 3.0 * re_d(eta, beta))) < 1e-12);
  }
}

TEST_CASE("angular factors are continuous across the small-beta series switch") {
  for (double eta : {0.0, 0.7, kPi / 2}) {
    for (double b0 : {0.5, 1e-4}) {
      const double lo = re_d(eta, b0 * (1 - 1e-12)), hi = re_d(eta, b0 * (1 + 1e-12));
      CHECK(std::abs(lo - hi) < 1e-12);  // the 2e-12 step in beta alone moves Re d by ~5e-13
      const cd dl = d_complex(eta, b0 * (1 - 1e-12)), dh = d_complex(eta, b0 * (1 + 1e-12));
      CHECK(std::abs(dl - dh) < 1e-12);
    }
  }
}

TEST_CASE("beta = 0 limits") {
  for (double eta : {0.0, 0.4, 1.2, kPi / 2}) {
    CHECK(re_d(eta, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(d_complex(eta, 0.0) - cd(1.0, 0.0)) < 1e-15);
    CHECK(a_coeff(eta, 0.0) == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
  }
}

TEST_CASE("negative beta is rejected") {
  CHECK_THROWS_AS(re_d(0.0, -0.1), ValidationError);
}

TEST_CASE("gamma_pm_ratio reduces to the vacuum rate") {
  for (double eta = 0.0; eta < kPi; eta += 0.37)
    for (double beta = 0.0; beta <= 4.0; beta += 0.5) {
      for (int s : {1, -1}) {
        const ComplexRate g = gamma_pm_ratio(eta, beta, 0.0, s);
        CHECK(std::abs(g.re - 1.0) < 1e-15);
        CHECK(std::abs(g.im) < 1e-15);
      }
    }
  CHECK_THROWS_AS(gamma_pm_ratio(0.0, 1.0, 0.2, 1), ValidationError);
  CHECK_THROWS_AS(gamma_pm_ratio(0.0, 1.0, 0.1, 0), ValidationError);
}

TEST_CASE("gamma_pm_ratio sums to two at small delta") {
  // Gamma_+ + Gamma_- = 2 Gamma up to O(delta)
  const double d = 1e-6;
  const ComplexRate p = gamma_pm_ratio(0.3, 2.0, d, 1), m = gamma_pm_ratio(0.3, 2.0, d, -1);
  CHECK(std::abs(p.re + m.re - 2.0) < 1e-5);
}

TEST_CASE("Wigner-Weisskopf rate round trip in SI") {
  const double w0 = 2 * kPi * 351.7e12;
  const double d = 2.0e-29;
  const double g = gamma_ww(w0, d);
  CHECK(g == doctest::Approx(w0 * w0 * w0 * d * d / (3 * kPi * si::eps0 * si::hbar * std::pow(si::c, 3))));
  CHECK(dipole_from_gamma(w0, g) == doctest::Approx(d).epsilon(1e-14));
  const double ds = dipole_scaled(1.0, 0.02);
  CHECK(ds * ds / (3 * kPi) == doctest::Approx(0.02).epsilon(1e-14));
}

TEST_CASE("z_analytic starts at b c+ c- and approaches the long-time form") {
  ModelParams p = make_params_dimensionless(1.0, 0.005, 1.0, 0.0, 0.0);
  p.b = 2.0;  // z in units of b/2
  const InitialExternalState r = InitialExternalState::right_well();
  CHECK(z_analytic(0.0, p, r) == doctest::Approx(p.b * r.c_plus * r.c_minus).epsilon(1e-15));
  // beta = 0: a = 8/3 and the atom keeps tunneling undamped
  for (double t : {10.0, 500.0, 3000.0}) {
    CHECK(z_analytic(t, p, r) == doctest::Approx(0.5 * p.b * std::cos(p.delta_tunnel * t)).epsilon(1e-12));
  }
  // a = 4/3 regime: compare against z_longtime for t >> 1/Gamma
  const ModelParams q = make_params_dimensionless(1.0, 0.005, 2.0, 4.0, 0.0);
  const double t = 40.0 / q.gamma_rate;
  const double a = a_coeff(0.0, 4.0);
  const LongTimeCoefficients lc = longtime_coefficients(a, 2.0);
  const double ph = q.delta_tunnel * t;
  CHECK(z_analytic(t, q, r) / (0.5 * q.b) ==
        doctest::Approx(2 * r.c_plus * r.c_minus * (lc.cos_coeff * std::cos(ph) + lc.sin_coeff * std::sin(ph)))
            .epsilon(1e-12));
  CHECK(std::abs(z_longtime(t, q) - z_analytic(t, q, r)) < 0.2 * q.b);
}

TEST_CASE("z_analytic vanishes for energy eigenstates") {
  const ModelParams p = make_params_dimensionless(1.0, 0.005, 1.0, 3.0, 0.0);
  for (double t : {0.0, 100.0, 900.0}) {
    CHECK(z_analytic(t, p, InitialExternalState::plus()) == 0.0);
    CHECK(z_analytic(t, p, InitialExternalState::minus()) == 0.0);
  }
  CHECK_THROWS_AS(z_analytic(-1.0, p, InitialExternalState::plus()), ValidationError);
}

TEST_CASE("long-time amplitude limits and bounds") {
  for (double g : {0.0, 0.3, 1.0, 10.0}) CHECK(amp_A(0.0, 0.0, g).amplitude_A == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(amp_A_from_a(4.0 / 3.0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(amp_A_from_a(4.0 / 3.0, 1e12) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(amp_A_from_a(4.0 / 3.0, INFINITY) == 1.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ue(0.0, kPi), ub(0.0, 4.0), ug(-6.0, 6.0);
  for (int i = 0; i < 500; ++i) {
    const double eta = ue(rng), beta = ub(rng), g = std::exp(ug(rng));
    const TunnelingTrajectoryParams tp = amp_A(eta, beta, g);
    CHECK(tp.amplitude_A <= 1.0 + 1e-12);
    CHECK(tp.amplitude_A >= std::min(0.375 * tp.a_coeff, 1.0) - 1e-12);
    if (tp.a_coeff >= 4.0 / 3.0) CHECK(tp.amplitude_A >= 0.5 - 1e-12);
    // A cos(phi), -A sin(phi) are the long-time coefficients
    const LongTimeCoefficients lc = longtime_coefficients(tp.a_coeff, g);
    CHECK(tp.amplitude_A * std::cos(tp.phase_phi) == doctest::Approx(lc.cos_coeff).epsilon(1e-12));
    CHECK(-tp.amplitude_A * std::sin(tp.phase_phi) == doctest::Approx(lc.sin_coeff).epsilon(1e-12).scale(1.0));
  }
  CHECK_THROWS_AS(amp_A_from_a(1.0, -1.0), ValidationError);
}
