#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "twinwell/closed_forms.hpp"
#include "twinwell/field.hpp"

using namespace twinwell;
constexpr double kPi = std::numbers::pi;

namespace {

double sq(double v) { return v * v; }

}  // namespace

TEST_CASE("field point geometry") {
  const ModelParams p = make_params_dimensionless(1.0, 0.005, 1.0, 3.0, 0.0);
  const FieldPoint fp = FieldPoint::from_xz(600.0, 800.0, p);
  CHECK(fp.r == doctest::Approx(1000.0));
  CHECK(fp.r_plus == doctest::Approx(std::hypot(600.0, 800.0 + p.b / 2)));
  CHECK(fp.r_minus == doctest::Approx(std::hypot(600.0, 800.0 - p.b / 2)));
  CHECK(std::tan(fp.alpha_plus) == doctest::Approx(600.0 / (800.0 + p.b / 2)));
  CHECK(std::abs(fp.delta_r) <= p.b);
  CHECK_THROWS_AS(FieldPoint::from_xz(10.0, 10.0, p), ValidationError);
  const FieldPoint pol = FieldPoint::polar(1000.0, 0.6, p);
  CHECK(pol.alpha == doctest::Approx(0.6));
  CHECK(pol.r == doctest::Approx(1000.0));
}

TEST_CASE("retardation is enforced") {
  const ModelParams p = make_params_dimensionless(1.0, 0.005, 1.0, 3.0, 0.0);
  const FieldPoint fp = FieldPoint::polar(1000.0, 0.6, p);
  CHECK_THROWS_AS(g1_total(fp, 1000.0, p, InitialExternalState::plus()), ValidationError);
  CHECK_NOTHROW(g1_total(fp, 1010.0, p, InitialExternalState::plus()));
}

TEST_CASE("decomposition and agreement of the analytic paths") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ua(0.01, kPi - 0.01), ub(0.0, 4.0), ue(0.0, kPi), uc(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const ModelParams p = make_params_dimensionless(1.0, 0.005, 1.0, ub(rng), ue(rng));
    const InitialExternalState init = InitialExternalState::normalized(uc(rng), uc(rng));
    const FieldPoint fp = FieldPoint::polar(2000.0, ua(rng), p);
    const double t = fp.r + p.b + 50.0;
    const G1Result a = g1_total(fp, t, p, init);
    const G1Result b = g1_from_components(fp, t, p, init);
    CHECK(a.total == doctest::Approx(a.post_plus + a.post_minus).epsilon(1e-15));
    CHECK(a.post_plus >= 0.0);
    CHECK(a.post_minus >= 0.0);
    // the summary form drops O(delta) spectral factors and the O(Gamma b) well asymmetry
    const double scale = g1_prefactor(fp, t, p) * 4.0 * (p.delta_small + p.gamma_rate * p.b);
    CHECK(std::abs(a.post_plus - b.post_plus) < scale);
    CHECK(std::abs(a.post_minus - b.post_minus) < scale);
    const FieldComponents fc = i_components(fp, t, p, init);
    CHECK(fc.plus.I_y == std::complex<double>(0.0, 0.0));
  }
}

TEST_CASE("b -> 0 recovers the dipole pattern") {
  const ModelParams p0 = make_params_dimensionless(1.0, 0.005, 1.0, 0.0, 0.4);
  for (double al = 0.05; al < kPi; al += 0.2) {
    const FieldPoint fp = FieldPoint::polar(1000.0, al, p0);
    const double t = 1000.0 + 30.0;
    const G1Result g = g1_total(fp, t, p0, InitialExternalState::right_well());
    CHECK(g.total == doctest::Approx(dipole_envelope(fp, t, p0)).epsilon(1e-12));
  }
}

TEST_CASE("on-axis x-component carries sin(eta) and z-component vanishes") {
  const ModelParams p = make_params_dimensionless(1.0, 0.005, 1.0, 0.0, 0.7);
  const FieldPoint fp = FieldPoint::from_xz(0.0, 1000.0, p);
  const FieldComponents fc = i_components(fp, 1030.0, p, InitialExternalState::plus());
  CHECK(std::abs(fc.plus.I_cz + fc.plus.I_sz) < 1e-15 * std::abs(fc.plus.I_cx));
  CHECK(std::abs(fc.plus.I_cx) > 0.0);
}

TEST_CASE("components fall off as 1/r") {
  const ModelParams p = make_params_dimensionless(1.0, 0.005, 1.0, 2.0, 0.3);
  const FieldPoint a = FieldPoint::polar(1000.0, 1.0, p), b = FieldPoint::polar(2000.0, 1.0, p);
  const FieldComponents fa = i_components(a, 1000.0 + 40.0, p, InitialExternalState::plus());
  const FieldComponents fb = i_components(b, 2000.0 + 40.0, p, InitialExternalState::plus());
  CHECK(std::abs(fa.plus.I_cx) / std::abs(fb.plus.I_cx) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("rotation maps the x component rule onto the z rule") {
  using detail::component_sum;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double eta = u(rng), ap = u(rng), am = u(rng);
    const std::complex<double> wp(u(rng), u(rng)), wm(u(rng), u(rng));
    for (int s : {1, -1}) {
      const auto x = component_sum(eta + kPi / 2, ap + kPi / 2, am + kPi / 2, wp, wm, s, false);
      const auto z = component_sum(eta, ap, am, wp, wm, s, true);
      CHECK(std::abs(x + z) < 1e-12);
    }
  }
}

TEST_CASE("post-selected patterns") {
  const ModelParams p = make_params_dimensionless(1.0, 0.005, 1.0, 3.0, 0.0);
  const InitialExternalState pl = InitialExternalState::plus();
  for (double al = 0.05; al < kPi; al += 0.1) {
    const FieldPoint fp = FieldPoint::polar(1000.0, al, p);
    const double t = 1050.0;
    const double env = dipole_envelope(fp, t, p);
    const G1Result g = g1_postselected_pattern(fp, t, p, pl);
    CHECK(g.post_plus / env == doctest::Approx(sq(std::cos(1.5 * std::cos(al)))).epsilon(1e-12));
    CHECK(g.post_minus / env == doctest::Approx(sq(std::sin(1.5 * std::cos(al)))).epsilon(1e-12).scale(1.0));
    const G1Result r = g1_postselected_pattern(fp, t, p, InitialExternalState::right_well());
    CHECK(r.total / env == doctest::Approx(1.0).epsilon(1e-12));
  }
  const FieldPoint eq = FieldPoint::polar(1000.0, kPi / 2, p);
  CHECK(g1_postselected(eq, 1050.0, p, pl, 1) / dipole_envelope(eq, 1050.0, p) == doctest::Approx(1.0));
  CHECK_THROWS_AS(g1_postselected(eq, 1050.0, p, pl, 0), ValidationError);
}

TEST_CASE("post-selected pattern is the Delta -> 0 limit of the branch term") {
  const ModelParams p = make_params_dimensionless(1.0, 1e-6, 1.0, 2.5, 0.3);
  const InitialExternalState init = InitialExternalState::normalized(0.6, 0.8);
  for (double al : {0.3, 1.1, 2.0}) {
    const FieldPoint fp = FieldPoint::polar(1e6, al, p);
    const double t = 1e6 + 10.0;
    const G1Result a = g1_total(fp, t, p, init);
    const G1Result b = g1_postselected_pattern(fp, t, p, init);
    CHECK(a.post_plus == doctest::Approx(b.post_plus).epsilon(1e-4));
    CHECK(a.post_minus == doctest::Approx(b.post_minus).epsilon(1e-4));
  }
}

TEST_CASE("fringe factors vanish with Delta b") {
  ModelParams p = make_params_dimensionless(1.0, 0.005, 1.0, 3.0, 0.0);
  for (double al : {0.2, 1.0, 2.5}) {
    CHECK(delocalized_fringe_factor(al, p, 1) - 1.0 != 0.0);
    ModelParams q = p;
    q.delta_tunnel = 0.0;
    CHECK(delocalized_fringe_factor(al, q, 1) == 1.0);
    CHECK(right_well_fringe_factor(al, 10.0, q) == 1.0);
  }
}

TEST_CASE("visibility") {
  std::vector<double> env(50, 2.0), flat(50, 3.0), fr(50);
  for (int i = 0; i < 50; ++i) fr[i] = 2.0 * sq(std::cos(0.2 * i));
  CHECK(visibility(flat, env) == 0.0);
  CHECK(visibility(fr, env) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK_THROWS_AS(visibility(flat, std::vector<double>(50, 0.0)), ValidationError);
  CHECK_THROWS_AS(visibility(flat, std::vector<double>(5, 1.0)), ValidationError);
  const double v = visibility_refined([](double a) { return sq(std::cos(2.0 * std::cos(a))); }, 0.0, kPi, 41);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("G1 decays as exp(-Gamma (t - r)) in time") {
  const ModelParams p = make_params_dimensionless(1.0, 0.005, 1.0, 2.0, 0.0);
  const FieldPoint fp = FieldPoint::polar(1000.0, 0.9, p);
  const InitialExternalState pl = InitialExternalState::plus();
  const double t0 = 1010.0, t1 = t0 + 2.0 / p.gamma_rate;
  // energy eigenstate: no beat, pure exponential
  const double ratio = g1_total(fp, t1, p, pl).total / g1_total(fp, t0, p, pl).total;
  CHECK(-std::log(ratio) / (t1 - t0) == doctest::Approx(p.gamma_rate).epsilon(1e-10));
}

TEST_CASE("quadrature oracle: single dipole at b = 0") {
  const ModelParams p = make_params_dimensionless(1.0, 0.02, 1.0, 0.0, 0.3);
  // Gamma r >= 10 keeps the incoming-wave part of the full-line frequency integral negligible
  const double r = 500.0;
  const double t = r + 1.0 / p.gamma_rate;
  std::vector<FieldPoint> pts;
  for (double al : {0.4, 1.2, 2.3}) pts.push_back(FieldPoint::polar(r, al, p));
  const auto res = g1_quadrature_oracle_scan(pts, t, p, InitialExternalState::plus());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(res[i].g1.total == doctest::Approx(dipole_envelope(pts[i], t, p)).epsilon(0.01));
    CHECK(res[i].tail_fraction < 0.01);
  }
}

TEST_CASE("quadrature oracle: doubling the orders changes the result by < 0.2%") {
  const ModelParams p = make_params_dimensionless(1.0, 0.02, 1.0, 3.0, 0.0);
  const double r = 500.0;
  const double t = r + p.b / 2 + 1.0 / p.gamma_rate;
  const FieldPoint fp = FieldPoint::polar(r, 1.0, p);
  const InitialExternalState rw = InitialExternalState::right_well();
  const OracleResult a = g1_quadrature_oracle(fp, t, p, rw);
  OracleOptions o;
  o.n_theta = 2 * a.n_theta;
  o.n_phi = 2 * a.n_phi;
  o.n_omega = 8192;
  o.tau_step = 0.025;
  const OracleResult b = g1_quadrature_oracle(fp, t, p, rw, o);
  CHECK(b.g1.total == doctest::Approx(a.g1.total).epsilon(2e-3));
  CHECK(a.error_estimate < 2e-3);
}

TEST_CASE("right-well fringes are invisible at tiny Delta b") {
  // Delta b / c = 1e-8
  const ModelParams p = make_params_dimensionless(1.0, 1e-8 / 3.0, 1.0, 3.0, 0.0);
  const double r = 1e9, t = r + p.b + 10.0;
  std::vector<double> g, env;
  for (int k = 1; k < 180; ++k) {
    const FieldPoint fp = FieldPoint::polar(r, kPi * k / 180.0, p);
    g.push_back(g1_total(fp, t, p, InitialExternalState::right_well()).total);
    env.push_back(dipole_envelope(fp, t, p));
  }
  CHECK(visibility(g, env) < 1e-7);
}
