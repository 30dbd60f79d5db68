#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "twinwell/fitting.hpp"

using namespace twinwell;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

}  // namespace

TEST_CASE("exponential self-fit") {
  const auto t = linspace(0.0, 200.0, 400);
  std::vector<double> y;
  for (double x : t) y.push_back(0.8 * std::exp(-0.021 * x));
  const FitResult r = fit_decay_and_amplitude(t, y, FitModel::Exponential);
  CHECK(r.rate == doctest::Approx(0.021).epsilon(1e-9));
  CHECK(r.amplitude == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(r.residual_rms < 1e-10);
}

TEST_CASE("exponential fit tolerates noise") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 1e-3);
  const auto t = linspace(0.0, 100.0, 500);
  std::vector<double> y;
  for (double x : t) y.push_back(std::exp(-0.05 * x) + n(rng));
  const FitResult r = fit_decay_and_amplitude(t, y, FitModel::Exponential);
  CHECK(r.rate == doctest::Approx(0.05).epsilon(5e-3));
}

TEST_CASE("sinusoid self-fit with estimated and fixed frequency") {
  const auto t = linspace(0.0, 3000.0, 1500);
  std::vector<double> y;
  for (double x : t) y.push_back(0.7 * std::cos(0.005 * x + 0.4));
  const FitResult est = fit_decay_and_amplitude(t, y, FitModel::Sinusoid);
  CHECK(est.frequency == doctest::Approx(0.005).epsilon(1e-6));
  CHECK(est.amplitude == doctest::Approx(0.7).epsilon(1e-6));
  CHECK(est.phase == doctest::Approx(0.4).epsilon(1e-6));
  FitOptions o;
  o.frequency = 0.005;
  const FitResult fx = fit_decay_and_amplitude(t, y, FitModel::Sinusoid, o);
  CHECK(fx.amplitude == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(fx.phase == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("damped-plus-sinusoid separates the persistent amplitude") {
  const double w = 0.005, k = 0.01;
  const auto t = linspace(0.0, 1000.0, 800);
  std::vector<double> y;
  for (double x : t) {
    y.push_back(0.6 * std::cos(w * x - 0.3) + std::exp(-k * x) * (0.4 * std::cos(w * x) + 0.1 * std::sin(w * x)));
  }
  FitOptions o;
  o.frequency = w;
  const FitResult r = fit_decay_and_amplitude(t, y, FitModel::DampedSinusoidPlusSinusoid, o);
  CHECK(r.amplitude == doctest::Approx(0.6).epsilon(1e-7));
  CHECK(r.phase == doctest::Approx(-0.3).epsilon(1e-7));
  CHECK(r.rate == doctest::Approx(k).epsilon(1e-6));
  CHECK(r.damped_amplitude == doctest::Approx(std::hypot(0.4, 0.1)).epsilon(1e-6));
}

TEST_CASE("fit errors") {
  const auto t = linspace(0.0, 10.0, 20);
  std::vector<double> neg(20, -1.0);
  CHECK_THROWS_AS(fit_decay_and_amplitude(t, neg, FitModel::Exponential), FitError);
  std::vector<double> shortv(5, 1.0), shortt(5, 1.0);
  CHECK_THROWS_AS(fit_decay_and_amplitude(shortt, shortv, FitModel::Exponential), ValidationError);
  std::vector<double> growing;
  for (double x : t) growing.push_back(std::exp(0.3 * x));
  CHECK_THROWS(fit_decay_and_amplitude(t, growing, FitModel::Exponential));
  std::vector<double> noisy;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) noisy.push_back(u(rng));
  FitOptions o;
  o.frequency = 0.3;
  try {
    fit_decay_and_amplitude(t, noisy, FitModel::Sinusoid, o);
    FAIL("expected FitError");
  } catch (const FitError& e) {
    CHECK(e.residual_rms() > 0.0);
  }
}
