#include "twinwell/special_functions.hpp"

#include <cmath>
#include <numbers>

#include "twinwell/core_types.hpp"

namespace twinwell {

namespace {

using cd = std::complex<double>;
constexpr double kEulerGamma = 0.57721566490153286061;

// -gamma - log z + sum_{n>=1} (-1)^{n+1} z^n / (n n!)
cd e1_series(cd z) {
  cd term = 1.0, sum = 0.0;
  for (int n = 1; n < 200; ++n) {
    term *= -z / double(n);
    const cd add = -term / double(n);
    sum += add;
    if (std::abs(add) < 1e-17 * std::abs(sum)) break;
  }
  return -kEulerGamma - std::log(z) + sum;
}

// e^{z} E1(z) = 1/(z + 1 - 1/(z + 3 - 4/(z + 5 - ...))), modified Lentz.
cd e1_scaled_cf(cd z) {
  const double tiny = 1e-300;
  cd b = z + 1.0;
  cd c = 1.0 / tiny;
  cd d = 1.0 / b;
  cd h = d;
  for (int i = 1; i < 100000; ++i) {
    const double a = -double(i) * double(i);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const cd del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) return h;
  }
  throw RuntimeError("expint_e1: continued fraction did not converge");
}

bool use_series(cd z) { return std::abs(z) < 2.0 || (z.real() < 0.0 && std::abs(z.imag()) < 0.5 * std::abs(z.real()) && std::abs(z) < 30.0); }

}  // namespace

cd expint_e1(cd z) {
  if (z == 0.0) throw ValidationError("expint_e1: z = 0");
  if (use_series(z)) return e1_series(z);
  return std::exp(-z) * e1_scaled_cf(z);
}

cd expint_e1_scaled(cd z) {
  if (z == 0.0) throw ValidationError("expint_e1: z = 0");
  if (use_series(z)) return std::exp(z) * e1_series(z);
  return e1_scaled_cf(z);
}

}  // namespace twinwell
