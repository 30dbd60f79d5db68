#include <doctest.h>

#include <cmath>
#include <numbers>

#include "twinwell/quadrature.hpp"

using namespace twinwell;

TEST_CASE("Gauss-Legendre integrates polynomials up to degree 2n-1 exactly") {
  for (int n : {1, 2, 5, 16, 64}) {
    const QuadratureRule q = gauss_legendre(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += q.weights[i] * std::pow(q.nodes[i], k);
      const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
    }
  }
}

TEST_CASE("Gauss-Legendre nodes are mirrored and weights positive") {
  for (int n : {7, 8, 128}) {
    const QuadratureRule q = gauss_legendre(n);
    double wsum = 0.0;
    for (int i = 0; i < n; ++i) {
      CHECK(q.nodes[i] == -q.nodes[n - 1 - i]);
      CHECK(q.weights[i] == q.weights[n - 1 - i]);
      CHECK(q.weights[i] > 0.0);
      if (i > 0) CHECK(q.nodes[i] > q.nodes[i - 1]);
      wsum += q.weights[i];
    }
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("mapped rule integrates sin on [0, pi]") {
  const QuadratureRule q = gauss_legendre(20, 0.0, std::numbers::pi);
  double s = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * std::sin(q.nodes[i]);
  CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
}
