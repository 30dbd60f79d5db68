#pragma once

#include <vector>

namespace twinwell {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1]; nodes ascending and exactly mirrored.
QuadratureRule gauss_legendre(int n);

// Same rule mapped to [lo, hi].
QuadratureRule gauss_legendre(int n, double lo, double hi);

}  // namespace twinwell
