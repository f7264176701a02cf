#pragma once

#include <cstddef>
#include <vector>

namespace magpulse {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with n nodes on [a, b]. Nodes ascending.
QuadratureRule gauss_legendre(std::size_t n, double a = -1.0, double b = 1.0);

}  // namespace magpulse
