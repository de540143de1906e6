#pragma once

#include <functional>
#include <vector>

namespace willmore {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [lo, hi], nodes ascending.
QuadratureRule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

// Adaptive Gauss-Kronrod (G7/K15) on [lo, hi].
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                    double abs_tol = 1e-12, double rel_tol = 1e-12);

}  // namespace willmore
