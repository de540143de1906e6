#include "willmore/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "willmore/errors.hpp"

namespace willmore {

QuadratureRule gauss_legendre(int n, double lo, double hi) {
  if (n < 1) throw DomainError("gauss_legendre: n must be positive");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Tricomi initial guess for the i-th root (descending), then Newton.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const int j = n - 1 - i;  // ascending order
    rule.nodes[j] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x;
    rule.weights[j] = (hi - lo) / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                    double abs_tol, double rel_tol) {
  using boost::math::quadrature::gauss_kronrod;
  double err = 0.0;
  // Boost stops on a relative criterion only; depth is capped so roundoff cannot stall it.
  const double tol = std::max(rel_tol, 1e-15);
  double value = gauss_kronrod<double, 15>::integrate(f, lo, hi, 12, tol, &err);
  if (err > abs_tol && err > rel_tol * std::abs(value)) {
    value = gauss_kronrod<double, 15>::integrate(f, lo, hi, 18, tol * 1e-2, &err);
  }
  return {value, err};
}

}  // namespace willmore
