#include "doctest.h"

#include <cmath>
#include <numbers>

#include "willmore/errors.hpp"
#include "willmore/grid.hpp"
#include "willmore/quadrature.hpp"

using namespace willmore;
constexpr double kPi = std::numbers::pi;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  auto rule = gauss_legendre(6, 0.0, 2.0);
  double sum = 0.0;
  for (int i = 0; i < 6; ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], 11);
  CHECK(sum == doctest::Approx(std::pow(2.0, 12) / 12).epsilon(1e-13));
  for (int i = 1; i < 6; ++i) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
  CHECK_THROWS_AS(gauss_legendre(0), DomainError);
}

TEST_CASE("adaptive quadrature") {
  auto r = integrate_adaptive([](double x) { return std::exp(-x) * std::sin(3 * x); }, 0.0, 4.0);
  const double exact = (3 - std::exp(-4.0) * (std::sin(12.0) + 3 * std::cos(12.0))) / 10;
  CHECK(r.value == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("periodic axis: spectral derivatives and trapezoid") {
  Grid grid({Axis::periodic(0, 2 * kPi, 32), Axis::periodic(0, 2 * kPi, 16)});
  auto f = grid.sample([](const Vec& x) { return std::sin(2 * x[0]) * std::cos(x[1]) + std::cos(3 * x[1]); });
  for (int node : {0, 37, 200, 511}) {
    const Vec x = grid.point(node);
    CHECK(grid.d1(f, node, 0) == doctest::Approx(2 * std::cos(2 * x[0]) * std::cos(x[1])).epsilon(1e-12).scale(1));
    CHECK(grid.d2(f, node, 1, 1) ==
          doctest::Approx(-std::sin(2 * x[0]) * std::cos(x[1]) - 9 * std::cos(3 * x[1])).epsilon(1e-11).scale(1));
    CHECK(grid.d2(f, node, 0, 1) == doctest::Approx(-2 * std::cos(2 * x[0]) * std::sin(x[1])).epsilon(1e-11).scale(1));
  }
  auto g = grid.sample([](const Vec& x) { return 1 + std::sin(x[0]) * std::sin(x[0]); });
  CHECK(grid.integrate(g) == doctest::Approx(4 * kPi * kPi * 1.5).epsilon(1e-13));
  CHECK_THROWS_AS(Grid({Axis::periodic(0, 1, 7)}), ValidationError);
}

TEST_CASE("legendre axis differentiates polynomials exactly") {
  Grid grid({Axis::legendre(-1.0, 3.0, 12)});
  auto f = grid.sample([](const Vec& x) { return std::pow(x[0], 7) - 2 * x[0]; });
  for (int i = 0; i < 12; ++i) {
    const double x = grid.point(i)[0];
    CHECK(grid.d1(f, i, 0) == doctest::Approx(7 * std::pow(x, 6) - 2).epsilon(1e-10).scale(1));
    CHECK(grid.d2(f, i, 0, 0) == doctest::Approx(42 * std::pow(x, 5)).epsilon(1e-9).scale(1));
  }
}

TEST_CASE("uniform axis: fourth order stencils and boundary policy") {
  double err[2];
  for (int level = 0; level < 2; ++level) {
    const int count = 41 * (level + 1) - level;
    Grid grid({Axis::uniform(0.0, 1.0, count)});
    auto f = grid.sample([](const Vec& x) { return std::sin(3 * x[0]); });
    const int mid = (count - 1) / 2;
    err[level] = std::abs(grid.d1(f, mid, 0) - 3 * std::cos(1.5));
    CHECK_THROWS_AS(grid.d1(f, 1, 0), StencilError);
    CHECK_FALSE(grid.evaluable(count - 2));
    CHECK(grid.evaluable(2));
  }
  CHECK(std::log2(err[0] / err[1]) > 3.9);
}

TEST_CASE("flat indexing round trip") {
  Grid grid({Axis::periodic(0, 1, 4), Axis::legendre(0, 1, 3), Axis::uniform(0, 1, 5)});
  CHECK(grid.size() == 60);
  for (int i = 0; i < grid.size(); ++i) CHECK(grid.flatten(grid.unflatten(i)) == i);
  CHECK(grid.unflatten(7) == Index{0, 1, 2});
}
