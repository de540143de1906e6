#include <doctest.h>

#include <cmath>
#include <numbers>

#include "willmore/errors.hpp"
#include "willmore/patch.hpp"
#include "willmore/quadrature.hpp"
#include "willmore/revolution.hpp"

using namespace willmore;

namespace {

struct ParabolaSource : detail::ProfileSource {
  std::vector<double> taylor(double rho, int order) const override {
    std::vector<double> t(order + 1, 0.0);
    t[0] = rho * rho;
    if (order >= 1) t[1] = 2 * rho;
    if (order >= 2) t[2] = 1.0;
    return t;
  }
};

}  // namespace

TEST_CASE("principal curvatures of hemisphere and cone") {
  const double R = 1.7;
  for (double rho : {0.2, 0.9, 1.5}) {
    const double w = std::sqrt(R * R - rho * rho);
    const auto k = principal_curvatures(rho, -rho / w, -R * R / (w * w * w));
    CHECK(k.k1 == doctest::Approx(-1 / R).epsilon(1e-13));
    CHECK(k.kn == doctest::Approx(-1 / R).epsilon(1e-13));
    const auto c = principal_curvatures(rho, 0.7, 0.0);
    CHECK(c.kn == 0.0);
    CHECK(c.k1 == doctest::Approx(0.7 / (rho * std::sqrt(1.49))));
  }
  CHECK_THROWS_AS(principal_curvatures(0.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(principal_curvatures(-1.0, 1.0, 0.0), DomainError);
}

TEST_CASE("revolution invariants") {
  const auto v = revolution_invariants(3, 0.5, 0.8, -0.3);
  const auto k = principal_curvatures(0.5, 0.8, -0.3);
  CHECK(v.H == doctest::Approx((2 * k.k1 + k.kn) / 3));
  CHECK(v.norm_h_sq == doctest::Approx(2 * k.k1 * k.k1 + k.kn * k.kn));
  CHECK(v.h_h2 == doctest::Approx(2 * std::pow(k.k1, 3) + std::pow(k.kn, 3)));
  CHECK(v.area_density == doctest::Approx(0.25 * std::sqrt(1.64)));
}

TEST_CASE("fit_constants") {
  const double c = critical_exponent(2, 3);
  CHECK(fit_constants(2, 3, 0.4, 1.0) == doctest::Approx(2 * std::pow(0.4, 2 * c)).epsilon(1e-14));
  CHECK(fit_constants(2, 3, 0.4, 1e8) == doctest::Approx(std::pow(0.4, 2 * c)).epsilon(1e-12));
  CHECK(fit_constants(2, 3, 0.4, 0.4) == doctest::Approx(0.1856).epsilon(1e-12));
  CHECK_THROWS_AS(fit_constants(2, 3, 0.4, 0.0), DomainError);
  CHECK_THROWS_AS(fit_constants(2, 3, 0.4, -0.5), DomainError);
  for (int n : {2, 3, 4}) {
    for (double p : {2.0, 3.5, 5.0}) {
      if (critical_exponent(n, p) == 0) continue;
      for (double s : {0.1, 0.4, 3.0}) {
        const double c1 = fit_constants(n, p, 0.6, s);
        const auto prof = critical_closed_form(n, p, c1, 0.6, 1.0, 0.55, 0.6);
        CHECK(prof.at(0.6).fp == doctest::Approx(s).epsilon(1e-10));
        CHECK(prof.at(0.6).f == doctest::Approx(1.0).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("closed form integrand") {
  for (double p : {2.0, 3.0, 4.5}) {
    const double c = critical_exponent(2, p);
    const double rho = 0.7, c1 = 2 * std::pow(rho, 2 * c);
    CHECK(closed_form_integrand(2, p, c1, rho) == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(critical_closed_form(2, 3, 0.1856, 0.7, 1.0, 0.1, 0.8), DomainError);
  CHECK_THROWS_AS(feasibility_window(2, 1, 1.0), DomainError);
  const auto w = feasibility_window(3, 1.5, 4.0);
  CHECK(w.lo == doctest::Approx(0.25));
  CHECK(std::isinf(w.hi));
}

TEST_CASE("ODE against closed form") {
  struct Case {
    int n;
    double p, rho0, f0p, lo, hi;
  };
  for (const auto& cs : {Case{2, 3, 0.4, 0.4, 0.05, 0.64}, Case{2, 5.5, 0.4, 0.4, 0.1, 0.48},
                         Case{3, 1.5, 1.0, 0.5, 0.3, 3.0}, Case{4, 2.0, 1.0, -0.5, 0.5, 2.0}}) {
    CAPTURE(cs.p);
    const auto ode = critical_ode_solve(cs.n, cs.p, cs.rho0, 1.0, cs.f0p, cs.lo, cs.hi);
    CHECK_FALSE(ode.vertical_tangent);
    CHECK(ode.criticality_residual() < 1e-8);
    if (cs.f0p > 0) {
      const auto cf = critical_closed_form(cs.n, cs.p, fit_constants(cs.n, cs.p, cs.rho0, cs.f0p), cs.rho0, 1.0,
                                           cs.lo, cs.hi);
      CHECK(cf.criticality_residual() < 1e-10);
      double worst = 0;
      for (const auto& a : cf.sample_uniform(101)) {
        const auto b = ode.at(a.rho);
        worst = std::max({worst, std::abs(a.f - b.f), std::abs(a.fp - b.fp)});
      }
      CHECK(worst < 1e-8);
    }
  }
}

TEST_CASE("ODE reports vertical tangent") {
  const auto ode = critical_ode_solve(2, 3, 0.4, 1.0, 0.4, 0.1, 1.0);
  REQUIRE(ode.vertical_tangent);
  CHECK(*ode.vertical_tangent == doctest::Approx(std::pow(0.1856, 0.25)).epsilon(1e-6));
  CHECK(ode.rho_max() < *ode.vertical_tangent);
  CHECK_FALSE(ode.truncation_note.empty());
  const auto flat = critical_ode_solve(3, 2, 0.5, 0.0, 0.3, 0.1, 2.0);
  CHECK(flat.at(1.5).fp == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(flat.at(1.5).fpp == 0.0);
}

TEST_CASE("critical profiles for p = 2..8 from one initial condition") {
  for (int p = 2; p <= 8; ++p) {
    CAPTURE(p);
    const auto ode = critical_ode_solve(2, p, 0.4, 1.0, 0.4, 0.05, 2.0);
    const double c1 = fit_constants(2, p, 0.4, 0.4);
    const auto cf = critical_closed_form(2, p, c1, 0.4, 1.0, 0.05, 2.0);
    REQUIRE(ode.vertical_tangent);
    CHECK(*ode.vertical_tangent == doctest::Approx(feasibility_window(2, p, c1).hi).epsilon(1e-5));
    CHECK(ode.criticality_residual() < 1e-8);
    const auto k = principal_curvatures(0.3, ode.at(0.3).fp, ode.at(0.3).fpp);
    CHECK(k.kn == doctest::Approx((p - 1) * k.k1).epsilon(1e-9));
    CHECK(cf.at(0.3).f == doctest::Approx(ode.at(0.3).f).epsilon(1e-9));
  }
}

TEST_CASE("n = 3, p = 3 gives k3 = k1") {
  const auto ode = critical_ode_solve(3, 3, 0.5, 0.0, 0.7, 0.2, 0.7);
  for (const auto& s : ode.sample_uniform(21)) {
    const auto k = principal_curvatures(s.rho, s.fp, s.fpp);
    CHECK(k.kn == doctest::Approx(k.k1).epsilon(1e-9));
    CHECK(k.kn != 0.0);
  }
}

TEST_CASE("n = 2 critical profile has H^2/K = p^2/(4(p-1))") {
  for (double p : {2.0, 3.0, 6.0}) {
    const auto ode = critical_ode_solve(2, p, 0.4, 1.0, 0.4, 0.1, 0.45);
    for (const auto& s : ode.sample_uniform(11)) {
      const auto v = revolution_invariants(2, s.rho, s.fp, s.fpp);
      CHECK(v.H * v.H / (v.k1 * v.kn) == doctest::Approx(p * p / (4 * (p - 1))).epsilon(1e-8));
    }
  }
}

TEST_CASE("revolution surface matches generic patch geometry") {
  for (int n : {2, 3}) {
    const auto ode = critical_ode_solve(n, 3, 0.4, 1.0, 0.4, 0.2, 0.55);
    const auto surf = revolution_surface(ode, 0.2, 0.55, n - 1, 6);
    const auto patch = surf.patch();
    for (int node = 0; node < patch.grid().size(); node += 5) {
      const auto& pg = patch.at(node);
      const double rho = pg.x(n - 1);
      const auto s = ode.at(rho);
      const auto v = revolution_invariants(n, rho, s.fp, s.fpp);
      CHECK(pg.H == doctest::Approx(v.H).epsilon(1e-8));
      CHECK(pg.H_F == doctest::Approx(v.H_F).epsilon(1e-8));
      CHECK(pg.norm_h_sq == doctest::Approx(v.norm_h_sq).epsilon(1e-8));
      CHECK(pg.norm_hf_sq == doctest::Approx(v.norm_hf_sq).epsilon(1e-8));
      CHECK(pg.norm_hmix_sq < 1e-20);
      if (n == 2) CHECK(pg.dv == doctest::Approx(v.area_density).epsilon(1e-10));
    }
  }
}

TEST_CASE("leaf harmonic norms") {
  CHECK(leaf_harmonic_norm(2, 0) == doctest::Approx(2 * std::numbers::pi));
  for (int j = 1; j <= 4; ++j) CHECK(leaf_harmonic_norm(2, j) == doctest::Approx(std::numbers::pi));
  const auto gl = gauss_legendre(40, 0.0, std::numbers::pi);
  for (int j = 0; j <= 4; ++j) {
    double theta = 0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) theta += gl.weights[i] * std::pow(std::sin(gl.nodes[i]), 2 * j + 1);
    const double phi = j == 0 ? 2 * std::numbers::pi : std::numbers::pi;
    CHECK(leaf_harmonic_norm(3, j) == doctest::Approx(phi * theta).epsilon(1e-12));
  }
  CHECK(leaf_eigenvalue(3, 2) == 6.0);
}

TEST_CASE("second variation signs on the p = 3 profile") {
  const auto ode = critical_ode_solve(2, 3, 0.4, 1.0, 0.4, 0.05, 1.0);
  const auto j0 = second_variation_revolution(ode, 0, 0.2, 0.6);
  double oracle = 0;
  const auto gl = gauss_legendre(200, 0.2, 0.6);
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    const double r = gl.nodes[i];
    const auto s = ode.at(r);
    const double k1 = principal_curvatures(r, s.fp, s.fpp).k1;
    oracle -= 4 * std::numbers::pi * gl.weights[i] * std::pow(k1, 5) * r * std::sqrt(1 + s.fp * s.fp);
  }
  CHECK(j0.total < 0);
  CHECK(j0.total == doctest::Approx(oracle).epsilon(1e-10));
  const auto j1 = second_variation_revolution(ode, 1, 0.2, 0.6);
  CHECK(j1.total > 0);
  CHECK(j1.total >= j1.lower_bound);
  CHECK(j1.pointwise_bound_margin > 0);
  // Bound fails pointwise once f' > sqrt(3).
  const auto near = second_variation_revolution(ode, 1, 0.2, 0.655);
  CHECK(near.total > 0);
  CHECK(near.pointwise_bound_margin < 0);
  const auto flat = second_variation_revolution(critical_ode_solve(2, 2, 0.4, 1.0, 0.4, 0.1, 0.6), 0, 0.2, 0.5);
  CHECK(flat.total == doctest::Approx(0.0));
}

TEST_CASE("second variation needs a critical profile") {
  RevolutionProfile bad(2, 3, 0.1, 1.0, std::make_shared<ParabolaSource>());
  CHECK_THROWS_AS(second_variation_revolution(bad, 1, 0.2, 0.6), PreconditionError);
}
