#include "doctest.h"

#include <cmath>
#include <numbers>

#include "willmore/catalog.hpp"
#include "willmore/errors.hpp"
#include "willmore/patch.hpp"

using namespace willmore;
constexpr double kPi = std::numbers::pi;

TEST_CASE("unit spheres with inward normal are umbilic with A = id") {
  for (int n = 2; n <= 4; ++n) {
    auto surf = sphere(n, n, 6);
    auto patch = surf.patch(n == 4 ? 2 : 3);
    for (int node = 0; node < patch.grid().size(); node += 7) {
      auto pg = point_geometry(patch, node);
      CHECK(max_abs_diff(pg.A, Mat::Identity(n, n)) < 1e-12);
      CHECK(pg.H == doctest::Approx(1.0));
      CHECK(pg.norm_h_sq == doctest::Approx(n));
    }
  }
}

TEST_CASE("plane and cylinder") {
  auto pl = plane(8).patch();
  auto pg = point_geometry(pl, 5);
  CHECK(pg.h.cwiseAbs().maxCoeff() == 0.0);
  CHECK(pg.H == 0.0);

  const double R = 1.7;
  auto cyl = cylinder(R, -1, 1, 8).patch();
  for (int node = 0; node < cyl.grid().size(); node += 5) {
    auto c = point_geometry(cyl, node);
    auto k = symmetric_eigenvalues(c.h_frame);
    CHECK(k[0] == doctest::Approx(0.0).scale(1));
    CHECK(k[1] == doctest::Approx(1 / R));
    CHECK(c.a_f(0, 0) == doctest::Approx(1 / R));
    CHECK(c.norm_hmix_sq < 1e-24);
    CHECK(c.H == doctest::Approx(0.5 / R));
  }
}

TEST_CASE("finite-difference supplier converges at fourth order") {
  auto surf = bumpy_torus(1, 8);
  const Vec x = Vec::Constant(2, 0.4);
  auto exact = geometry_at(*surf.immersion, 1, x, 1, 3);
  double err_g[2], err_h[2];
  const double steps[2] = {2e-2, 1e-2};
  for (int k = 0; k < 2; ++k) {
    FiniteDifferenceImmersion fd(surf.immersion, steps[k]);
    auto approx = geometry_at(fd, 1, x, 1, 3);
    err_g[k] = max_abs_diff(approx.g, exact.g);
    err_h[k] = max_abs_diff(approx.h, exact.h);
  }
  CHECK(std::log2(err_g[0] / err_g[1]) > 3.9);
  CHECK(std::log2(err_h[0] / err_h[1]) > 3.9);
}

TEST_CASE("pointwise invariants on curved foliated patches") {
  for (auto surf : {bumpy_torus(1, 8), sheared_torus3(6, 0.3, 0.2)}) {
    auto patch = surf.patch();
    for (int node = 0; node < patch.grid().size(); node += 3) {
      auto r = check_invariants(patch.at(node));
      CHECK(r.projector_idempotent < 1e-10);
      CHECK(r.projector_selfadjoint < 1e-10);
      CHECK(r.a_f_vs_pap < 1e-10);
      CHECK(r.hf_hmix_inner < 1e-9);
      CHECK(r.decomposition < 1e-10);
      CHECK(r.normal_unit < 1e-12);
      CHECK(r.normal_orthogonal < 1e-12);
      auto pg = patch.at(node);
      CHECK(pg.norm_hmix_sym_sq == doctest::Approx(0.5 * pg.norm_hmix_sq).epsilon(1e-10).scale(1));
    }
  }
}

TEST_CASE("degenerate chart is rejected") {
  ClosedFormImmersion bad(2, [](const JetVec& x) { return JetVec{x[0], x[0], Jet(0.0) * x[1]}; });
  CHECK_THROWS_AS(geometry_at(bad, 1, Vec::Zero(2), 1, 2), SingularImmersionError);
}

TEST_CASE("leaf laplacian and hessians") {
  // Unit circle leaves on a cylinder: u = x-coordinate.
  auto cyl = cylinder(1.0, -1, 1, 16).patch();
  auto u = cyl.grid().sample([](const Vec& x) { return std::cos(x[0]); });
  auto c = cyl.grid().sample([](const Vec&) { return 2.5; });
  for (int node = 0; node < cyl.grid().size(); node += 11) {
    CHECK(leaf_laplacian(cyl, u, node) == doctest::Approx(-u[node]).epsilon(1e-10).scale(1));
    CHECK(std::abs(leaf_laplacian(cyl, c, node)) < 1e-10);
  }
  // Degree-1 harmonic on parallels of a sphere, n = 3.
  auto sph = sphere(3, 2, 8).patch();
  for (int node = 0; node < sph.grid().size(); node += 13) {
    const auto& pg = sph.at(node);
    JetScalar harmonic = [](const JetVec& x) { return cos(x[0]) * sin(x[1]); };
    auto d = derivs_of(harmonic, pg.x);
    const double rho = std::sin(pg.x[2]);
    CHECK(leaf_laplacian(pg, d) == doctest::Approx(-2.0 / (rho * rho) * d.value).epsilon(1e-10).scale(1));
  }
  // Flat chart: Hess of |x|^2/2 is the identity; trace of Hess equals the Laplacian.
  auto pl = plane(8).patch();
  JetScalar q = [](const JetVec& x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]); };
  auto hs = hessians(pl.at(9), derivs_of(q, pl.at(9).x));
  CHECK(max_abs_diff(hs.full, Mat::Identity(2, 2)) < 1e-14);
  auto bt = bumpy_torus(1, 64).patch();
  JetScalar w = [](const JetVec& x) { return sin(x[0] + 2.0 * x[1]) * cos(x[1]); };
  for (int node = 0; node < 4096; node += 397) {
    const auto& pg = bt.at(node);
    auto d = derivs_of(w, pg.x);
    // Laplace-Beltrami in divergence form as the second code path.
    const double lap = laplacian(pg, d);
    const auto& grid = bt.grid();
    std::vector<double> flux0(grid.size()), flux1(grid.size());
    for (int k = 0; k < grid.size(); ++k) {
      const auto& q2 = bt.at(k);
      auto dk = derivs_of(w, q2.x);
      Vec up = q2.g_inv * dk.grad * q2.dv;
      flux0[k] = up[0];
      flux1[k] = up[1];
    }
    const double div = (grid.d1(flux0, node, 0) + grid.d1(flux1, node, 1)) / pg.dv;
    CHECK(lap == doctest::Approx(div).epsilon(1e-6).scale(1));
    CHECK(hessians(pg, d).full.isApprox(hessians(pg, d).full.transpose()));
  }
}

TEST_CASE("projector divergence") {
  auto rev = revolution(2, [](const Jet& r) { return 0.3 * r * r * r; }, 0.5, 1.5, 1, 8).patch();
  for (int node = 0; node < rev.grid().size(); node += 7) {
    auto d = div_projector(rev, node);
    CHECK(d.norm < 1e-12);
    CHECK(d.h_perp.norm() < 1e-12);
  }
  auto cyl = cylinder(1.3, -1, 1, 8).patch();
  auto dc = div_projector(cyl, 10);
  CHECK(dc.norm < 1e-14);
  CHECK(dc.h_perp.norm() < 1e-14);

  auto sheared = sheared_torus3(6, 0.4, 0.2).patch();
  double largest = 0.0;
  for (int node = 0; node < sheared.grid().size(); node += 5) {
    auto d = div_projector(sheared, node);
    largest = std::max(largest, d.h_perp.norm());
    CHECK(d.identity_residual < 1e-8);
  }
  CHECK(largest > 1e-3);
}
