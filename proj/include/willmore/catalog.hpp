#pragma once

// Closed-form test surfaces with adapted coordinates (leaf coordinates first).

#include <functional>
#include <string>
#include <vector>

#include "willmore/patch.hpp"

namespace willmore {

struct Surface {
  std::string id;
  ImmersionPtr immersion;
  int s = 1;
  std::vector<Axis> axes;
  int orientation = 1;

  FoliatedPatch patch(int jet_order = 3) const;
};

using Profile = std::function<Jet(const Jet&)>;

// Unit-radius S^n(R) in hyperspherical coordinates (phi, theta_1..theta_{n-1}),
// inward normal (A = id / R).  s = n or s = n - 1 (parallel spheres).
Surface sphere(int n, int s, int res, double radius = 1.0);
// ((R + r cos b) cos a, (R + r cos b) sin a, r sin b); leaves are the a-circles when s = 1.
Surface torus(double big_r, double small_r, int s, int res);
Surface cylinder(double radius, double z_lo, double z_hi, int res);
// x_{n+1} = f(rho) over the (n-1)-sphere of directions; coordinates (angles..., rho),
// upward normal; leaves are the parallels (s = n - 1) unless s = n.
Surface revolution(int n, Profile f, double rho_lo, double rho_hi, int s, int res);
Surface cone(int n, double slope, double rho_lo, double rho_hi, int res);
Surface plane(int res);
// Periodic bumpy torus in R^3 (no symmetry), s = 1 or 2.
Surface bumpy_torus(int s, int res, double amplitude = 0.15);
// Sheared, bumped 3-torus in R^4 with 2-dimensional leaves.
Surface sheared_torus3(int res, double shear = 0.3, double bump = 0.0);

// Seeded periodic test field: mean + three sine waves with integer frequencies in [-2, 2].
JetScalar random_field(int dims, unsigned seed);

// Catalog lookup used by the command-line tool.
std::vector<std::string> catalog_ids();

}  // namespace willmore
