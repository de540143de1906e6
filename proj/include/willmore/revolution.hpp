#pragma once

// Hypersurfaces of revolution x_{n+1} = f(rho) foliated by parallel spheres:
// curvature formulas, the critical-profile ODE and its closed-form solution,
// and the second variation for leaf-sphere eigenfunctions.

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "willmore/catalog.hpp"

namespace willmore {

struct PrincipalCurvatures {
  double k1 = 0;  // parallels (multiplicity n-1)
  double kn = 0;  // profile curve
};

// Upward normal (-f' omega, 1)/sqrt(1 + f'^2).
PrincipalCurvatures principal_curvatures(double rho, double fp, double fpp);

struct RevolutionInvariants {
  double k1 = 0, kn = 0, H = 0, H_F = 0;
  double norm_hf_sq = 0, norm_h_sq = 0, h_h2 = 0, hf_hf2 = 0;
  double area_density = 0;  // rho^{n-1} sqrt(1 + f'^2)
};
RevolutionInvariants revolution_invariants(int n, double rho, double fp, double fpp);

struct ProfileSample {
  double rho, f, fp, fpp;
};

namespace detail {
struct ProfileSource {
  virtual ~ProfileSource() = default;
  // Taylor coefficients f^(k)(rho)/k! for k = 0..order.
  virtual std::vector<double> taylor(double rho, int order) const = 0;
};
}  // namespace detail

class RevolutionProfile {
 public:
  RevolutionProfile(int n, double p, double rho_min, double rho_max,
                    std::shared_ptr<const detail::ProfileSource> source);

  int n() const { return n_; }
  double p() const { return p_; }
  double rho_min() const { return rho_min_; }
  double rho_max() const { return rho_max_; }
  // Where the graph turns vertical (|f'| > 1e6 or the closed form's pole).
  std::optional<double> vertical_tangent;
  std::string truncation_note;

  ProfileSample at(double rho) const;
  // f, f', f'', f'''
  std::array<double, 4> derivatives(double rho) const;
  std::vector<ProfileSample> sample(const std::vector<double>& rho) const;
  std::vector<ProfileSample> sample_uniform(int count) const;
  // Jet-valued profile for building immersions.
  Profile jet_profile() const;
  // |k_n - (p-n+1) k_1| / |k_1| maximised over samples.
  double criticality_residual(int count = 200) const;

 private:
  int n_;
  double p_, rho_min_, rho_max_;
  std::shared_ptr<const detail::ProfileSource> source_;
};

// Exponent c = p - n + 1 of the critical ODE rho f'' = c f' (1 + f'^2).
double critical_exponent(int n, double p);

struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double blowup = 1e6;
};

// Integrates (f', f) from (rho0, f0, f0') across [rho_lo, rho_hi]; stops at a vertical tangent.
RevolutionProfile critical_ode_solve(int n, double p, double rho0, double f0, double f0p, double rho_lo,
                                     double rho_hi, OdeOptions opt = {});

// C1 with closed-form slope f0' at rho0: C1 = rho0^{2c} (1 + 1/f0'^2).
double fit_constants(int n, double p, double rho0, double f0p);

struct FeasibilityWindow {
  double lo = 0, hi = 0;  // open interval of rho where C1 - rho^{2c} > 0
};
FeasibilityWindow feasibility_window(int n, double p, double c1);

// f(rho) = C2 + int_{rho0}^{rho} rho^c / sqrt(C1 - rho^{2c}); C2 = f(rho0).
RevolutionProfile critical_closed_form(int n, double p, double c1, double rho0, double c2, double rho_lo,
                                       double rho_hi);
// The printed integrand sqrt(C1 rho^{2c} - rho^{4c}) / (C1 - rho^{2c}).
double closed_form_integrand(int n, double p, double c1, double rho);

// Integral of Y_j^2 over the unit (n-1)-sphere for Y_j = Re((x_1 + i x_2)^j).
double leaf_harmonic_norm(int n, int j);
inline double leaf_eigenvalue(int n, int j) { return j * (j + n - 2.0); }

struct SecondVariationTerms {
  double total = 0;
  double lower_bound = 0;  // int {n(p-n) + p(6n-11) + 1} k1^{p+2} u^2 dV
  double pointwise_bound_margin = 0;  // min over rho of integrand - bound integrand
};

// Second variation of W_{n,p,n-1} for u = a(rho) Y_j on [rho_lo, rho_hi].
SecondVariationTerms second_variation_revolution(const RevolutionProfile& profile, int j, double rho_lo,
                                                 double rho_hi, const std::function<double(double)>& a = {},
                                                 double critical_tol = 1e-6);

// Surface of revolution over the profile (coordinates: angles..., rho).
Surface revolution_surface(const RevolutionProfile& profile, double rho_lo, double rho_hi, int s, int res);

}  // namespace willmore
