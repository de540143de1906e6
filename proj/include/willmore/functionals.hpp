#pragma once

// Reilly-type functionals on foliated patches: evaluation, first and second
// variations (analytic and by finite differences), Euler-Lagrange residuals
// and the conformal density check.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "willmore/immersion.hpp"
#include "willmore/patch.hpp"
#include "willmore/revolution.hpp"

namespace willmore {

enum class FunctionalKind { W_nps, J_nps, WF, JF, WF_of_HF, W_conf, WF_HK };

std::string to_string(FunctionalKind kind);
FunctionalKind functional_kind_from_string(const std::string& name);

using SymFn = std::function<double(std::span<const double>)>;
using SymGrad = std::function<std::vector<double>(std::span<const double>)>;
using ScalarFn = std::function<double(double)>;

// Arguments of F by kind:
//   WF: sigma^F_1..sigma^F_s    JF: tau^F_1..tau^F_s
//   WF_of_HF: (H_F)             WF_HK: (H_F, K_F)
// W_nps, J_nps and W_conf carry their own closed forms.
struct FunctionalSpec {
  FunctionalKind kind = FunctionalKind::W_nps;
  double p = 2;
  int r = 2;
  SymFn F;
  SymGrad dF;
  ScalarFn d2F;  // F'' (WF_of_HF only)

  static FunctionalSpec willmore(double p);  // W_{n,p,s} = int H_F^p
  static FunctionalSpec norm_power(double p);  // J_{n,p,s} = int |h_F|^p
  static FunctionalSpec sigma(SymFn f, SymGrad df, int s);
  static FunctionalSpec tau(SymFn f, SymGrad df, int s);
  static FunctionalSpec of_hf(ScalarFn f, ScalarFn df, ScalarFn d2f);
  static FunctionalSpec conformal(int r);
  static FunctionalSpec of_hk(SymFn f, SymGrad df);
};

// Largest relative mismatch between supplied partials and central differences.
double partials_mismatch(const FunctionalSpec& spec, std::span<const double> at);

inline constexpr double kPowerBaseEps = 1e-12;

// Density F at a point (without dV).
double density(const FunctionalSpec& spec, const PointGeometry& pg);

// int F dV over the patch (tensor-product quadrature).
double evaluate(const FunctionalSpec& spec, const FoliatedPatch& patch);
// int F dV over the surface of revolution, rho in [rho_lo, rho_hi].
double evaluate(const FunctionalSpec& spec, const RevolutionProfile& profile, double rho_lo, double rho_hi);

// Which first-variation integrand to use.
//   Corrected: delta A_F = Hess|_F + u A_F^2 - u Mix (Hess|_F = full Hessian on TF).
//   Printed:   the integrand as stated for the kind (leaf Hessian, printed signs).
enum class VariationForm { Corrected, Printed };

// Pointwise delta(F dV)/dV at a node for the variation u N.
double first_variation_density(const FunctionalSpec& spec, const PointGeometry& pg, const ScalarDerivs& u,
                               VariationForm form = VariationForm::Corrected);
double first_variation_analytic(const FunctionalSpec& spec, const FoliatedPatch& patch, const JetScalar& u,
                                VariationForm form = VariationForm::Corrected);

struct FiniteDifferenceResult {
  double value = 0;               // Richardson extrapolation of the two finest steps
  std::vector<double> steps;      // t values
  std::vector<double> estimates;  // central differences per t
};
FiniteDifferenceResult first_variation_numeric(const FunctionalSpec& spec, const FoliatedPatch& patch,
                                               const JetScalar& u, const std::vector<double>& t_steps);
FiniteDifferenceResult second_variation_numeric(const FunctionalSpec& spec, const FoliatedPatch& patch,
                                                const JetScalar& u, const std::vector<double>& t_steps);

// Euler-Lagrange residual at every node (0 where not evaluable).
// Requires |(div P) o P| < precondition_tol on evaluable nodes.
std::vector<double> el_residual(const FunctionalSpec& spec, const FoliatedPatch& patch,
                                double precondition_tol = 1e-8);
// Algebraic residual on a surface of revolution (curvatures constant on parallels).
double el_residual(const FunctionalSpec& spec, const RevolutionProfile& profile, double rho);
// Willmore residual Delta H + 2 H (H^2 - K) for n = s = 2.
std::vector<double> willmore_residual(const FoliatedPatch& patch);

// Second variation of int F(H_F) dV (W_nps, WF_of_HF).
//   critical = true: the form simplified with the Euler-Lagrange equation;
//   requires el residual < critical_tol.  false: the general form.
double second_variation_analytic(const FunctionalSpec& spec, const FoliatedPatch& patch, const JetScalar& u,
                                 bool critical = true, double critical_tol = 1e-6);

enum class ConformalMode { Homothety, Inversion };

struct ConformalCheck {
  double max_density_deviation = 0;  // relative
  double max_shape_law_deviation = 0;
  double max_density = 0;
  int nodes = 0;
};
// Compares (Q^F_r)^{n/r} sqrt(det g) on the patch and on its image.
ConformalCheck conformal_density_check(const FoliatedPatch& patch, int r, ConformalMode mode, double scale = 2.0);

}  // namespace willmore
