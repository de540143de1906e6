#pragma once

// Finite-difference verification of the evolution equations under r_t = r + t u N
// and of the leafwise integration-by-parts identities.

#include <string>
#include <vector>

#include "willmore/functionals.hpp"
#include "willmore/patch.hpp"

namespace willmore {

enum class EvolutionId {
  g, g_inv, h, norm_h_sq, nH, dV,
  sH_F, norm_hF_sq, norm_hmix_sq, lapF_f, tau_i, sigma_r,
  twoH_F, K_F, Christoffel
};

std::string to_string(EvolutionId id);
EvolutionId evolution_id_from_string(const std::string& name);
const std::vector<EvolutionId>& all_evolution_ids();

struct EvolutionCase {
  EvolutionId id = EvolutionId::g;
  int index = 1;  // i for tau_i, r for sigma_r
  std::vector<double> t_values = {1e-3, 5e-4, 2.5e-4};
  VariationForm form = VariationForm::Printed;
};

// Cases of the full suite for leaf dimension s (tau_1..tau_3, sigma_1..sigma_s; K_F and twoH_F need s = 2).
std::vector<EvolutionCase> default_suite(int s, VariationForm form = VariationForm::Printed);

// Both sides at one sampled node (finest t), kept for failing cases.
struct NodeSample {
  int node = 0;
  std::vector<double> numeric, analytic;
};

struct CaseReport {
  std::string name;
  std::string form;
  std::vector<double> t_values;
  std::vector<double> errors;  // max |central difference - analytic| per t
  std::vector<double> orders;  // log(e_k / e_{k+1}) / log(t_k / t_{k+1})
  double richardson_error = 0;
  double analytic_scale = 0;  // max |analytic|
  int points = 0;
  bool pass = false;
  std::string note;
  std::vector<NodeSample> diagnostics;
};

struct ConvergenceReport {
  std::string surface;
  std::vector<CaseReport> cases;
  bool all_pass() const;
};

// Compares central differences of the quantity at +-t with the analytic right side at t = 0,
// over `points` nodes spread through the patch.  f is the test function for lapF_f.
CaseReport verify_evolution(const EvolutionCase& c, const FoliatedPatch& patch, const JetScalar& u,
                            const JetScalar& f, int points = 24);
ConvergenceReport verify_suite(const std::vector<EvolutionCase>& cases, const FoliatedPatch& patch,
                               const JetScalar& u, const JetScalar& f, const std::string& surface, int points = 24);

// delta K_F (s = 2) by direct difference, by the closed evolution law and by the chain
// 2 H_F delta(2 H_F) - delta|h_F|^2 / 2.
struct KfConsistency {
  CaseReport direct_vs_law;
  CaseReport direct_vs_chain;
  double law_vs_chain = 0;  // max |law - chain|
};
KfConsistency kf_three_ways(const FoliatedPatch& patch, const JetScalar& u, VariationForm form = VariationForm::Printed,
                            const std::vector<double>& t_values = {1e-3, 5e-4, 2.5e-4}, int points = 24);

// The analytic delta Gamma in chart x, pushed to the chart y with x = y + a sin(y),
// against delta Gamma computed in chart y (analytic and central difference).
struct TensorCheck {
  double analytic_deviation = 0;
  double numeric_deviation = 0;
  double scale = 0;
};
TensorCheck christoffel_tensor_check(const FoliatedPatch& patch, const JetScalar& u, double amplitude = 0.1,
                                     double t = 1e-4, int points = 8);

enum class IntegralIdentity { green_F, symm_F, ibp_full, ibp_F, adjoint_F };
std::string to_string(IntegralIdentity id);
IntegralIdentity integral_identity_from_string(const std::string& name);
const std::vector<IntegralIdentity>& all_integral_identities();

struct IdentityReport {
  std::string name;
  double lhs = 0, rhs = 0;
  double discrepancy = 0;  // |lhs - rhs| / max(1, int |integrand|)
  double projector_divergence = 0;  // max |(div P) o P|
  bool applicable = true;
  bool pass = false;
};

// Fields: f1, f2 scalars; ibp_full uses B = f1 h + sym(df1 x df2), ibp_F its leaf block,
// adjoint_F the leaf 1-form f1 d^F f2 paired with grad^F f2.
IdentityReport verify_integral_identity(IntegralIdentity id, const FoliatedPatch& patch, const JetScalar& f1,
                                        const JetScalar& f2, double tol = 1e-8, double precondition_tol = 1e-10);

}  // namespace willmore
