#include "commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "willmore/errors.hpp"
#include "willmore/varcheck.hpp"

namespace cli {

using namespace willmore;

namespace {

std::string out_path(const Context& ctx, const std::string& name) { return (ctx.out_dir / name).string(); }

std::string tag(double p) {
  return p == std::floor(p) ? std::to_string(static_cast<long long>(p)) : format_number(p);
}

std::vector<double> number_list(const json& j, const std::string& key, std::vector<double> fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) throw UsageError("'" + key + "' must be a number or an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw UsageError("'" + key + "' must contain numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

// rho, f, f' from the first data row of a profile CSV.
std::array<double, 3> initial_row(const std::string& path) {
  std::ifstream in(path);
  std::string header, row;
  if (!in || !std::getline(in, header) || !std::getline(in, row)) throw UsageError("cannot read " + path);
  std::array<double, 3> out{};
  std::stringstream ss(row);
  std::string cell;
  for (double& v : out) {
    if (!std::getline(ss, cell, ',')) throw UsageError("short row in " + path);
    v = std::stod(cell);
  }
  return out;
}

}  // namespace

RunReport cmd_profile(const Context& ctx) {
  const auto& c = ctx.config;
  RunReport rep{"profile", c, {}, 0};
  const int n = integer(c, "n", 2);
  double rho0 = number(c, "rho0", 0.4), f0 = number(c, "f0", 1.0), fp0 = number(c, "fp0", 0.4);
  if (c.contains("initial_csv")) {
    const auto row = initial_row(text(c, "initial_csv", ""));
    rho0 = row[0], f0 = row[1], fp0 = row[2];
  }
  const double lo = number(c, "rho_lo", 0.05), hi = number(c, "rho_hi", 2.0);
  const int samples = integer(c, "samples", 400);
  const double tol = number(c, "tolerance", 1e-6), residual_tol = number(c, "residual_tolerance", 1e-8);
  if (samples < 2) throw UsageError("samples must be >= 2");
  OdeOptions ode_opt;
  ode_opt.rel_tol = ode_opt.abs_tol = number(c, "ode_tolerance", 1e-12);
  std::vector<Polyline> curves;
  for (double p : number_list(c, "p", {2, 3, 4, 5, 6, 7, 8})) {
    if (critical_exponent(n, p) == 0) throw DomainError("degenerate: f'' ≡ 0 (p = n - 1)");
    const auto ode = critical_ode_solve(n, p, rho0, f0, fp0, lo, hi, ode_opt);
    const double c1 = fit_constants(n, p, rho0, fp0);
    const auto closed = critical_closed_form(n, p, c1, rho0, f0, lo, hi);
    const double a = std::max(ode.rho_min(), closed.rho_min()), b = std::min(ode.rho_max(), closed.rho_max());
    if (!(a < b)) throw DomainError("ODE and closed form have no common window");
    Table table{{"rho", "f", "fprime", "k1", "kn"}, {}};
    Polyline curve{"p = " + tag(p), {}, {}};
    double deviation = 0, residual = 0;
    const double cexp = critical_exponent(n, p);
    for (int k = 0; k < samples; ++k) {
      const double rho = a + (b - a) * k / (samples - 1);
      const auto s = ode.at(rho);
      const auto kk = principal_curvatures(rho, s.fp, s.fpp);
      deviation = std::max(deviation, std::abs(s.f - closed.at(rho).f));
      residual = std::max(residual, std::abs(kk.kn - cexp * kk.k1));
      table.rows.push_back({rho, s.f, s.fp, kk.k1, kk.kn});
      curve.x.push_back(rho);
      curve.y.push_back(s.f);
    }
    write_text(out_path(ctx, "profile_p" + tag(p) + ".csv"), table.to_csv());
    curves.push_back(curve);
    const json window = {{"lo", a}, {"hi", b}};
    rep.results.push_back({"ode_vs_closed_form p=" + tag(p), deviation, tol, deviation < tol, window});
    rep.results.push_back({"criticality_residual p=" + tag(p), residual, residual_tol, residual < residual_tol, {}});
  }
  write_text(out_path(ctx, "profile.svg"),
             svg_plot(curves, "critical profiles, n = " + std::to_string(n), "rho", "f(rho)"));
  return rep;
}

RunReport cmd_eval(const Context& ctx) {
  const auto& c = ctx.config;
  RunReport rep{"eval", c, {}, 0};
  const auto& sj = object(c, "surface");
  const auto spec = make_functional(c.contains("functional") ? object(c, "functional") : json::object());
  const auto surface = make_surface(sj);
  const double value = evaluate(spec, surface.patch(2));
  json coarse = sj;
  coarse["res"] = std::max(4, integer(sj, "res", 32) / 2);
  const double estimate = std::abs(value - evaluate(spec, make_surface(coarse).patch(2)));
  const json detail = {{"quadrature_error_estimate", estimate}, {"surface", surface.id}};
  if (c.contains("expected")) {
    const double expected = number(c, "expected"), tol = number(c, "tolerance", 1e-8);
    const double rel = std::abs(value - expected) / std::max(std::abs(expected), 1e-300);
    rep.results.push_back({"value", value, tol, rel < tol, {{"relative_error", rel}, {"expected", expected},
                                                             {"quadrature_error_estimate", estimate}}});
  } else {
    rep.results.push_back({"value", value, 0, true, detail});
  }
  return rep;
}

RunReport cmd_elcheck(const Context& ctx) {
  const auto& c = ctx.config;
  RunReport rep{"elcheck", c, {}, 0};
  const auto& sj = object(c, "surface");
  const auto spec = make_functional(c.contains("functional") ? object(c, "functional") : json::object());
  const double tol = number(c, "tolerance", 1e-8);
  const auto surface = make_surface(sj);
  const auto patch = surface.patch();
  const auto res = el_residual(spec, patch, number(c, "precondition_tolerance", 1e-8));
  double worst = 0;
  for (double r : res) worst = std::max(worst, std::abs(r));
  rep.results.push_back({"el_residual", worst, tol, worst < tol, {{"surface", surface.id}}});
  if (flag(c, "willmore", false)) {
    double w = 0;
    for (double r : willmore_residual(patch)) w = std::max(w, std::abs(r));
    rep.results.push_back({"willmore_residual", w, tol, w < tol, {}});
  }
  if (text(sj, "id", "") == "revolution") {
    const auto profile = make_profile(sj);
    const double a = number(sj, "window_lo", 0.2), b = number(sj, "window_hi", 0.6);
    double alg = 0;
    for (int k = 0; k <= 100; ++k) alg = std::max(alg, std::abs(el_residual(spec, profile, a + (b - a) * k / 100)));
    rep.results.push_back({"algebraic_residual", alg, tol, alg < tol, {}});
  }
  return rep;
}

namespace {

VariationForm form_of(const json& c) {
  const auto f = text(c, "form", "printed");
  if (f == "printed") return VariationForm::Printed;
  if (f == "corrected") return VariationForm::Corrected;
  throw UsageError("form must be 'printed' or 'corrected'");
}

EvolutionCase case_of(const std::string& name, VariationForm form, const std::vector<double>& t) {
  for (const std::string prefix : {"tau_", "sigma_"}) {
    if (name.rfind(prefix, 0) == 0 && name.size() > prefix.size()) {
      const int index = std::stoi(name.substr(prefix.size()));
      return {prefix == "tau_" ? EvolutionId::tau_i : EvolutionId::sigma_r, index, t, form};
    }
  }
  try {
    return {evolution_id_from_string(name), 1, t, form};
  } catch (const SpecError& e) {
    throw UsageError(e.what());
  }
}

double min_order(const CaseReport& c) {
  double m = INFINITY;
  for (double o : c.orders) {
    if (std::isfinite(o)) m = std::min(m, o);
  }
  return m;
}

}  // namespace

RunReport cmd_varcheck(const Context& ctx) {
  const auto& c = ctx.config;
  RunReport rep{"varcheck", c, {}, 0};
  const json sj = c.contains("surface") ? object(c, "surface") : json{{"id", "bumpy-torus"}, {"s", 2}, {"res", 24}};
  const auto surface = make_surface(sj);
  const auto patch = surface.patch();
  const auto form = form_of(c);
  const auto t = number_list(c, "t_values", {1e-3, 5e-4, 2.5e-4});
  const int points = integer(c, "points", 24);
  const auto u = make_field(c.contains("u") ? object(c, "u") : json{{"seed", 1}}, patch.n());
  const auto f = make_field(c.contains("f") ? object(c, "f") : json{{"seed", 2}}, patch.n());

  std::vector<EvolutionCase> cases;
  if (!c.contains("cases") || c.at("cases") == "all") {
    cases = default_suite(patch.s(), form);
    for (auto& k : cases) k.t_values = t;
  } else {
    if (!c.at("cases").is_array()) throw UsageError("'cases' must be \"all\" or an array of names");
    for (const auto& name : c.at("cases")) cases.push_back(case_of(name.get<std::string>(), form, t));
  }
  const auto suite = verify_suite(cases, patch, u, f, surface.id, points);
  write_text(out_path(ctx, "varcheck.csv"), to_table(suite).to_csv());
  for (const auto& k : suite.cases) rep.results.push_back({k.name, min_order(k), 1.9, k.pass, to_json(k)});

  if (flag(c, "tensor_check", false)) {
    const auto tc = christoffel_tensor_check(patch, u);
    const double rel = tc.numeric_deviation / std::max(tc.scale, 1e-300);
    rep.results.push_back({"Christoffel tensor character", rel, 1e-6, rel < 1e-6,
                           {{"analytic_deviation", tc.analytic_deviation}, {"scale", tc.scale}}});
  }
  if (flag(c, "kf_three_ways", false)) {
    const auto k = kf_three_ways(patch, u, form, t, points);
    rep.results.push_back({"K_F direct vs law", min_order(k.direct_vs_law), 1.9, k.direct_vs_law.pass, {}});
    rep.results.push_back({"K_F direct vs chain", min_order(k.direct_vs_chain), 1.9, k.direct_vs_chain.pass, {}});
    rep.results.push_back({"K_F law vs chain", k.law_vs_chain, 1e-10, k.law_vs_chain < 1e-10, {}});
  }
  if (c.contains("identities")) {
    const double tol = number(c, "identity_tolerance", 1e-8);
    std::vector<IntegralIdentity> ids;
    if (c.at("identities") == "all") {
      ids = all_integral_identities();
    } else {
      for (const auto& name : c.at("identities")) ids.push_back(integral_identity_from_string(name.get<std::string>()));
    }
    const auto f1 = make_field(c.contains("f1") ? object(c, "f1") : json{{"seed", 3}}, patch.n());
    const auto f2 = make_field(c.contains("f2") ? object(c, "f2") : json{{"seed", 4}}, patch.n());
    for (auto id : ids) {
      const auto r = verify_integral_identity(id, patch, f1, f2, tol);
      rep.results.push_back({r.name, r.discrepancy, tol, r.pass, to_json(r)});
    }
  }
  return rep;
}

RunReport cmd_confcheck(const Context& ctx) {
  const auto& c = ctx.config;
  RunReport rep{"confcheck", c, {}, 0};
  const json sj =
      c.contains("surface") ? object(c, "surface") : json{{"id", "sheared-torus-3"}, {"res", 8}, {"bump", 0.1}};
  const auto surface = make_surface(sj);
  const std::string mode = text(c, "mode", "inversion");
  if (mode != "inversion" && mode != "homothety") throw UsageError("mode must be 'inversion' or 'homothety'");
  const auto m = mode == "inversion" ? ConformalMode::Inversion : ConformalMode::Homothety;
  const double tol = number(c, "tolerance", m == ConformalMode::Inversion ? 1e-6 : 1e-12);
  const auto r = conformal_density_check(surface.patch(2), integer(c, "r", 2), m, number(c, "scale", 2.0));
  rep.results.push_back({"density_deviation", r.max_density_deviation, tol, r.max_density_deviation < tol,
                         {{"nodes", r.nodes}, {"max_density", r.max_density}, {"mode", mode}}});
  rep.results.push_back({"shape_law_deviation", r.max_shape_law_deviation, tol, r.max_shape_law_deviation < tol, {}});
  return rep;
}

RunReport cmd_secondvar(const Context& ctx) {
  const auto& c = ctx.config;
  RunReport rep{"secondvar", c, {}, 0};
  const double tol = number(c, "tolerance", 1e-6);
  if (text(c, "mode", "patch") == "revolution") {
    const json pj = c.contains("profile") ? object(c, "profile") : json{{"n", 2}, {"p", 3}};
    const auto profile = make_profile(pj);
    const auto window = number_list(c, "window", {0.2, 0.6});
    if (window.size() != 2) throw UsageError("window must be [lo, hi]");
    const auto spec = FunctionalSpec::willmore(profile.p());
    for (double jd : number_list(c, "harmonics", {0, 1})) {
      const int j = static_cast<int>(jd);
      const auto terms = second_variation_revolution(profile, j, window[0], window[1]);
      const std::string name = "j=" + std::to_string(j);
      const bool sign = j == 0 ? terms.total < 0 : terms.total > 0;
      rep.results.push_back({name + " sign", terms.total, 0, sign, {{"expected", j == 0 ? "negative" : "positive"}}});
      if (j >= 1) {
        rep.results.push_back({name + " lower bound", terms.total - terms.lower_bound, 0,
                               terms.total >= terms.lower_bound,
                               {{"lower_bound", terms.lower_bound}, {"pointwise_margin", terms.pointwise_bound_margin}}});
      }
      if (profile.n() == 2) {
        const auto patch = revolution_surface(profile, window[0], window[1], 1, integer(c, "res", 24)).patch();
        const double full = second_variation_analytic(spec, patch, make_field({{"type", "harmonic"}, {"j", j}}, 2));
        const double rel = std::abs(full - terms.total) / std::max(std::abs(terms.total), 1e-300);
        rep.results.push_back({name + " patch vs reduced", rel, tol, rel < tol, {{"patch", full}, {"reduced", terms.total}}});
      }
    }
    return rep;
  }
  const auto surface = make_surface(object(c, "surface"));
  const auto patch = surface.patch();
  const auto spec = make_functional(c.contains("functional") ? object(c, "functional") : json::object());
  const auto u = make_field(c.contains("u") ? object(c, "u") : json{{"seed", 1}}, patch.n());
  const double analytic = second_variation_analytic(spec, patch, u, flag(c, "critical", false));
  const auto numeric = second_variation_numeric(spec, patch, u, number_list(c, "t_steps", {0.02, 0.01, 0.005}));
  const double rel = std::abs(analytic - numeric.value) / std::max(1.0, std::abs(numeric.value));
  rep.results.push_back({"analytic vs numeric", rel, tol, rel < tol, {{"analytic", analytic}, {"numeric", numeric.value}}});
  return rep;
}

}  // namespace cli
