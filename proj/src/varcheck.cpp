#include "willmore/varcheck.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "willmore/errors.hpp"
#include "willmore/symfunc.hpp"

namespace willmore {

namespace {

const std::map<std::string, EvolutionId>& evolution_names() {
  static const std::map<std::string, EvolutionId> names = {
      {"g", EvolutionId::g},
      {"g_inv", EvolutionId::g_inv},
      {"h", EvolutionId::h},
      {"norm_h_sq", EvolutionId::norm_h_sq},
      {"nH", EvolutionId::nH},
      {"dV", EvolutionId::dV},
      {"sH_F", EvolutionId::sH_F},
      {"norm_hF_sq", EvolutionId::norm_hF_sq},
      {"norm_hmix_sq", EvolutionId::norm_hmix_sq},
      {"lapF_f", EvolutionId::lapF_f},
      {"tau_i", EvolutionId::tau_i},
      {"sigma_r", EvolutionId::sigma_r},
      {"twoH_F", EvolutionId::twoH_F},
      {"K_F", EvolutionId::K_F},
      {"Christoffel", EvolutionId::Christoffel}};
  return names;
}

const std::map<std::string, IntegralIdentity>& identity_names() {
  static const std::map<std::string, IntegralIdentity> names = {{"green_F", IntegralIdentity::green_F},
                                                                {"symm_F", IntegralIdentity::symm_F},
                                                                {"ibp_full", IntegralIdentity::ibp_full},
                                                                {"ibp_F", IntegralIdentity::ibp_F},
                                                                {"adjoint_F", IntegralIdentity::adjoint_F}};
  return names;
}

using Flat = Eigen::VectorXd;

Flat flat(const Mat& m) { return Eigen::Map<const Flat>(m.data(), m.size()); }
Flat scalar(double x) { return Flat::Constant(1, x); }
double inner(const Mat& a, const Mat& b) { return (a.array() * b.array()).sum(); }

Mat mat_power(const Mat& a, int k) {
  Mat r = Mat::Identity(a.rows(), a.cols());
  for (int i = 0; i < k; ++i) r = r * a;
  return r;
}

double trace_power(const Mat& a, int k) { return mat_power(a, k).trace(); }

void require_s2(const PointGeometry& pg, EvolutionId id) {
  if (pg.s != 2) throw SpecError("case " + to_string(id) + " needs s = 2");
}

Flat christoffel_flat(const PointGeometry& pg) {
  const int n = pg.n;
  Flat out(n * n * n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) out[(k * n + i) * n + j] = pg.gamma[k](i, j);
    }
  }
  return out;
}

Flat quantity(const EvolutionCase& c, const PointGeometry& pg, const ScalarDerivs& f) {
  switch (c.id) {
    case EvolutionId::g: return flat(pg.g);
    case EvolutionId::g_inv: return flat(pg.g_inv);
    case EvolutionId::h: return flat(pg.h);
    case EvolutionId::norm_h_sq: return scalar(pg.norm_h_sq);
    case EvolutionId::nH: return scalar(pg.n * pg.H);
    case EvolutionId::dV: return scalar(pg.dv);
    case EvolutionId::sH_F: return scalar(pg.s * pg.H_F);
    case EvolutionId::norm_hF_sq: return scalar(pg.norm_hf_sq);
    case EvolutionId::norm_hmix_sq: return scalar(pg.norm_hmix_sq);
    case EvolutionId::lapF_f: return scalar(leaf_laplacian(pg, f));
    case EvolutionId::tau_i: return scalar(trace_power(pg.a_f, c.index));
    case EvolutionId::sigma_r:
      if (c.index < 1 || c.index > pg.s) throw SpecError("sigma_r needs 1 <= r <= s");
      return scalar(pg.sigma_f[c.index]);
    case EvolutionId::twoH_F: require_s2(pg, c.id); return scalar(2 * pg.H_F);
    case EvolutionId::K_F: require_s2(pg, c.id); return scalar(pg.sigma_f[2]);
    case EvolutionId::Christoffel: return christoffel_flat(pg);
  }
  return {};
}

// Leaf-coordinate partials of H_F from the first derivatives of g and h.
Vec leaf_dhf(const PointGeometry& pg) {
  const int s = pg.s;
  if (!pg.has_derivatives) throw DomainError("derivative data needed (third-order jets)");
  const Mat& G = pg.g_leaf_inv;
  const Mat hf = pg.h.topLeftCorner(s, s);
  Vec d(s);
  for (int k = 0; k < s; ++k) {
    const Mat dg = pg.dg[k].topLeftCorner(s, s), dh = pg.dh[k].topLeftCorner(s, s);
    d[k] = (G * dh - G * dg * G * hf).trace() / s;
  }
  return d;
}

// (div_F h_F)_l = G^{ij} (nabla^F_i h_F)_{jl}.
Vec leaf_div_hf(const PointGeometry& pg) {
  const int s = pg.s;
  const Mat& G = pg.g_leaf_inv;
  const Mat hf = pg.h.topLeftCorner(s, s);
  Vec out = Vec::Zero(s);
  for (int l = 0; l < s; ++l) {
    for (int i = 0; i < s; ++i) {
      for (int j = 0; j < s; ++j) {
        double cov = pg.dh[i](j, l);
        for (int m = 0; m < s; ++m) cov -= pg.gamma_leaf[m](i, j) * hf(m, l) + pg.gamma_leaf[m](i, l) * hf(j, m);
        out[l] += G(i, j) * cov;
      }
    }
  }
  return out;
}

// h_{jl;i} with the full connection.
double cov_dh(const PointGeometry& pg, int i, int j, int l) {
  double v = pg.dh[i](j, l);
  for (int m = 0; m < pg.n; ++m) v -= pg.gamma[m](i, j) * pg.h(m, l) + pg.gamma[m](i, l) * pg.h(j, m);
  return v;
}

Flat christoffel_variation(const PointGeometry& pg, const ScalarDerivs& u) {
  const int n = pg.n;
  if (!pg.has_derivatives) throw DomainError("derivative data needed (third-order jets)");
  Flat out(n * n * n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double v = 0;
        for (int l = 0; l < n; ++l) {
          v -= pg.g_inv(k, l) * (u.value * (cov_dh(pg, i, j, l) + cov_dh(pg, j, i, l) - cov_dh(pg, l, i, j)) +
                                 u.grad[i] * pg.h(j, l) + u.grad[j] * pg.h(i, l) - u.grad[l] * pg.h(i, j));
        }
        out[(k * n + i) * n + j] = v;
      }
    }
  }
  return out;
}

Flat analytic(const EvolutionCase& c, const PointGeometry& pg, const ScalarDerivs& ud, const ScalarDerivs& fd) {
  const int n = pg.n, s = pg.s;
  const bool printed = c.form == VariationForm::Printed;
  const double u = ud.value;
  const auto hs = hessians(pg, ud);
  const Mat ef = pg.frame.topLeftCorner(s, s);
  const Mat hess_leaf = ef.transpose() * hs.leaf * ef;  // Hess^F in the leaf frame
  const Mat& hess_r = hs.restricted;                    // Hess|_F
  const Mat& a = pg.a_f;
  const Mat& mix = pg.mix_sq;
  const double mix_norm = pg.norm_hmix_sq;
  const auto& sig = pg.sigma_f;
  switch (c.id) {
    case EvolutionId::g: return flat(-2 * u * pg.h);
    case EvolutionId::g_inv: return flat(2 * u * pg.g_inv * pg.h * pg.g_inv);
    case EvolutionId::h: return flat(hs.full - u * pg.h * pg.g_inv * pg.h);
    case EvolutionId::norm_h_sq:
      return scalar(2 * ((pg.A * pg.g_inv * hs.full).trace() + u * trace_power(pg.A, 3)));
    case EvolutionId::nH: return scalar(laplacian(pg, ud) + u * pg.norm_h_sq);
    case EvolutionId::dV: return scalar(-n * u * pg.H * pg.dv);
    case EvolutionId::sH_F:
      if (printed) return scalar(hess_leaf.trace() + u * (pg.norm_hf_sq - mix_norm));
      return scalar(hess_r.trace() + u * (pg.norm_hf_sq - mix_norm));
    case EvolutionId::norm_hF_sq:
      if (printed) return scalar(2 * inner(a, u * (a * a + mix) + hess_leaf));
      return scalar(2 * (inner(a, hess_r) + u * (trace_power(a, 3) - inner(a, mix))));
    case EvolutionId::norm_hmix_sq: {
      const Mat& b = pg.h_mix_block;
      if (printed) {
        const Mat c_perp = pg.h_frame.bottomRightCorner(n - s, n - s);
        return scalar(u * (inner(a, mix) + inner(c_perp, pg.mix_sq_perp)) + 2 * inner(b, hs.mixed));
      }
      return scalar(2 * inner(b, hs.mixed) + 4 * u * inner(a, mix));
    }
    case EvolutionId::lapF_f: {
      const Mat& G = pg.g_leaf_inv;
      const Mat hf = pg.h.topLeftCorner(s, s);
      const Vec uf = ud.grad.head(s), ff = fd.grad.head(s);
      const Mat hess_f = hessians(pg, fd).leaf;
      const Vec dhf = leaf_dhf(pg);
      const double base = 2 * u * (G * hf * G * hess_f).trace() + 2 * (G * uf).dot(hf * (G * ff)) -
                          s * pg.H_F * uf.dot(G * ff);
      if (printed) return scalar(base + s * u * dhf.dot(G * ff));
      return scalar(base + 2 * u * leaf_div_hf(pg).dot(G * ff) - s * u * dhf.dot(G * ff));
    }
    case EvolutionId::tau_i: {
      const int i = c.index;
      const Mat p = mat_power(a, i - 1);
      const double tnext = trace_power(a, i + 1);
      if (printed) return scalar(i * (inner(p, hess_leaf) + u * (tnext + inner(p, mix))));
      return scalar(i * (inner(p, hess_r) + u * (tnext - inner(p, mix))));
    }
    case EvolutionId::sigma_r: {
      const int r = c.index;
      if (r < 1 || r > s) throw SpecError("sigma_r needs 1 <= r <= s");
      const Mat t = newton_transform(a, r - 1).matrix;
      const double next = r + 1 <= s ? sig[r + 1] : 0.0;
      if (printed) return scalar(inner(t, hess_leaf) + u * (sig[1] * sig[r - 1] - (r + 1) * next + inner(t, mix)));
      return scalar(inner(t, hess_r) + u * (sig[1] * sig[r] - (r + 1) * next - inner(t, mix)));
    }
    case EvolutionId::twoH_F: {
      require_s2(pg, c.id);
      const double hf = pg.H_F, kf = sig[2];
      const double lap = printed ? hess_leaf.trace() : hess_r.trace();
      return scalar(lap + u * (4 * hf * hf - 2 * kf - mix_norm));
    }
    case EvolutionId::K_F: {
      require_s2(pg, c.id);
      const double hf = pg.H_F, kf = sig[2];
      if (printed) {
        return scalar(2 * hf * hess_leaf.trace() - inner(a, u * mix + hess_leaf) + 2 * u * hf * (kf - mix_norm));
      }
      const Mat t1 = newton_transform(a, 1).matrix;
      return scalar(inner(t1, hess_r) + u * (sig[1] * kf - inner(t1, mix)));
    }
    case EvolutionId::Christoffel: return christoffel_variation(pg, ud);
  }
  return {};
}

}  // namespace

std::string to_string(EvolutionId id) {
  for (const auto& [name, value] : evolution_names()) {
    if (value == id) return name;
  }
  return "?";
}

EvolutionId evolution_id_from_string(const std::string& name) {
  const auto it = evolution_names().find(name);
  if (it == evolution_names().end()) throw SpecError("unknown evolution case: " + name);
  return it->second;
}

const std::vector<EvolutionId>& all_evolution_ids() {
  static const std::vector<EvolutionId> ids = {
      EvolutionId::g,          EvolutionId::g_inv,        EvolutionId::h,      EvolutionId::norm_h_sq,
      EvolutionId::nH,         EvolutionId::dV,           EvolutionId::sH_F,   EvolutionId::norm_hF_sq,
      EvolutionId::norm_hmix_sq, EvolutionId::lapF_f,     EvolutionId::tau_i,  EvolutionId::sigma_r,
      EvolutionId::twoH_F,     EvolutionId::K_F,          EvolutionId::Christoffel};
  return ids;
}

std::string to_string(IntegralIdentity id) {
  for (const auto& [name, value] : identity_names()) {
    if (value == id) return name;
  }
  return "?";
}

IntegralIdentity integral_identity_from_string(const std::string& name) {
  const auto it = identity_names().find(name);
  if (it == identity_names().end()) throw SpecError("unknown integral identity: " + name);
  return it->second;
}

const std::vector<IntegralIdentity>& all_integral_identities() {
  static const std::vector<IntegralIdentity> ids = {IntegralIdentity::green_F, IntegralIdentity::symm_F,
                                                    IntegralIdentity::ibp_full, IntegralIdentity::ibp_F,
                                                    IntegralIdentity::adjoint_F};
  return ids;
}

namespace {

std::string case_name(const EvolutionCase& c) {
  if (c.id == EvolutionId::tau_i) return "tau_" + std::to_string(c.index);
  if (c.id == EvolutionId::sigma_r) return "sigma_" + std::to_string(c.index);
  return to_string(c.id);
}

std::string form_name(VariationForm f) { return f == VariationForm::Printed ? "printed" : "corrected"; }

void check_ladder(const std::vector<double>& t) {
  if (t.size() < 2) throw ValidationError("need at least two t values");
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!(t[k] > 0)) throw ValidationError("t values must be positive");
    if (k > 0 && !(t[k] < t[k - 1])) throw ValidationError("t values must be strictly decreasing");
  }
}

std::vector<int> sample_nodes(const FoliatedPatch& patch, int points) {
  const auto& grid = patch.grid();
  const int size = grid.size();
  const int count = std::max(1, std::min(points, size));
  std::vector<int> out;
  for (int k = 0; k < count; ++k) {
    // golden-ratio stride spreads the samples over all axes
    const int node = static_cast<int>(std::fmod((k + 0.5) * 0.6180339887498949, 1.0) * size);
    if (grid.evaluable(node)) out.push_back(node);
  }
  if (out.empty()) throw DomainError("no evaluable sample nodes");
  return out;
}

PointGeometry base_geometry(const FoliatedPatch& patch, int node) {
  const auto& pg = patch.at(node);
  if (pg.has_derivatives) return pg;
  return geometry_at(*patch.immersion(), patch.s(), pg.x, patch.orientation(), 3);
}

using AnalyticFn = std::function<Flat(const PointGeometry&, const ScalarDerivs&, const ScalarDerivs&)>;
using QuantityFn = std::function<Flat(const PointGeometry&, const ScalarDerivs&)>;

void finish(CaseReport& rep) {
  const auto& t = rep.t_values;
  for (std::size_t k = 0; k + 1 < rep.errors.size(); ++k) {
    rep.orders.push_back(std::log(rep.errors[k] / rep.errors[k + 1]) / std::log(t[k] / t[k + 1]));
  }
  const double floor = 1e-10 * std::max(1.0, rep.analytic_scale);
  if (rep.errors.back() <= floor) {
    rep.pass = true;
    rep.note = "error at roundoff level";
  } else {
    rep.pass = *std::min_element(rep.orders.begin(), rep.orders.end()) >= 1.9;
    if (!rep.pass) rep.note = "no second-order convergence to the analytic side";
  }
}

CaseReport run_case(const std::string& name, VariationForm form, const std::vector<double>& t_values,
                    const FoliatedPatch& patch, const JetScalar& u, const JetScalar& f, int points,
                    const QuantityFn& q, const AnalyticFn& rhs) {
  check_ladder(t_values);
  CaseReport rep;
  rep.name = name;
  rep.form = form_name(form);
  rep.t_values = t_values;
  const int s = patch.s(), orient = patch.orientation();
  const auto nodes = sample_nodes(patch, points);
  rep.points = static_cast<int>(nodes.size());
  std::vector<std::shared_ptr<NormalVariation>> plus, minus;
  for (double t : t_values) {
    plus.push_back(std::make_shared<NormalVariation>(patch.immersion(), u, t, orient));
    minus.push_back(std::make_shared<NormalVariation>(patch.immersion(), u, -t, orient));
  }
  rep.errors.assign(t_values.size(), 0.0);
  double rich = 0;
  std::vector<NodeSample> samples;
  const double q2 = std::pow(t_values[t_values.size() - 2] / t_values.back(), 2);
  for (int node : nodes) {
    const auto pg = base_geometry(patch, node);
    const auto ud = derivs_of(u, pg.x), fd = derivs_of(f, pg.x);
    const Flat ana = rhs(pg, ud, fd);
    rep.analytic_scale = std::max(rep.analytic_scale, ana.cwiseAbs().maxCoeff());
    std::vector<Flat> num;
    for (std::size_t k = 0; k < t_values.size(); ++k) {
      const auto gp = geometry_at(*plus[k], s, pg.x, orient, 2);
      const auto gm = geometry_at(*minus[k], s, pg.x, orient, 2);
      num.push_back((q(gp, fd) - q(gm, fd)) / (2 * t_values[k]));
      rep.errors[k] = std::max(rep.errors[k], (num.back() - ana).cwiseAbs().maxCoeff());
    }
    samples.push_back({node, std::vector<double>(num.back().data(), num.back().data() + num.back().size()),
                       std::vector<double>(ana.data(), ana.data() + ana.size())});
    const Flat r = (q2 * num.back() - num[num.size() - 2]) / (q2 - 1);
    rich = std::max(rich, (r - ana).cwiseAbs().maxCoeff());
  }
  rep.richardson_error = rich;
  finish(rep);
  if (!rep.pass) rep.diagnostics = std::move(samples);
  return rep;
}

Mat sym_outer(const Vec& a, const Vec& b) { return 0.5 * (a * b.transpose() + b * a.transpose()); }

}  // namespace

bool ConvergenceReport::all_pass() const {
  return std::all_of(cases.begin(), cases.end(), [](const CaseReport& c) { return c.pass; });
}

std::vector<EvolutionCase> default_suite(int s, VariationForm form) {
  std::vector<EvolutionCase> out;
  for (EvolutionId id : all_evolution_ids()) {
    if ((id == EvolutionId::twoH_F || id == EvolutionId::K_F) && s != 2) continue;
    if (id == EvolutionId::tau_i) {
      for (int i = 1; i <= 3; ++i) out.push_back({id, i, {1e-3, 5e-4, 2.5e-4}, form});
    } else if (id == EvolutionId::sigma_r) {
      for (int r = 1; r <= s; ++r) out.push_back({id, r, {1e-3, 5e-4, 2.5e-4}, form});
    } else {
      out.push_back({id, 1, {1e-3, 5e-4, 2.5e-4}, form});
    }
  }
  return out;
}

CaseReport verify_evolution(const EvolutionCase& c, const FoliatedPatch& patch, const JetScalar& u,
                            const JetScalar& f, int points) {
  if ((c.id == EvolutionId::twoH_F || c.id == EvolutionId::K_F) && patch.s() != 2) {
    throw SpecError("case " + to_string(c.id) + " needs s = 2");
  }
  if (c.id == EvolutionId::tau_i && c.index < 1) throw SpecError("tau_i needs i >= 1");
  if (c.id == EvolutionId::sigma_r && (c.index < 1 || c.index > patch.s())) {
    throw SpecError("sigma_r needs 1 <= r <= s");
  }
  return run_case(
      case_name(c), c.form, c.t_values, patch, u, f, points,
      [&c](const PointGeometry& pg, const ScalarDerivs& fd) { return quantity(c, pg, fd); },
      [&c](const PointGeometry& pg, const ScalarDerivs& ud, const ScalarDerivs& fd) { return analytic(c, pg, ud, fd); });
}

ConvergenceReport verify_suite(const std::vector<EvolutionCase>& cases, const FoliatedPatch& patch,
                               const JetScalar& u, const JetScalar& f, const std::string& surface, int points) {
  ConvergenceReport rep;
  rep.surface = surface;
  for (const auto& c : cases) rep.cases.push_back(verify_evolution(c, patch, u, f, points));
  return rep;
}

KfConsistency kf_three_ways(const FoliatedPatch& patch, const JetScalar& u, VariationForm form,
                            const std::vector<double>& t_values, int points) {
  if (patch.s() != 2) throw SpecError("K_F needs s = 2");
  const EvolutionCase kf{EvolutionId::K_F, 1, t_values, form};
  const EvolutionCase two_h{EvolutionId::twoH_F, 1, t_values, form};
  const EvolutionCase hf_sq{EvolutionId::norm_hF_sq, 1, t_values, form};
  const JetScalar f = [](const JetVec&) { return Jet(0.0); };
  auto q = [&](const PointGeometry& pg, const ScalarDerivs& fd) { return quantity(kf, pg, fd); };
  auto law = [&](const PointGeometry& pg, const ScalarDerivs& ud, const ScalarDerivs& fd) {
    return analytic(kf, pg, ud, fd);
  };
  auto chain = [&](const PointGeometry& pg, const ScalarDerivs& ud, const ScalarDerivs& fd) {
    return Flat(2 * pg.H_F * analytic(two_h, pg, ud, fd) - 0.5 * analytic(hf_sq, pg, ud, fd));
  };
  KfConsistency out;
  out.direct_vs_law = run_case("K_F law", form, t_values, patch, u, f, points, q, law);
  out.direct_vs_chain = run_case("K_F chain", form, t_values, patch, u, f, points, q, chain);
  for (int node : sample_nodes(patch, points)) {
    const auto pg = base_geometry(patch, node);
    const auto ud = derivs_of(u, pg.x), fd = derivs_of(f, pg.x);
    out.law_vs_chain = std::max(out.law_vs_chain, (law(pg, ud, fd) - chain(pg, ud, fd)).cwiseAbs().maxCoeff());
  }
  return out;
}

TensorCheck christoffel_tensor_check(const FoliatedPatch& patch, const JetScalar& u, double amplitude, double t,
                                     int points) {
  const int n = patch.n(), s = patch.s(), orient = patch.orientation();
  if (!(std::abs(amplitude) < 1)) throw DomainError("chart change must be a diffeomorphism (|amplitude| < 1)");
  const JetMap phi = [amplitude](const JetVec& y) {
    JetVec x(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) x[k] = y[k] + amplitude * sin(y[k]);
    return x;
  };
  auto chart = std::make_shared<Reparametrized>(patch.immersion(), phi);
  const JetScalar uy = [u, phi](const JetVec& y) { return u(phi(y)); };
  NormalVariation plus(chart, uy, t, orient), minus(chart, uy, -t, orient);
  const EvolutionCase gamma{EvolutionId::Christoffel};
  TensorCheck out;
  for (int node : sample_nodes(patch, points)) {
    const Vec y = patch.grid().point(node);
    Vec x(n), jac(n);
    for (int k = 0; k < n; ++k) {
      x[k] = y[k] + amplitude * std::sin(y[k]);
      jac[k] = 1 + amplitude * std::cos(y[k]);
    }
    const auto px = geometry_at(*patch.immersion(), s, x, orient, 3);
    const Flat dx = christoffel_variation(px, derivs_of(u, x));
    Flat pushed(n * n * n);
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) pushed[(k * n + i) * n + j] = dx[(k * n + i) * n + j] * jac[i] * jac[j] / jac[k];
      }
    }
    const auto py = geometry_at(*chart, s, y, orient, 3);
    const Flat dy = christoffel_variation(py, derivs_of(uy, y));
    const Flat num = (christoffel_flat(geometry_at(plus, s, y, orient, 2)) -
                     christoffel_flat(geometry_at(minus, s, y, orient, 2))) / (2 * t);
    out.scale = std::max(out.scale, pushed.cwiseAbs().maxCoeff());
    out.analytic_deviation = std::max(out.analytic_deviation, (dy - pushed).cwiseAbs().maxCoeff());
    out.numeric_deviation = std::max(out.numeric_deviation, (num - pushed).cwiseAbs().maxCoeff());
  }
  return out;
}

IdentityReport verify_integral_identity(IntegralIdentity id, const FoliatedPatch& patch, const JetScalar& f1,
                                        const JetScalar& f2, double tol, double precondition_tol) {
  const auto& grid = patch.grid();
  const int size = grid.size(), s = patch.s(), n = patch.n();
  IdentityReport rep;
  rep.name = to_string(id);
  for (int i = 0; i < size; ++i) {
    if (grid.evaluable(i)) rep.projector_divergence = std::max(rep.projector_divergence, div_projector(patch, i).norm);
  }
  rep.applicable = rep.projector_divergence < precondition_tol || id == IntegralIdentity::ibp_full;

  std::vector<ScalarDerivs> d1(size), d2(size);
  for (int i = 0; i < size; ++i) {
    d1[i] = derivs_of(f1, patch.at(i).x);
    d2[i] = derivs_of(f2, patch.at(i).x);
  }
  std::vector<double> lhs(size, 0.0), rhs(size, 0.0);
  switch (id) {
    case IntegralIdentity::green_F:
    case IntegralIdentity::symm_F:
      for (int i = 0; i < size; ++i) {
        const auto& pg = patch.at(i);
        lhs[i] = d1[i].value * leaf_laplacian(pg, d2[i]);
        if (id == IntegralIdentity::symm_F) {
          rhs[i] = d2[i].value * leaf_laplacian(pg, d1[i]);
        } else {
          rhs[i] = -d1[i].grad.head(s).dot(pg.g_leaf_inv * d2[i].grad.head(s));
        }
      }
      break;
    case IntegralIdentity::ibp_full:
    case IntegralIdentity::ibp_F: {
      const bool full = id == IntegralIdentity::ibp_full;
      const int d = full ? n : s;
      std::vector<Mat> b(size);
      for (int i = 0; i < size; ++i) {
        const Mat whole = d1[i].value * patch.at(i).h + sym_outer(d1[i].grad, d2[i].grad);
        b[i] = whole.topLeftCorner(d, d);
      }
      const auto dd = double_divergence(patch, b, d);
      for (int i = 0; i < size; ++i) {
        const auto& pg = patch.at(i);
        const auto hs = hessians(pg, d2[i]);
        const Mat& ginv = full ? pg.g_inv : pg.g_leaf_inv;
        lhs[i] = (ginv * b[i] * ginv * (full ? hs.full : hs.leaf)).trace();
        rhs[i] = d2[i].value * dd[i];
      }
      break;
    }
    case IntegralIdentity::adjoint_F: {
      std::vector<Vec> sharp(size);
      for (int i = 0; i < size; ++i) {
        const auto& pg = patch.at(i);
        const Vec phi = d1[i].value * d2[i].grad.head(s);
        sharp[i] = pg.g_leaf_inv * phi;
        lhs[i] = sharp[i].dot(d2[i].grad.head(s));
      }
      const auto div = leaf_divergence(patch, sharp);
      for (int i = 0; i < size; ++i) rhs[i] = -d2[i].value * div[i];
      break;
    }
  }
  std::vector<double> wl(size), wr(size), wa(size);
  for (int i = 0; i < size; ++i) {
    const double dv = patch.at(i).dv;
    wl[i] = lhs[i] * dv;
    wr[i] = rhs[i] * dv;
    wa[i] = std::abs(lhs[i]) * dv;
  }
  rep.lhs = grid.integrate(wl);
  rep.rhs = grid.integrate(wr);
  rep.discrepancy = std::abs(rep.lhs - rep.rhs) / std::max(1.0, grid.integrate(wa));
  rep.pass = rep.applicable && rep.discrepancy < tol;
  return rep;
}

}  // namespace willmore
