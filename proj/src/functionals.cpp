#include "willmore/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "willmore/errors.hpp"
#include "willmore/quadrature.hpp"
#include "willmore/symfunc.hpp"

namespace willmore {

namespace {

bool is_integer(double e) { return e == std::floor(e); }

// base^e; non-integer exponents need base > eps (base ~ 0 allowed when e >= 1).
double power(double base, double e, const char* what) {
  if (is_integer(e)) return std::pow(base, e);
  if (base > kPowerBaseEps) return std::pow(base, e);
  if (base >= -kPowerBaseEps && e >= 1.0) return 0.0;
  throw DomainError(std::string(what) + ": non-integer power of a non-positive quantity");
}

double sphere_area(int dim) {
  return 2.0 * std::pow(std::numbers::pi, (dim + 1) / 2.0) / std::tgamma((dim + 1) / 2.0);
}

Mat mat_power(const Mat& a, int k) {
  Mat r = Mat::Identity(a.rows(), a.cols());
  for (int i = 0; i < k; ++i) r = r * a;
  return r;
}

double inner(const Mat& a, const Mat& b) { return (a.array() * b.array()).sum(); }

std::vector<double> tau_of(const Mat& a_f, int count) {
  std::vector<double> tau(count + 2, 0.0);  // tau[i] = tr A^i, i = 0..count+1
  Mat p = Mat::Identity(a_f.rows(), a_f.cols());
  for (int i = 0; i <= count + 1; ++i) {
    tau[i] = p.trace();
    p = p * a_f;
  }
  return tau;
}

std::vector<double> sym_args(const FunctionalSpec& spec, const PointGeometry& pg) {
  switch (spec.kind) {
    case FunctionalKind::WF:
      return {pg.sigma_f.begin() + 1, pg.sigma_f.end()};
    case FunctionalKind::JF: {
      const auto t = tau_of(pg.a_f, pg.s);
      return {t.begin() + 1, t.begin() + 1 + pg.s};
    }
    case FunctionalKind::WF_of_HF:
      return {pg.H_F};
    case FunctionalKind::WF_HK:
      return {pg.H_F, pg.sigma_f[2]};
    default:
      return {};
  }
}

// F and its partials in sigma (tau_form = false) or tau variables, index r - 1.
struct SymDerivs {
  double F = 0;
  bool tau_form = false;
  std::vector<double> d;
};

double q_gradient(std::span<const double> sigma, int s, int r, int j) {
  const double s1 = sigma[1] / s;
  auto S = [&](int k) { return sigma[k] / binomial(s, k); };
  double g = 0;
  for (int k = 0; k <= r; ++k) {
    const double sign = (k % 2 == 0) ? -1.0 : 1.0;
    const double c = sign * binomial(r, k);
    if (j == 1 && r - k > 0) g += c * (r - k) * std::pow(s1, r - k - 1) / s * S(k);
    if (k == j) g += c * std::pow(s1, r - k) / binomial(s, j);
  }
  return g;
}

SymDerivs sym_derivs(const FunctionalSpec& spec, const PointGeometry& pg) {
  const int s = pg.s, n = pg.n;
  SymDerivs out;
  switch (spec.kind) {
    case FunctionalKind::W_nps:
      out.F = power(pg.H_F, spec.p, "H_F^p");
      out.d = {spec.p / s * power(pg.H_F, spec.p - 1, "H_F^{p-1}")};
      break;
    case FunctionalKind::J_nps:
      out.tau_form = true;
      out.F = power(pg.norm_hf_sq, spec.p / 2, "|h_F|^p");
      out.d.assign(std::max(s, 2), 0.0);
      out.d[1] = spec.p / 2 * power(pg.norm_hf_sq, spec.p / 2 - 1, "|h_F|^{p-2}");
      break;
    case FunctionalKind::WF:
    case FunctionalKind::JF: {
      const auto args = sym_args(spec, pg);
      out.tau_form = spec.kind == FunctionalKind::JF;
      out.F = spec.F(args);
      out.d = spec.dF(args);
      if (static_cast<int>(out.d.size()) != s) throw SpecError("partials must have length s");
      break;
    }
    case FunctionalKind::WF_of_HF: {
      const double a[1] = {pg.H_F};
      out.F = spec.F(a);
      out.d = {spec.dF(a)[0] / s};
      break;
    }
    case FunctionalKind::WF_HK: {
      if (s != 2) throw SpecError("WF_HK needs s = 2");
      const auto args = sym_args(spec, pg);
      out.F = spec.F(args);
      const auto g = spec.dF(args);
      out.d = {g[0] / 2, g[1]};
      break;
    }
    case FunctionalKind::W_conf: {
      if (spec.r < 2 || spec.r > s) throw SpecError("W_conf needs 2 <= r <= s");
      const double q = q_r(pg.sigma_f, s, spec.r);
      const double e = static_cast<double>(n) / spec.r;
      out.F = power(q, e, "Q_r^{n/r}");
      const double outer = e * power(q, e - 1, "Q_r^{n/r-1}");
      out.d.assign(s, 0.0);
      for (int j = 1; j <= spec.r; ++j) out.d[j - 1] = outer * q_gradient(pg.sigma_f, s, spec.r, j);
      break;
    }
  }
  return out;
}

double central_partial(const SymFn& f, std::vector<double> x, int i) {
  const double h = 1e-5 * std::max(1.0, std::abs(x[i]));
  x[i] += h;
  const double fp = f(x);
  x[i] -= 2 * h;
  const double fm = f(x);
  return (fp - fm) / (2 * h);
}

void spot_check(const FunctionalSpec& spec, int dim) {
  std::vector<double> at(dim);
  for (int i = 0; i < dim; ++i) at[i] = 0.7 - 0.23 * i;
  const double m = partials_mismatch(spec, at);
  if (m > 1e-6) throw ValidationError("supplied partials disagree with F (mismatch " + std::to_string(m) + ")");
}

}  // namespace

std::string to_string(FunctionalKind kind) {
  switch (kind) {
    case FunctionalKind::W_nps: return "W_nps";
    case FunctionalKind::J_nps: return "J_nps";
    case FunctionalKind::WF: return "WF";
    case FunctionalKind::JF: return "JF";
    case FunctionalKind::WF_of_HF: return "WF_of_HF";
    case FunctionalKind::W_conf: return "W_conf";
    case FunctionalKind::WF_HK: return "WF_HK";
  }
  return "?";
}

FunctionalKind functional_kind_from_string(const std::string& name) {
  static const std::map<std::string, FunctionalKind> names = {
      {"W_nps", FunctionalKind::W_nps},       {"J_nps", FunctionalKind::J_nps},   {"WF", FunctionalKind::WF},
      {"JF", FunctionalKind::JF},             {"WF_of_HF", FunctionalKind::WF_of_HF},
      {"W_conf", FunctionalKind::W_conf},     {"WF_HK", FunctionalKind::WF_HK}};
  const auto it = names.find(name);
  if (it == names.end()) throw SpecError("unknown functional kind: " + name);
  return it->second;
}

FunctionalSpec FunctionalSpec::willmore(double p) {
  FunctionalSpec s;
  s.kind = FunctionalKind::W_nps;
  s.p = p;
  return s;
}

FunctionalSpec FunctionalSpec::norm_power(double p) {
  FunctionalSpec s;
  s.kind = FunctionalKind::J_nps;
  s.p = p;
  return s;
}

FunctionalSpec FunctionalSpec::sigma(SymFn f, SymGrad df, int s) {
  FunctionalSpec out;
  out.kind = FunctionalKind::WF;
  out.F = std::move(f);
  out.dF = std::move(df);
  spot_check(out, s);
  return out;
}

FunctionalSpec FunctionalSpec::tau(SymFn f, SymGrad df, int s) {
  FunctionalSpec out = sigma(std::move(f), std::move(df), s);
  out.kind = FunctionalKind::JF;
  return out;
}

FunctionalSpec FunctionalSpec::of_hf(ScalarFn f, ScalarFn df, ScalarFn d2f) {
  FunctionalSpec out;
  out.kind = FunctionalKind::WF_of_HF;
  out.F = [f](std::span<const double> a) { return f(a[0]); };
  out.dF = [df](std::span<const double> a) { return std::vector<double>{df(a[0])}; };
  out.d2F = d2f;
  spot_check(out, 1);
  for (double x : {0.7, -0.4}) {
    const double h = 1e-5;
    const double fd = (df(x + h) - df(x - h)) / (2 * h);
    if (std::abs(fd - d2f(x)) > 1e-6 * std::max(1.0, std::abs(fd))) {
      throw ValidationError("supplied F'' disagrees with F'");
    }
  }
  return out;
}

FunctionalSpec FunctionalSpec::conformal(int r) {
  if (r < 2) throw SpecError("W_conf needs r >= 2 (Q_1 vanishes identically)");
  FunctionalSpec out;
  out.kind = FunctionalKind::W_conf;
  out.r = r;
  return out;
}

FunctionalSpec FunctionalSpec::of_hk(SymFn f, SymGrad df) {
  FunctionalSpec out;
  out.kind = FunctionalKind::WF_HK;
  out.F = std::move(f);
  out.dF = std::move(df);
  spot_check(out, 2);
  return out;
}

double partials_mismatch(const FunctionalSpec& spec, std::span<const double> at) {
  if (!spec.F || !spec.dF) throw SpecError("functional has no supplied F");
  std::vector<double> x(at.begin(), at.end());
  const auto g = spec.dF(x);
  if (g.size() != x.size()) throw ValidationError("partials have the wrong length");
  double worst = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double fd = central_partial(spec.F, x, static_cast<int>(i));
    worst = std::max(worst, std::abs(fd - g[i]) / std::max(1.0, std::abs(fd)));
  }
  return worst;
}

double density(const FunctionalSpec& spec, const PointGeometry& pg) { return sym_derivs(spec, pg).F; }

double evaluate(const FunctionalSpec& spec, const FoliatedPatch& patch) {
  const auto& grid = patch.grid();
  std::vector<double> f(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const auto& pg = patch.at(i);
    f[i] = density(spec, pg) * pg.dv;
  }
  return grid.integrate(f);
}

double evaluate(const FunctionalSpec& spec, const RevolutionProfile& profile, double rho_lo, double rho_hi) {
  const int n = profile.n();
  const auto gl = gauss_legendre(64, rho_lo, rho_hi);
  double sum = 0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    const double rho = gl.nodes[i];
    const auto smp = profile.at(rho);
    const auto v = revolution_invariants(n, rho, smp.fp, smp.fpp);
    PointGeometry pg;
    pg.n = n;
    pg.s = n - 1;
    pg.H = v.H;
    pg.H_F = v.H_F;
    pg.norm_hf_sq = v.norm_hf_sq;
    pg.norm_h_sq = v.norm_h_sq;
    pg.a_f = Mat::Identity(n - 1, n - 1) * v.k1;
    pg.sigma_f = elementary_symmetric(SymmetricSpectrum::of(pg.a_f));
    sum += gl.weights[i] * density(spec, pg) * v.area_density;
  }
  return sum * sphere_area(n - 1);
}

namespace {

// Pointwise quantities shared by the variation formulas (leaf frame).
struct LocalData {
  Mat hess_r;      // full Hessian on TF
  Mat hess_leaf;   // leaf Hessian
  Mat hess_mixed;  // s x (n-s)
  double lap_f = 0, lap = 0, u = 0;
  Vec grad_f;      // e_i(u), leaf frame
};

LocalData local_data(const PointGeometry& pg, const ScalarDerivs& u) {
  const int s = pg.s;
  const auto hs = hessians(pg, u);
  LocalData d;
  const Mat ef = pg.frame.topLeftCorner(s, s);
  d.hess_r = hs.restricted;
  d.hess_leaf = ef.transpose() * hs.leaf * ef;
  d.hess_mixed = hs.mixed;
  d.lap_f = d.hess_leaf.trace();
  d.lap = (pg.g_inv * hs.full).trace();
  d.u = u.value;
  d.grad_f = (pg.frame.transpose() * u.grad).head(s);
  return d;
}

double corrected_density(const FunctionalSpec& spec, const PointGeometry& pg, const LocalData& d) {
  const auto sd = sym_derivs(spec, pg);
  const int s = pg.s;
  double total = -pg.n * d.u * pg.H * sd.F;
  if (!sd.tau_form) {
    const auto& sig = pg.sigma_f;
    for (int r = 1; r <= static_cast<int>(sd.d.size()); ++r) {
      if (sd.d[r - 1] == 0.0) continue;
      const Mat t = newton_transform(pg.a_f, r - 1).matrix;
      const double next = r + 1 <= s ? sig[r + 1] : 0.0;
      const double ds = inner(t, d.hess_r) + d.u * (sig[1] * sig[r] - (r + 1) * next - inner(t, pg.mix_sq));
      total += sd.d[r - 1] * ds;
    }
  } else {
    const auto tau = tau_of(pg.a_f, static_cast<int>(sd.d.size()));
    for (int i = 1; i <= static_cast<int>(sd.d.size()); ++i) {
      if (sd.d[i - 1] == 0.0) continue;
      const Mat a = mat_power(pg.a_f, i - 1);
      const double dt = i * (inner(a, d.hess_r) + d.u * (tau[i + 1] - inner(a, pg.mix_sq)));
      total += sd.d[i - 1] * dt;
    }
  }
  return total;
}

double printed_density(const FunctionalSpec& spec, const PointGeometry& pg, const LocalData& d) {
  const int s = pg.s, n = pg.n;
  const double u = d.u, H = pg.H, x = pg.norm_hf_sq - pg.norm_hmix_sq;
  const auto& sig = pg.sigma_f;
  switch (spec.kind) {
    case FunctionalKind::W_nps: {
      const double hp = power(pg.H_F, spec.p - 1, "H_F^{p-1}");
      return hp * (spec.p / s * (d.lap_f + u * x) - n * u * pg.H_F * H);
    }
    case FunctionalKind::J_nps: {
      const double np = power(pg.norm_hf_sq, spec.p / 2 - 1, "|h_F|^{p-2}");
      const Mat t = u * (pg.a_f * pg.a_f + pg.mix_sq) + d.hess_leaf;
      return np * (spec.p * inner(pg.a_f, t) - n * u * pg.norm_hf_sq * H);
    }
    case FunctionalKind::WF_of_HF: {
      const double a[1] = {pg.H_F};
      const double f = spec.F(a), fp = spec.dF(a)[0];
      return fp / s * d.lap_f + (fp / s * x - n * f * H) * u;
    }
    case FunctionalKind::WF_HK: {
      if (s != 2) throw SpecError("WF_HK needs s = 2");
      const double hf = pg.H_F, kf = sig[2];
      const double a[2] = {hf, kf};
      const double f = spec.F(a);
      const auto g = spec.dF(a);
      const double dk = 2 * hf * d.lap_f - inner(pg.a_f, u * pg.mix_sq + d.hess_leaf) +
                        2 * u * hf * (kf - pg.norm_hmix_sq);
      return 0.5 * g[0] * (d.lap_f + u * (4 * hf * hf - 2 * kf - pg.norm_hmix_sq)) + g[1] * dk - n * u * H * f;
    }
    case FunctionalKind::W_conf: {
      if (spec.r != 2) throw SpecError("printed conformal variation is stated for r = 2 only");
      if (s < 2) throw SpecError("W_conf needs s >= 2");
      const double q = q_r(sig, s, 2);
      const double e = n / 2.0;
      const double qp = power(q, e - 1, "Q_2^{n/2-1}");
      const double s3 = s >= 3 ? sig[3] : 0.0;
      const Mat t1 = newton_transform(pg.a_f, 1).matrix;
      // sigma_1^2 - 2 sigma_2 where the printed form has sigma_1 - 2 sigma_2.
      const double bracket = 2 * (s - 1) * sig[1] * (d.lap_f + u * (sig[1] * sig[1] - 2 * sig[2] + pg.norm_hmix_sq)) -
                             2 * s * (inner(t1, d.hess_leaf) + u * (sig[1] * sig[2] - 3 * s3 + inner(t1, pg.mix_sq)));
      return e * qp * (bracket / (s * s * (s - 1.0)) - 2 * q * u * H);
    }
    case FunctionalKind::WF:
    case FunctionalKind::JF: {
      const auto sd = sym_derivs(spec, pg);
      double total = -n * u * H * sd.F;
      if (!sd.tau_form) {
        for (int r = 1; r <= s; ++r) {
          const Mat t = newton_transform(pg.a_f, r - 1).matrix;
          const double next = r + 1 <= s ? sig[r + 1] : 0.0;
          total += sd.d[r - 1] * (inner(t, d.hess_leaf) + u * (sig[1] * sig[r - 1] - (r + 1) * next + inner(t, pg.mix_sq)));
        }
      } else {
        const auto tau = tau_of(pg.a_f, s);
        for (int i = 1; i <= s; ++i) {
          const Mat a = mat_power(pg.a_f, i - 1);
          total += sd.d[i - 1] / i * (inner(a, d.hess_leaf) + u * (tau[i + 1] + inner(a, pg.mix_sq)));
        }
      }
      return total;
    }
  }
  return 0;
}

FoliatedPatch varied_patch(const FoliatedPatch& patch, const JetScalar& u, double t) {
  auto imm = std::make_shared<NormalVariation>(patch.immersion(), u, t, patch.orientation());
  return FoliatedPatch(imm, patch.s(), patch.grid_ptr(), PatchOptions{patch.orientation(), 2});
}

double richardson(const std::vector<double>& t, const std::vector<double>& est) {
  if (est.size() < 2) return est.back();
  const std::size_t k = est.size() - 1;
  const double q = t[k - 1] / t[k];
  return (q * q * est[k] - est[k - 1]) / (q * q - 1);
}

}  // namespace

double first_variation_density(const FunctionalSpec& spec, const PointGeometry& pg, const ScalarDerivs& u,
                               VariationForm form) {
  const auto d = local_data(pg, u);
  return form == VariationForm::Corrected ? corrected_density(spec, pg, d) : printed_density(spec, pg, d);
}

double first_variation_analytic(const FunctionalSpec& spec, const FoliatedPatch& patch, const JetScalar& u,
                                VariationForm form) {
  const auto& grid = patch.grid();
  std::vector<double> f(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const auto& pg = patch.at(i);
    f[i] = first_variation_density(spec, pg, derivs_of(u, pg.x), form) * pg.dv;
  }
  return grid.integrate(f);
}

FiniteDifferenceResult first_variation_numeric(const FunctionalSpec& spec, const FoliatedPatch& patch,
                                               const JetScalar& u, const std::vector<double>& t_steps) {
  if (t_steps.empty()) throw ValidationError("need at least one step");
  FiniteDifferenceResult out;
  out.steps = t_steps;
  for (double t : t_steps) {
    const double plus = evaluate(spec, varied_patch(patch, u, t));
    const double minus = evaluate(spec, varied_patch(patch, u, -t));
    out.estimates.push_back((plus - minus) / (2 * t));
  }
  out.value = richardson(out.steps, out.estimates);
  return out;
}

FiniteDifferenceResult second_variation_numeric(const FunctionalSpec& spec, const FoliatedPatch& patch,
                                                const JetScalar& u, const std::vector<double>& t_steps) {
  if (t_steps.empty()) throw ValidationError("need at least one step");
  FiniteDifferenceResult out;
  out.steps = t_steps;
  const double w0 = evaluate(spec, patch);
  for (double t : t_steps) {
    const double plus = evaluate(spec, varied_patch(patch, u, t));
    const double minus = evaluate(spec, varied_patch(patch, u, -t));
    out.estimates.push_back((plus - 2 * w0 + minus) / (t * t));
  }
  out.value = richardson(out.steps, out.estimates);
  return out;
}

namespace {

void require_transversally_harmonic(const FoliatedPatch& patch, double tol) {
  const auto& grid = patch.grid();
  for (int i = 0; i < grid.size(); ++i) {
    if (!grid.evaluable(i)) continue;
    const double norm = div_projector(patch, i).norm;
    if (norm > tol) {
      throw PreconditionError("(div P) o P = " + std::to_string(norm) + " at node " + std::to_string(i) +
                              "; the Euler-Lagrange form assumes it vanishes");
    }
  }
}

std::vector<double> leaf_laplacian_field(const FoliatedPatch& patch, const std::vector<double>& f) {
  const auto& grid = patch.grid();
  std::vector<double> out(grid.size(), 0.0);
  for (int i = 0; i < grid.size(); ++i) {
    if (grid.evaluable(i)) out[i] = leaf_laplacian(patch, f, i);
  }
  return out;
}

Mat lowered_leaf(const PointGeometry& pg, const Mat& frame_op) {
  // Frame (orthonormal) representation -> covariant leaf coordinates.
  const Mat ef = pg.frame.topLeftCorner(pg.s, pg.s);
  const Mat inv = ef.inverse();
  return inv.transpose() * frame_op * inv;
}

}  // namespace

std::vector<double> el_residual(const FunctionalSpec& spec, const FoliatedPatch& patch, double precondition_tol) {
  require_transversally_harmonic(patch, precondition_tol);
  const auto& grid = patch.grid();
  const int size = grid.size(), s = patch.s(), n = patch.n();
  std::vector<double> res(size, 0.0), scalar(size, 0.0);
  std::vector<Mat> tensor(size, Mat::Zero(s, s));
  bool use_scalar = false, use_tensor = false;
  double tensor_coef = 1.0;

  auto sym = [&](int i) { return sym_derivs(spec, patch.at(i)); };
  for (int i = 0; i < size; ++i) {
    const auto& pg = patch.at(i);
    const auto& sig = pg.sigma_f;
    const double H = pg.H, x = pg.norm_hf_sq - pg.norm_hmix_sq;
    switch (spec.kind) {
      case FunctionalKind::W_nps: {
        const double hp = power(pg.H_F, spec.p - 1, "H_F^{p-1}");
        use_scalar = true;
        scalar[i] = hp;
        res[i] = hp * (x - n * s / spec.p * H * pg.H_F);
        break;
      }
      case FunctionalKind::J_nps: {
        const double np = power(pg.norm_hf_sq, spec.p / 2 - 1, "|h_F|^{p-2}");
        use_tensor = true;
        tensor[i] = np * pg.h.topLeftCorner(s, s);
        res[i] = np * (inner(pg.a_f, pg.a_f * pg.a_f + pg.mix_sq) - n / spec.p * pg.norm_hf_sq * H);
        break;
      }
      case FunctionalKind::WF_of_HF: {
        const double a[1] = {pg.H_F};
        const double fp = spec.dF(a)[0];
        use_scalar = true;
        scalar[i] = fp;
        res[i] = fp * x - s * n * spec.F(a) * H;
        break;
      }
      case FunctionalKind::WF_HK: {
        if (s != 2) throw SpecError("WF_HK needs s = 2");
        const double hf = pg.H_F, kf = sig[2];
        const double a[2] = {hf, kf};
        const auto g = spec.dF(a);
        use_scalar = use_tensor = true;
        scalar[i] = 0.5 * g[0] + 2 * hf * g[1];
        tensor[i] = g[1] * pg.h.topLeftCorner(s, s);
        tensor_coef = -1.0;
        res[i] = g[0] * (2 * hf * hf - kf - 0.5 * pg.norm_hmix_sq) +
                 g[1] * (2 * hf * (kf - pg.norm_hmix_sq) - inner(pg.a_f, pg.mix_sq)) - n * spec.F(a) * H;
        break;
      }
      case FunctionalKind::W_conf: {
        if (spec.r != 2) throw SpecError("conformal Euler-Lagrange residual is implemented for r = 2");
        if (s < 2) throw SpecError("W_conf needs s >= 2");
        const double q = q_r(sig, s, 2);
        const double qp = power(q, n / 2.0 - 1, "Q_2^{n/2-1}");
        const double s3 = s >= 3 ? sig[3] : 0.0;
        const Mat t1 = newton_transform(pg.a_f, 1).matrix;
        const double c = s / (s - 1.0);
        use_scalar = use_tensor = true;
        scalar[i] = qp * sig[1];
        tensor[i] = qp * lowered_leaf(pg, t1);
        tensor_coef = -c;
        res[i] = qp * (sig[1] * (sig[1] * sig[1] - 2 * sig[2] + pg.norm_hmix_sq) -
                       c * (sig[1] * sig[2] - 3 * s3 + inner(t1, pg.mix_sq)) - s * s * q * H);
        break;
      }
      case FunctionalKind::WF:
      case FunctionalKind::JF:
        break;
    }
  }
  if (spec.kind == FunctionalKind::WF || spec.kind == FunctionalKind::JF) {
    // Each r (or i) contributes its own double divergence.
    const bool tau_form = spec.kind == FunctionalKind::JF;
    std::vector<SymDerivs> sd(size);
    for (int i = 0; i < size; ++i) {
      sd[i] = sym(i);
      const auto& pg = patch.at(i);
      res[i] = -n * sd[i].F * pg.H;
    }
    for (int r = 1; r <= s; ++r) {
      std::vector<Mat> field(size);
      for (int i = 0; i < size; ++i) {
        const auto& pg = patch.at(i);
        const auto& sig = pg.sigma_f;
        const Mat op = tau_form ? mat_power(pg.a_f, r - 1) : newton_transform(pg.a_f, r - 1).matrix;
        const double w = tau_form ? sd[i].d[r - 1] / r : sd[i].d[r - 1];
        field[i] = w * lowered_leaf(pg, op);
        if (tau_form) {
          const auto tau = tau_of(pg.a_f, s);
          res[i] += w * (tau[r + 1] + inner(op, pg.mix_sq));
        } else {
          const double next = r + 1 <= s ? sig[r + 1] : 0.0;
          res[i] += w * (sig[1] * sig[r - 1] - (r + 1) * next + inner(op, pg.mix_sq));
        }
      }
      const auto dd = double_divergence(patch, field, s);
      for (int i = 0; i < size; ++i) res[i] += dd[i];
    }
  }
  if (use_scalar) {
    const auto lap = leaf_laplacian_field(patch, scalar);
    for (int i = 0; i < size; ++i) res[i] += lap[i];
  }
  if (use_tensor) {
    const auto dd = double_divergence(patch, tensor, s);
    for (int i = 0; i < size; ++i) res[i] += tensor_coef * dd[i];
  }
  for (int i = 0; i < size; ++i) {
    if (!grid.evaluable(i)) res[i] = 0.0;
  }
  return res;
}

double el_residual(const FunctionalSpec& spec, const RevolutionProfile& profile, double rho) {
  const int n = profile.n(), s = n - 1;
  const auto smp = profile.at(rho);
  const auto v = revolution_invariants(n, rho, smp.fp, smp.fpp);
  switch (spec.kind) {
    case FunctionalKind::W_nps:
      return spec.p * v.norm_hf_sq - n * (n - 1.0) * v.H * v.H_F;
    case FunctionalKind::J_nps:
      return spec.p * v.hf_hf2 - n * v.norm_hf_sq * v.H;
    case FunctionalKind::WF_of_HF: {
      const double a[1] = {v.H_F};
      return spec.dF(a)[0] * v.norm_hf_sq - s * n * spec.F(a) * v.H;
    }
    default:
      throw SpecError("algebraic revolution residual is available for W_nps, J_nps and WF_of_HF");
  }
}

std::vector<double> willmore_residual(const FoliatedPatch& patch) {
  if (patch.n() != 2) throw SpecError("willmore_residual needs n = 2");
  const auto& grid = patch.grid();
  std::vector<double> h(grid.size()), out(grid.size(), 0.0);
  for (int i = 0; i < grid.size(); ++i) h[i] = patch.at(i).H;
  for (int i = 0; i < grid.size(); ++i) {
    if (!grid.evaluable(i)) continue;
    const auto& pg = patch.at(i);
    const double k = pg.A.determinant();
    out[i] = laplacian(pg, derivs_of(grid, h, i)) + 2 * pg.H * (pg.H * pg.H - k);
  }
  return out;
}

namespace {

struct HfFunction {
  double F = 0, fp = 0, fpp = 0;
};

HfFunction hf_function(const FunctionalSpec& spec, double hf) {
  HfFunction out;
  if (spec.kind == FunctionalKind::W_nps) {
    const double p = spec.p;
    out.F = power(hf, p, "H_F^p");
    out.fp = p * power(hf, p - 1, "H_F^{p-1}");
    out.fpp = p == 1 ? 0.0 : p * (p - 1) * power(hf, p - 2, "H_F^{p-2}");
  } else if (spec.kind == FunctionalKind::WF_of_HF) {
    const double a[1] = {hf};
    out.F = spec.F(a);
    out.fp = spec.dF(a)[0];
    if (!spec.d2F) throw SpecError("WF_of_HF second variation needs F''");
    out.fpp = spec.d2F(hf);
  } else {
    throw SpecError("second_variation_analytic supports W_nps and WF_of_HF");
  }
  return out;
}

}  // namespace

double second_variation_analytic(const FunctionalSpec& spec, const FoliatedPatch& patch, const JetScalar& u,
                                 bool critical, double critical_tol) {
  require_transversally_harmonic(patch, 1e-8);
  const auto& grid = patch.grid();
  const int size = grid.size(), s = patch.s(), n = patch.n();
  std::vector<HfFunction> fn(size);
  std::vector<double> fp(size), hf(size);
  for (int i = 0; i < size; ++i) {
    fn[i] = hf_function(spec, patch.at(i).H_F);
    fp[i] = fn[i].fp;
    hf[i] = patch.at(i).H_F;
  }

  std::vector<double> lap_fp(size, 0.0);
  if (critical) {
    lap_fp = leaf_laplacian_field(patch, fp);
    double worst = 0, scale = 1;
    for (int i = 0; i < size; ++i) {
      if (!grid.evaluable(i)) continue;
      const auto& pg = patch.at(i);
      const double x = pg.norm_hf_sq - pg.norm_hmix_sq;
      const double lead = fp[i] * x, tail = s * n * fn[i].F * pg.H;
      worst = std::max(worst, std::abs(lap_fp[i] + lead - tail));
      scale = std::max({scale, std::abs(lap_fp[i]), std::abs(lead), std::abs(tail)});
    }
    if (worst > critical_tol * scale) {
      throw PreconditionError("surface is not critical: Euler-Lagrange residual " + std::to_string(worst));
    }
  }

  std::vector<double> f(size, 0.0);
  for (int i = 0; i < size; ++i) {
    if (!grid.evaluable(i)) continue;
    const auto& pg = patch.at(i);
    const auto ud = derivs_of(u, pg.x);
    const auto d = local_data(pg, ud);
    const double uu = d.u, x = pg.norm_hf_sq - pg.norm_hmix_sq;
    const double F = fn[i].F, F1 = fn[i].fp, F2 = fn[i].fpp;
    const Vec grad_hf = (pg.frame.transpose() * derivs_of(grid, hf, i).grad).head(s);
    const Vec& gu = d.grad_f;

    double first = critical ? F1 * d.lap_f - uu * lap_fp[i] : F1 * d.lap_f + (F1 * x - s * n * F * pg.H) * uu;
    first *= -static_cast<double>(n) / s * uu * pg.H;

    const double second = F1 / s * (2 * uu * inner(pg.a_f, d.hess_leaf) + s * uu * grad_hf.dot(gu) +
                                    2 * gu.dot(pg.a_f * gu) - s * pg.H_F * gu.squaredNorm()) +
                          F2 / (s * s) * d.lap_f * (d.lap_f + uu * x);

    const Mat h_perp = pg.h_frame.bottomRightCorner(n - s, n - s);
    const double with_mix = inner(pg.a_f, pg.mix_sq) + inner(h_perp, pg.mix_sq_perp);
    const double third =
        uu * ((F2 / (s * s) * x - n * pg.H * F1 / s) * (d.lap_f + uu * x) - F * (d.lap + uu * pg.norm_h_sq) +
              F1 / s * (2 * inner(pg.a_f, uu * (pg.a_f * pg.a_f + pg.mix_sq) + d.hess_leaf) - uu * with_mix -
                        2 * inner(pg.h_mix_block, d.hess_mixed)));

    f[i] = (first + second + third) * pg.dv;
  }
  return grid.integrate(f);
}

ConformalCheck conformal_density_check(const FoliatedPatch& patch, int r, ConformalMode mode, double scale) {
  const int s = patch.s(), n = patch.n();
  if (r < 1 || r > s) throw SpecError("conformal check needs 1 <= r <= s");
  const auto kind = mode == ConformalMode::Homothety ? AmbientImage::Kind::Homothety : AmbientImage::Kind::Inversion;
  const auto& grid = patch.grid();
  if (mode == ConformalMode::Inversion) {
    for (int i = 0; i < grid.size(); ++i) {
      if (patch.at(i).position.norm() < 1e-8) throw DomainError("patch meets the centre of inversion");
    }
  }
  auto image_imm = std::make_shared<AmbientImage>(patch.immersion(), kind, scale);
  FoliatedPatch image(image_imm, s, patch.grid_ptr(), PatchOptions{patch.orientation(), 2});
  const double e = static_cast<double>(n) / r;

  ConformalCheck out;
  std::vector<double> dens(grid.size()), img(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const auto& a = patch.at(i);
    const auto& b = image.at(i);
    dens[i] = std::pow(std::abs(q_r(a.sigma_f, s, r)), e) * a.dv;
    img[i] = std::pow(std::abs(q_r(b.sigma_f, s, r)), e) * b.dv;
    out.max_density = std::max(out.max_density, std::abs(dens[i]));

    const Vec k = symmetric_eigenvalues(a.a_f);
    Vec law(s);
    for (int j = 0; j < s; ++j) {
      law[j] = mode == ConformalMode::Homothety ? k[j] / scale
                                                : a.position.squaredNorm() * k[j] + 2 * a.position.dot(a.normal);
    }
    const Vec got = symmetric_eigenvalues(b.a_f);
    Vec plus = law, minus = -law;
    std::sort(plus.data(), plus.data() + s);
    std::sort(minus.data(), minus.data() + s);
    const double ref = std::max(1.0, law.cwiseAbs().maxCoeff());
    const double dev = std::min((got - plus).cwiseAbs().maxCoeff(), (got - minus).cwiseAbs().maxCoeff()) / ref;
    out.max_shape_law_deviation = std::max(out.max_shape_law_deviation, dev);
    ++out.nodes;
  }
  const double norm = std::max(out.max_density, 1e-300);
  for (int i = 0; i < grid.size(); ++i) {
    out.max_density_deviation = std::max(out.max_density_deviation, std::abs(dens[i] - img[i]) / norm);
  }
  return out;
}

}  // namespace willmore
