#include "willmore/revolution.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "willmore/errors.hpp"
#include "willmore/quadrature.hpp"

namespace willmore {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;  // (f', f)

namespace {

double sphere_area(int dim) {  // |S^dim|
  return 2.0 * std::pow(std::numbers::pi, (dim + 1) / 2.0) / std::tgamma((dim + 1) / 2.0);
}

// Taylor coefficients of y = f' at rho for y' = c y (1 + y^2) / rho.
std::vector<double> ode_taylor(double c, double rho, double y, int count) {
  std::vector<double> a{y};
  for (int k = 1; k < count; ++k) {
    const auto& layout = JetLayout::get(1, k - 1);
    Jet yj = Jet::constant(layout, 0.0);
    for (int i = 0; i < k; ++i) yj.coeff(i) = a[i];
    const Jet r = Jet::variable(layout, 0, rho);
    const Jet g = c * yj * (1.0 + yj * yj) / r;
    a.push_back(g.coeff(k - 1) / k);
  }
  return a;
}

class ClosedFormSource : public detail::ProfileSource {
 public:
  ClosedFormSource(double c, double c1, double rho0, double c2) : c_(c), c1_(c1), rho0_(rho0), c2_(c2) {}

  double slope(double rho) const { return std::pow(rho, c_) / std::sqrt(c1_ - std::pow(rho, 2 * c_)); }

  std::vector<double> taylor(double rho, int order) const override {
    if (!(c1_ - std::pow(rho, 2 * c_) > 0)) throw DomainError("closed form: C1 - rho^{2c} <= 0 at rho");
    std::vector<double> t(order + 1, 0.0);
    t[0] = c2_;
    if (rho != rho0_) {
      boost::math::quadrature::tanh_sinh<double> ts;
      t[0] += ts.integrate([this](double r) { return slope(r); }, rho0_, rho, 1e-14);
    }
    if (order >= 1) {
      const auto& layout = JetLayout::get(1, order - 1);
      const Jet x = Jet::variable(layout, 0, rho);
      const Jet fp = pow(x, c_) / sqrt(c1_ - pow(x, 2 * c_));
      for (int k = 1; k <= order; ++k) t[k] = fp.coeff(k - 1) / k;
    }
    return t;
  }

 private:
  double c_, c1_, rho0_, c2_;
};

class OdeSource : public detail::ProfileSource {
 public:
  OdeSource(double c, OdeOptions opt) : c_(c), opt_(opt) {}

  void system(const State& x, State& dx, double rho) const {
    dx[0] = c_ * x[0] * (1.0 + x[0] * x[0]) / rho;
    dx[1] = x[0];
  }

  // Integrate from the nearest checkpoint to rho.
  State state_at(double rho) const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < checkpoints_.size(); ++i) {
      if (std::abs(checkpoints_[i].first - rho) < std::abs(checkpoints_[best].first - rho)) best = i;
    }
    State x = checkpoints_[best].second;
    const double r0 = checkpoints_[best].first;
    if (std::abs(rho - r0) < 1e-12 * std::abs(r0)) {
      State dx;
      system(x, dx, r0);
      return {x[0] + dx[0] * (rho - r0), x[1] + dx[1] * (rho - r0)};
    }
    auto stepper = odeint::make_controlled(opt_.abs_tol * 1e-2, opt_.rel_tol * 1e-2, odeint::runge_kutta_dopri5<State>());
    auto sys = [this](const State& s, State& d, double r) { system(s, d, r); };
    odeint::integrate_adaptive(stepper, sys, x, r0, rho, (rho - r0) / 8.0);
    return x;
  }

  std::vector<double> taylor(double rho, int order) const override {
    const State x = state_at(rho);
    std::vector<double> t(order + 1, 0.0);
    t[0] = x[1];
    if (order >= 1) {
      const auto a = ode_taylor(c_, rho, x[0], order);
      for (int k = 1; k <= order; ++k) t[k] = a[k - 1] / k;
    }
    return t;
  }

  std::vector<std::pair<double, State>> checkpoints_;

 private:
  double c_;
  OdeOptions opt_;
};

// Composite Gauss-Legendre; profile values carry ODE noise so adaptive refinement cannot settle.
std::array<double, 2> panel_integrate(const std::function<std::array<double, 2>(double)>& f, double lo, double hi,
                                      int panels = 24) {
  std::array<double, 2> sum{0.0, 0.0};
  const double h = (hi - lo) / panels;
  for (int k = 0; k < panels; ++k) {
    const auto gl = gauss_legendre(16, lo + k * h, lo + (k + 1) * h);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const auto v = f(gl.nodes[i]);
      sum[0] += gl.weights[i] * v[0];
      sum[1] += gl.weights[i] * v[1];
    }
  }
  return sum;
}

struct BlowUp {
  double rho;
};

}  // namespace

PrincipalCurvatures principal_curvatures(double rho, double fp, double fpp) {
  if (!(rho > 0)) throw DomainError("principal_curvatures: rho must be positive");
  const double w2 = 1.0 + fp * fp;
  PrincipalCurvatures k{fp / (rho * std::sqrt(w2)), fpp / (w2 * std::sqrt(w2))};
  if (std::abs(k.k1) > 1.0 / rho * (1.0 + 1e-12)) throw DomainError("principal_curvatures: |k1| exceeds 1/rho");
  return k;
}

RevolutionInvariants revolution_invariants(int n, double rho, double fp, double fpp) {
  const auto k = principal_curvatures(rho, fp, fpp);
  RevolutionInvariants v;
  v.k1 = k.k1;
  v.kn = k.kn;
  v.H = ((n - 1) * k.k1 + k.kn) / n;
  v.H_F = k.k1;
  v.norm_hf_sq = (n - 1) * k.k1 * k.k1;
  v.norm_h_sq = v.norm_hf_sq + k.kn * k.kn;
  v.hf_hf2 = (n - 1) * std::pow(k.k1, 3);
  v.h_h2 = v.hf_hf2 + std::pow(k.kn, 3);
  v.area_density = std::pow(rho, n - 1) * std::sqrt(1.0 + fp * fp);
  return v;
}

RevolutionProfile::RevolutionProfile(int n, double p, double rho_min, double rho_max,
                                     std::shared_ptr<const detail::ProfileSource> source)
    : n_(n), p_(p), rho_min_(rho_min), rho_max_(rho_max), source_(std::move(source)) {
  if (!(rho_min_ > 0)) throw DomainError("profile: rho_min must be positive");
}

std::array<double, 4> RevolutionProfile::derivatives(double rho) const {
  const auto t = source_->taylor(rho, 3);
  return {t[0], t[1], 2.0 * t[2], 6.0 * t[3]};
}

ProfileSample RevolutionProfile::at(double rho) const {
  const auto d = derivatives(rho);
  return {rho, d[0], d[1], d[2]};
}

std::vector<ProfileSample> RevolutionProfile::sample(const std::vector<double>& rho) const {
  std::vector<ProfileSample> out;
  out.reserve(rho.size());
  for (double r : rho) out.push_back(at(r));
  return out;
}

std::vector<ProfileSample> RevolutionProfile::sample_uniform(int count) const {
  std::vector<double> rho(count);
  for (int i = 0; i < count; ++i) rho[i] = rho_min_ + (rho_max_ - rho_min_) * i / (count - 1);
  return sample(rho);
}

Profile RevolutionProfile::jet_profile() const {
  auto src = source_;
  return [src](const Jet& rho) {
    const auto t = src->taylor(rho.value(), rho.order());
    return rho.compose(t);
  };
}

double RevolutionProfile::criticality_residual(int count) const {
  const double c = critical_exponent(n_, p_);
  double worst = 0.0;
  for (const auto& smp : sample_uniform(count)) {
    const auto k = principal_curvatures(smp.rho, smp.fp, smp.fpp);
    worst = std::max(worst, std::abs(k.kn - c * k.k1) / std::abs(k.k1));
  }
  return worst;
}

double critical_exponent(int n, double p) { return p - n + 1.0; }

RevolutionProfile critical_ode_solve(int n, double p, double rho0, double f0, double f0p, double rho_lo,
                                     double rho_hi, OdeOptions opt) {
  if (n < 2) throw DomainError("critical_ode_solve: n must be >= 2");
  if (!(rho_lo > 0 && rho_lo <= rho0 && rho0 <= rho_hi)) {
    throw DomainError("critical_ode_solve: need 0 < rho_lo <= rho0 <= rho_hi");
  }
  if (!std::isfinite(f0p)) throw DomainError("critical_ode_solve: initial slope must be finite");
  const double c = critical_exponent(n, p);
  auto src = std::make_shared<OdeSource>(c, opt);
  auto sys = [&](const State& x, State& dx, double r) { src->system(x, dx, r); };
  std::optional<double> vertical;
  double lo = rho_lo, hi = rho_hi;

  auto run = [&](double target, std::vector<std::pair<double, State>>& pts) {
    State x{f0p, f0};
    auto stepper = odeint::make_controlled(opt.abs_tol, opt.rel_tol, odeint::runge_kutta_dopri5<State>());
    const double dt = (target - rho0) / 64.0;
    if (dt == 0.0) return target;
    try {
      odeint::integrate_adaptive(stepper, sys, x, rho0, target, dt, [&](const State& s, double r) {
        if (std::abs(s[0]) > opt.blowup) throw BlowUp{r};
        pts.emplace_back(r, s);
      });
    } catch (const BlowUp& b) {
      vertical = b.rho;
      return pts.empty() ? rho0 : pts.back().first;
    }
    return target;
  };
  std::vector<std::pair<double, State>> fwd, bwd;
  hi = run(rho_hi, fwd);
  lo = run(rho_lo, bwd);
  for (auto it = bwd.rbegin(); it != bwd.rend(); ++it) src->checkpoints_.push_back(*it);
  for (const auto& pt : fwd) {
    if (pt.first != rho0 || src->checkpoints_.empty()) src->checkpoints_.push_back(pt);
  }
  if (src->checkpoints_.empty()) src->checkpoints_.emplace_back(rho0, State{f0p, f0});
  RevolutionProfile out(n, p, lo, hi, src);
  out.vertical_tangent = vertical;
  if (vertical) out.truncation_note = "profile turns vertical near rho = " + std::to_string(*vertical);
  return out;
}

double fit_constants(int n, double p, double rho0, double f0p) {
  if (!(rho0 > 0)) throw DomainError("fit_constants: rho0 must be positive");
  if (!(f0p > 0) || !std::isfinite(f0p)) {
    throw DomainError("fit_constants: no real C1 for slope f0' <= 0 (closed form has f' > 0)");
  }
  const double c = critical_exponent(n, p);
  return std::pow(rho0, 2 * c) * (1.0 + 1.0 / (f0p * f0p));
}

FeasibilityWindow feasibility_window(int n, double p, double c1) {
  const double c = critical_exponent(n, p);
  if (c == 0.0) throw DomainError("degenerate: f'' == 0 (p = n - 1)");
  if (!(c1 > 0)) throw DomainError("feasibility: C1 must be positive");
  const double edge = std::pow(c1, 1.0 / (2 * c));
  if (c > 0) return {0.0, edge};
  return {edge, std::numeric_limits<double>::infinity()};
}

RevolutionProfile critical_closed_form(int n, double p, double c1, double rho0, double c2, double rho_lo,
                                       double rho_hi) {
  const auto win = feasibility_window(n, p, c1);
  const double margin = 1e-8;
  auto check = [&](double r, const char* what) {
    if (!(r > win.lo && r < win.hi)) {
      throw DomainError(std::string("closed form infeasible: C1 - rho^{2c} <= 0 at ") + what + " = " +
                        std::to_string(r));
    }
  };
  check(rho0, "rho0");
  double lo = std::max(rho_lo, win.lo + margin);
  double hi = std::min(rho_hi, win.hi - margin);
  if (!(lo < hi)) throw DomainError("closed form: empty feasibility window");
  RevolutionProfile out(n, p, lo, hi, std::make_shared<ClosedFormSource>(critical_exponent(n, p), c1, rho0, c2));
  if (std::isfinite(win.hi) && rho_hi >= win.hi) out.vertical_tangent = win.hi;
  if (rho_lo <= win.lo && win.lo > 0) out.vertical_tangent = win.lo;
  return out;
}

double closed_form_integrand(int n, double p, double c1, double rho) {
  const double a = std::pow(rho, 2 * critical_exponent(n, p));
  const double rad = c1 * a - a * a;
  const double den = c1 - a;
  if (rad < 0) throw DomainError("closed form: negative radicand");
  if (den == 0) throw DomainError("closed form: zero denominator");
  return std::sqrt(rad) / den;
}

double leaf_harmonic_norm(int n, int j) {
  if (j < 0) throw DomainError("harmonic degree must be >= 0");
  const double area = sphere_area(n - 1);
  if (j == 0) return area;
  // E[(x1^2 + x2^2)^j] on S^{n-1} times 1/2 from cos^2.
  double moment = 1.0;
  for (int m = 0; m < j; ++m) moment *= (m + 1.0) / (n / 2.0 + m);
  return 0.5 * area * moment;
}

SecondVariationTerms second_variation_revolution(const RevolutionProfile& profile, int j, double rho_lo,
                                                 double rho_hi, const std::function<double(double)>& a,
                                                 double critical_tol) {
  const int n = profile.n();
  const double p = profile.p();
  if (n < 2) throw DomainError("second variation needs n >= 2");
  const double c = critical_exponent(n, p);
  const double lam = leaf_eigenvalue(n, j);
  const double norm = leaf_harmonic_norm(n, j);
  auto amp = [&](double r) { return a ? a(r) : 1.0; };
  // Precondition: criticality along the window.
  for (int i = 0; i <= 50; ++i) {
    const double r = rho_lo + (rho_hi - rho_lo) * i / 50.0;
    const auto s = profile.at(r);
    const auto k = principal_curvatures(r, s.fp, s.fpp);
    if (std::abs(k.kn - c * k.k1) > critical_tol * std::max(1.0, std::abs(k.k1))) {
      throw PreconditionError("second_variation_revolution: profile is not critical at rho = " + std::to_string(r));
    }
  }
  const double coef_mid = (n - 1.0) * (5.0 * n * p - n - 9.0 * p + 1.0);
  const double coef_last = (n - 1.0) * (n - 1.0) * (p - n) * (p - n + 1.0);
  const double bound = n * (p - n) + p * (6.0 * n - 11.0) + 1.0;
  auto parts = [&](double r) {
    const auto s = profile.at(r);
    const double k1 = principal_curvatures(r, s.fp, s.fpp).k1;
    if (k1 <= 0 && p != std::floor(p)) throw DomainError("k1^p with k1 <= 0 and fractional p");
    const double lap = -lam / (r * r);  // Delta_F u / u
    const double dv = std::pow(r, n - 1) * std::sqrt(1.0 + s.fp * s.fp);
    const double u2 = amp(r) * amp(r) * norm;
    const double kp = std::pow(k1, p - 2);
    const double integrand =
        kp * (p * (p - 1) * lap * lap + coef_mid * k1 * k1 * lap - coef_last * std::pow(k1, 4)) / ((n - 1.0) * (n - 1.0));
    return std::array<double, 2>{integrand * u2 * dv, bound * std::pow(k1, p + 2) * u2 * dv};
  };
  SecondVariationTerms out;
  const auto sum = panel_integrate(parts, rho_lo, rho_hi);
  out.total = sum[0];
  out.lower_bound = sum[1];
  out.pointwise_bound_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 200; ++i) {
    const auto v = parts(rho_lo + (rho_hi - rho_lo) * i / 200.0);
    out.pointwise_bound_margin = std::min(out.pointwise_bound_margin, v[0] - v[1]);
  }
  return out;
}

Surface revolution_surface(const RevolutionProfile& profile, double rho_lo, double rho_hi, int s, int res) {
  return revolution(profile.n(), profile.jet_profile(), rho_lo, rho_hi, s, res);
}

}  // namespace willmore
