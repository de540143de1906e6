#include "willmore/catalog.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "willmore/errors.hpp"

namespace willmore {

namespace {

constexpr double kPi = std::numbers::pi;

// Orientation making `want(N, r)` true at x0.
int orient(const Immersion& imm, const Vec& x0, const std::function<bool(const Vec&, const Vec&)>& want) {
  const JetVec r = imm.jet(x0, 1);
  const int n = imm.dim();
  Mat J(n + 1, n);
  Vec pos(n + 1);
  for (int c = 0; c <= n; ++c) {
    pos[c] = r[c].value();
    for (int i = 0; i < n; ++i) J(c, i) = r[c].d1(i);
  }
  const Vec nrm = generalized_cross(J);
  return want(nrm, pos) ? 1 : -1;
}

// Unit vector of R^m from angles (phi, theta_1..theta_{m-2}).
JetVec direction(const JetVec& ang, int m) {
  JetVec w(m);
  if (m == 1) {
    w[0] = Jet(1.0);
    return w;
  }
  // prod_{k>=q} sin(theta_k), theta_k = ang[k] for k = 1..m-2
  std::vector<Jet> tail(m, Jet(1.0));
  for (int q = m - 2; q >= 1; --q) tail[q] = tail[q + 1] * sin(ang[q]);
  w[0] = cos(ang[0]) * tail[1];
  w[1] = sin(ang[0]) * tail[1];
  for (int q = 1; q <= m - 2; ++q) w[q + 1] = cos(ang[q]) * tail[q + 1];
  return w;
}

Vec midpoint(const std::vector<Axis>& axes) {
  Vec x(axes.size());
  for (std::size_t a = 0; a < axes.size(); ++a) x[a] = 0.5 * (axes[a].lo + axes[a].hi) + 0.1;
  return x;
}

}  // namespace

FoliatedPatch Surface::patch(int jet_order) const {
  PatchOptions opt;
  opt.orientation = orientation;
  opt.jet_order = jet_order;
  return FoliatedPatch(immersion, s, std::make_shared<Grid>(axes), opt);
}

Surface sphere(int n, int s, int res, double radius) {
  if (n < 1 || n > 4) throw DomainError("sphere: n must be in 1..4");
  if (s != n && s != n - 1) throw DomainError("sphere: s must be n or n-1");
  Surface out;
  out.id = "sphere";
  out.s = s;
  out.immersion = std::make_shared<ClosedFormImmersion>(n, [n, radius](const JetVec& x) {
    // direction() of R^{n+1} with angles (phi, theta_1..theta_{n-1})
    JetVec w = direction(x, n + 1);
    for (auto& c : w) c = radius * c;
    return w;
  });
  out.axes.push_back(Axis::periodic(0.0, 2.0 * kPi, 2 * res));
  for (int k = 1; k < n; ++k) out.axes.push_back(Axis::legendre(0.0, kPi, res));
  out.orientation = orient(*out.immersion, midpoint(out.axes), [](const Vec& nv, const Vec& r) { return nv.dot(r) < 0; });
  return out;
}

Surface torus(double big_r, double small_r, int s, int res) {
  if (!(big_r > small_r && small_r > 0)) throw DomainError("torus: need R > r > 0");
  Surface out;
  out.id = "torus";
  out.s = s;
  out.immersion = std::make_shared<ClosedFormImmersion>(2, [big_r, small_r](const JetVec& x) {
    const Jet w = big_r + small_r * cos(x[1]);
    return JetVec{w * cos(x[0]), w * sin(x[0]), small_r * sin(x[1])};
  });
  out.axes = {Axis::periodic(0.0, 2.0 * kPi, res), Axis::periodic(0.0, 2.0 * kPi, res)};
  out.orientation = 1;
  return out;
}

Surface cylinder(double radius, double z_lo, double z_hi, int res) {
  Surface out;
  out.id = "cylinder";
  out.s = 1;
  out.immersion = std::make_shared<ClosedFormImmersion>(2, [radius](const JetVec& x) {
    return JetVec{radius * cos(x[0]), radius * sin(x[0]), x[1]};
  });
  out.axes = {Axis::periodic(0.0, 2.0 * kPi, res), Axis::legendre(z_lo, z_hi, res)};
  out.orientation = orient(*out.immersion, midpoint(out.axes), [](const Vec& nv, const Vec& r) {
    return nv[0] * r[0] + nv[1] * r[1] < 0;
  });
  return out;
}

Surface revolution(int n, Profile f, double rho_lo, double rho_hi, int s, int res) {
  if (!(rho_lo > 0 && rho_hi > rho_lo)) throw DomainError("revolution: need 0 < rho_lo < rho_hi");
  if (s != n && s != n - 1) throw DomainError("revolution: s must be n or n-1");
  Surface out;
  out.id = "revolution";
  out.s = s;
  out.immersion = std::make_shared<ClosedFormImmersion>(n, [n, f](const JetVec& x) {
    JetVec r = direction(x, n);
    const Jet& rho = x[n - 1];
    for (auto& c : r) c = rho * c;
    r.push_back(f(rho));
    return r;
  });
  out.axes.push_back(Axis::periodic(0.0, 2.0 * kPi, 2 * res));
  for (int k = 1; k < n - 1; ++k) out.axes.push_back(Axis::legendre(0.0, kPi, res));
  out.axes.push_back(Axis::legendre(rho_lo, rho_hi, res));
  out.orientation = orient(*out.immersion, midpoint(out.axes), [n](const Vec& nv, const Vec&) { return nv[n] > 0; });
  return out;
}

Surface cone(int n, double slope, double rho_lo, double rho_hi, int res) {
  Surface out = revolution(n, [slope](const Jet& rho) { return slope * rho; }, rho_lo, rho_hi, n - 1, res);
  out.id = "cone";
  return out;
}

Surface plane(int res) {
  Surface out;
  out.id = "plane";
  out.s = 1;
  out.immersion = std::make_shared<ClosedFormImmersion>(2, [](const JetVec& x) {
    return JetVec{x[0], x[1], Jet(0.0)};
  });
  out.axes = {Axis::periodic(0.0, 1.0, res), Axis::periodic(0.0, 1.0, res)};
  return out;
}

Surface bumpy_torus(int s, int res, double amplitude) {
  Surface out;
  out.id = "bumpy-torus";
  out.s = s;
  out.immersion = std::make_shared<ClosedFormImmersion>(2, [amplitude](const JetVec& x) {
    const double big_r = 2.0, small_r = 0.7;
    const Jet rho = small_r * (1.0 + amplitude * (0.5 * cos(2.0 * x[0] + x[1]) + sin(3.0 * x[1]) / 3.0));
    const Jet w = big_r + rho * cos(x[1]);
    return JetVec{w * cos(x[0]), w * sin(x[0]), rho * sin(x[1]) + 0.5 * amplitude * small_r * sin(x[0])};
  });
  out.axes = {Axis::periodic(0.0, 2.0 * kPi, res), Axis::periodic(0.0, 2.0 * kPi, res)};
  out.orientation = 1;
  return out;
}

Surface sheared_torus3(int res, double shear, double bump) {
  Surface out;
  out.id = "sheared-torus-3";
  out.s = 2;
  out.immersion = std::make_shared<ClosedFormImmersion>(3, [shear, bump](const JetVec& x) {
    const double r1 = 3.0, r2 = 1.2, r = 0.5;
    const Jet a = x[0] + shear * sin(x[2]);
    const Jet w = r2 + r * cos(a) * (1.0 + bump * cos(x[1] + x[2]));
    const Jet v = r1 + w * cos(x[1]);
    return JetVec{v * cos(x[2]), v * sin(x[2]), w * sin(x[1]), r * sin(a)};
  });
  out.axes.assign(3, Axis::periodic(0.0, 2.0 * kPi, res));
  out.orientation = 1;
  return out;
}

JetScalar random_field(int dims, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> c(-0.5, 0.5);
  std::uniform_int_distribution<int> k(-2, 2);
  struct Term {
    double amp, phase;
    std::vector<int> freq;
  };
  std::vector<Term> terms;
  for (int t = 0; t < 3; ++t) {
    Term term{c(gen), 4 * c(gen), {}};
    for (int d = 0; d < dims; ++d) term.freq.push_back(k(gen));
    terms.push_back(term);
  }
  const double mean = 0.3 + c(gen);
  return [terms, mean](const JetVec& x) {
    Jet u(mean);
    for (const auto& t : terms) {
      Jet arg(t.phase);
      for (std::size_t d = 0; d < t.freq.size(); ++d) arg = arg + static_cast<double>(t.freq[d]) * x[d];
      u = u + t.amp * sin(arg);
    }
    return u;
  };
}

std::vector<std::string> catalog_ids() {
  return {"sphere", "torus", "cylinder", "cone", "revolution", "plane", "bumpy-torus", "sheared-torus-3"};
}

}  // namespace willmore
