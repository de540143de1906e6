#include "willmore/immersion.hpp"

#include <cmath>

#include "willmore/errors.hpp"

namespace willmore {

namespace {

Jet determinant(const std::vector<std::vector<Jet>>& m) {
  const int n = static_cast<int>(m.size());
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  Jet det(0.0);
  for (int c = 0; c < n; ++c) {
    std::vector<std::vector<Jet>> minor(n - 1);
    for (int r = 1; r < n; ++r) {
      for (int k = 0; k < n; ++k) {
        if (k != c) minor[r - 1].push_back(m[r][k]);
      }
    }
    const Jet term = m[0][c] * determinant(minor);
    det = (c % 2 == 0) ? det + term : det - term;
  }
  return det;
}

// 4th-order central weights for derivatives of order 1..3 (offsets -3..3).
const double* stencil(int order) {
  static constexpr double w1[7] = {0, 1.0 / 12, -8.0 / 12, 0, 8.0 / 12, -1.0 / 12, 0};
  static constexpr double w2[7] = {0, -1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12, 0};
  static constexpr double w3[7] = {1.0 / 8, -1.0, 13.0 / 8, 0, -13.0 / 8, 1.0, -1.0 / 8};
  static constexpr double w0[7] = {0, 0, 0, 1, 0, 0, 0};
  switch (order) {
    case 0: return w0;
    case 1: return w1;
    case 2: return w2;
    default: return w3;
  }
}

}  // namespace

Vec Immersion::value(const Vec& x) const {
  const JetVec j = jet(x, 0);
  Vec v(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) v[k] = j[k].value();
  return v;
}

JetVec ClosedFormImmersion::jet(const Vec& x, int order) const {
  const auto seed = Jet::seed(std::span<const double>(x.data(), x.size()), order);
  JetVec out = map_(seed);
  if (static_cast<int>(out.size()) != n_ + 1) throw ValidationError("immersion must return n+1 components");
  // Components that did not depend on the seed come back as scalars.
  const auto& layout = seed.front().layout();
  for (auto& c : out) {
    if (&c.layout() != &layout) c = Jet::constant(layout, 0.0) + c;
  }
  return out;
}

JetVec FiniteDifferenceImmersion::jet(const Vec& x, int order) const {
  if (order > 3) throw DomainError("finite-difference supplier provides at most third derivatives");
  const int n = dim();
  const auto& layout = JetLayout::get(n, order);
  JetVec out(n + 1, Jet::constant(layout, 0.0));
  for (int i = 0; i < layout.size(); ++i) {
    const auto& e = layout.exponent(i);
    // Tensor product of 1D stencils over the axes that appear in e.
    std::vector<int> axes;
    for (int v = 0; v < n; ++v) {
      if (e[v] > 0) axes.push_back(v);
    }
    Vec sum = Vec::Zero(n + 1);
    std::vector<int> off(axes.size(), -3);
    while (true) {
      double w = 1.0;
      Vec y = x;
      for (std::size_t k = 0; k < axes.size(); ++k) {
        w *= stencil(e[axes[k]])[off[k] + 3] / std::pow(h_, e[axes[k]]);
        y[axes[k]] += off[k] * h_;
      }
      if (w != 0.0) sum += w * base_->value(y);
      std::size_t k = 0;
      while (k < axes.size() && ++off[k] > 3) off[k++] = -3;
      if (k == axes.size()) break;
    }
    double fact = 1.0;
    for (int v = 0; v < n; ++v) {
      for (int q = 2; q <= e[v]; ++q) fact *= q;
    }
    for (int c = 0; c <= n; ++c) out[c].coeff(i) = sum[c] / fact;
  }
  return out;
}

JetVec normal_jet(const JetVec& r_high, int orientation) {
  const int rows = static_cast<int>(r_high.size());
  const int n = rows - 1;
  std::vector<std::vector<Jet>> jac(rows, std::vector<Jet>(n));
  for (int c = 0; c < rows; ++c) {
    for (int i = 0; i < n; ++i) jac[c][i] = r_high[c].partial(i);
  }
  JetVec normal(rows);
  for (int k = 0; k < rows; ++k) {
    std::vector<std::vector<Jet>> minor;
    for (int r = 0; r < rows; ++r) {
      if (r != k) minor.push_back(jac[r]);
    }
    const double sign = ((k + n) % 2 == 0) ? 1.0 : -1.0;
    normal[k] = sign * determinant(minor);
  }
  Jet norm2(0.0);
  for (const auto& c : normal) norm2 += c * c;
  if (norm2.value() <= 0.0) throw SingularImmersionError("normal_jet: degenerate Jacobian");
  const Jet inv = reciprocal(sqrt(norm2)) * static_cast<double>(orientation);
  for (auto& c : normal) c = c * inv;
  return normal;
}

JetVec NormalVariation::jet(const Vec& x, int order) const {
  const JetVec r = base_->jet(x, order + 1);
  const JetVec normal = normal_jet(r, orientation_);
  const auto seed = Jet::seed(std::span<const double>(x.data(), x.size()), order);
  const Jet u = Jet::constant(seed.front().layout(), 0.0) + u_(seed);
  JetVec out(r.size());
  for (std::size_t c = 0; c < r.size(); ++c) out[c] = r[c].truncate(order) + t_ * u * normal[c];
  return out;
}

JetVec AmbientImage::jet(const Vec& x, int order) const {
  JetVec r = base_->jet(x, order);
  if (kind_ == Kind::Homothety) {
    for (auto& c : r) c = scale_ * c;
    return r;
  }
  Jet norm2(0.0);
  for (const auto& c : r) norm2 += c * c;
  if (norm2.value() < 1e-300) throw DomainError("inversion: immersion passes through the origin");
  const Jet inv = reciprocal(norm2);
  for (auto& c : r) c = c * inv;
  return r;
}

JetVec compose_jets(const JetVec& outer, const JetVec& inner) {
  const auto& lo = outer.front().layout();
  const auto& li = inner.front().layout();
  const int m = lo.vars();
  const int order = std::min(lo.order(), li.order());
  // delta_v = inner_v - inner_v(base), powers up to order.
  std::vector<std::vector<Jet>> pw(m);
  for (int v = 0; v < m; ++v) {
    Jet d = inner[v].truncate(order);
    d.coeff(0) = 0.0;
    pw[v].push_back(Jet::constant(d.layout(), 1.0));
    for (int k = 1; k <= order; ++k) pw[v].push_back(pw[v].back() * d);
  }
  const auto& lout = JetLayout::get(li.vars(), order);
  JetVec out;
  for (const auto& f : outer) {
    Jet acc = Jet::constant(lout, 0.0);
    for (int i = 0; i < lo.size(); ++i) {
      const auto& e = lo.exponent(i);
      if (lo.degree(i) > order || f.coeff(i) == 0.0) continue;
      Jet term = Jet::constant(lout, f.coeff(i));
      for (int v = 0; v < m; ++v) {
        if (e[v]) term = term * pw[v][e[v]];
      }
      acc += term;
    }
    out.push_back(acc);
  }
  return out;
}

JetVec Reparametrized::jet(const Vec& x, int order) const {
  const auto seed = Jet::seed(std::span<const double>(x.data(), x.size()), order);
  const JetVec y = phi_(seed);
  Vec y0(y.size());
  for (std::size_t v = 0; v < y.size(); ++v) y0[v] = y[v].value();
  return compose_jets(base_->jet(y0, order), y);
}

}  // namespace willmore
