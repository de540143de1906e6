#include "willmore/jet.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "willmore/errors.hpp"

namespace willmore {

namespace {

constexpr int kMaxOrder = 4;

int total(const JetLayout::Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

JetLayout::JetLayout(int vars, int order) : vars_(vars), order_(order) {
  // Enumerate multi-indices by total degree, then lexicographically.
  for (int deg = 0; deg <= order; ++deg) {
    Exponent e{};
    // Recursive enumeration of compositions of deg into `vars` parts.
    auto rec = [&](auto&& self, int v, int remaining) -> void {
      if (v == vars - 1 || vars == 0) {
        if (vars == 0) {
          if (remaining == 0) exponents_.push_back(e);
          return;
        }
        e[v] = remaining;
        exponents_.push_back(e);
        e[v] = 0;
        return;
      }
      for (int k = remaining; k >= 0; --k) {
        e[v] = k;
        self(self, v + 1, remaining - k);
      }
      e[v] = 0;
    };
    rec(rec, 0, deg);
  }
  size_ = static_cast<int>(exponents_.size());
  if (size_ > Jet::kCapacity) {
    throw DomainError("jet layout exceeds capacity: vars=" + std::to_string(vars) +
                      " order=" + std::to_string(order));
  }
  for (int a = 0; a < size_; ++a) {
    for (int b = 0; b < size_; ++b) {
      if (degree(a) + degree(b) > order) continue;
      Exponent s{};
      for (int v = 0; v < kMaxJetVars; ++v) s[v] = exponents_[a][v] + exponents_[b][v];
      products_.push_back({a, b, index(s)});
    }
  }
  shift_.resize(vars);
  if (order > 0) {
    for (int v = 0; v < vars; ++v) {
      for (int i = 0; i < size_; ++i) {
        if (degree(i) > order - 1) break;
        Exponent s = exponents_[i];
        s[v] += 1;
        shift_[v].push_back(index(s));
      }
    }
  }
}

int JetLayout::degree(int i) const { return total(exponents_[i]); }

int JetLayout::index(const Exponent& e) const {
  if (total(e) > order_) return -1;
  auto it = std::find(exponents_.begin(), exponents_.end(), e);
  return it == exponents_.end() ? -1 : static_cast<int>(it - exponents_.begin());
}

const JetLayout& JetLayout::get(int vars, int order) {
  using Table = std::array<std::array<std::unique_ptr<JetLayout>, kMaxOrder + 1>, kMaxJetVars + 1>;
  static const Table table = [] {
    Table t;
    for (int v = 0; v <= kMaxJetVars; ++v) {
      for (int k = 0; k <= kMaxOrder; ++k) {
        try {
          t[v][k].reset(new JetLayout(v, k));
        } catch (const DomainError&) {
          // over capacity; left empty
        }
      }
    }
    return t;
  }();
  if (vars < 0 || vars > kMaxJetVars || order < 0 || order > kMaxOrder || !table[vars][order]) {
    throw DomainError("unsupported jet layout: vars=" + std::to_string(vars) +
                      " order=" + std::to_string(order));
  }
  return *table[vars][order];
}

Jet::Jet(const JetLayout* layout) : layout_(layout) {}

Jet::Jet(double constant) : layout_(&JetLayout::get(0, 0)) { c_[0] = constant; }

Jet Jet::constant(const JetLayout& layout, double value) {
  Jet j(&layout);
  j.c_[0] = value;
  return j;
}

Jet Jet::variable(const JetLayout& layout, int var, double value) {
  Jet j = constant(layout, value);
  if (layout.order() >= 1) {
    JetLayout::Exponent e{};
    e[var] = 1;
    j.c_[layout.index(e)] = 1.0;
  }
  return j;
}

std::vector<Jet> Jet::seed(std::span<const double> point, int order) {
  const auto& layout = JetLayout::get(static_cast<int>(point.size()), order);
  std::vector<Jet> out;
  out.reserve(point.size());
  for (std::size_t v = 0; v < point.size(); ++v) {
    out.push_back(variable(layout, static_cast<int>(v), point[v]));
  }
  return out;
}

double Jet::derivative(const JetLayout::Exponent& alpha) const {
  const int i = layout_->index(alpha);
  if (i < 0) throw DomainError("derivative order exceeds jet order");
  double f = 1.0;
  for (int a : alpha) f *= factorial(a);
  return c_[i] * f;
}

double Jet::d1(int i) const {
  JetLayout::Exponent e{};
  e[i] += 1;
  return derivative(e);
}

double Jet::d2(int i, int j) const {
  JetLayout::Exponent e{};
  e[i] += 1;
  e[j] += 1;
  return derivative(e);
}

double Jet::d3(int i, int j, int k) const {
  JetLayout::Exponent e{};
  e[i] += 1;
  e[j] += 1;
  e[k] += 1;
  return derivative(e);
}

Jet Jet::partial(int v) const {
  if (layout_->order() == 0) return Jet(0.0);
  const auto& lower = JetLayout::get(layout_->vars(), layout_->order() - 1);
  Jet r(&lower);
  const auto& sh = layout_->shift(v);
  for (int i = 0; i < lower.size(); ++i) {
    r.c_[i] = c_[sh[i]] * (layout_->exponent(sh[i])[v]);
  }
  return r;
}

Jet Jet::truncate(int order) const {
  if (order >= layout_->order()) return *this;
  const auto& lower = JetLayout::get(layout_->vars(), order);
  Jet r(&lower);
  std::copy_n(c_.begin(), lower.size(), r.c_.begin());
  return r;
}

Jet Jet::compose(std::span<const double> taylor) const {
  Jet delta = *this;
  delta.c_[0] = 0.0;
  const int k_max = std::min<int>(layout_->order(), static_cast<int>(taylor.size()) - 1);
  Jet r = constant(*layout_, taylor[k_max]);
  for (int k = k_max - 1; k >= 0; --k) {
    r = r * delta;
    r.c_[0] += taylor[k];
  }
  return r;
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (int i = 0; i < layout_->size(); ++i) r.c_[i] = -r.c_[i];
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  if (layout_ == o.layout_ || o.is_scalar()) {
    const int n = o.layout_->size();
    for (int i = 0; i < n; ++i) c_[i] += o.c_[i];
    return *this;
  }
  if (is_scalar()) {
    const double v = c_[0];
    *this = o;
    c_[0] += v;
    return *this;
  }
  throw ValidationError("jet layout mismatch in +");
}

Jet& Jet::operator-=(const Jet& o) { return *this += -o; }

Jet operator*(const Jet& a, const Jet& b) {
  if (a.layout_ == b.layout_) {
    Jet r(a.layout_);
    for (const auto& p : a.layout_->products()) r.c_[p.dst] += a.c_[p.a] * b.c_[p.b];
    return r;
  }
  if (b.is_scalar()) {
    Jet r = a;
    for (int i = 0; i < a.layout_->size(); ++i) r.c_[i] *= b.c_[0];
    return r;
  }
  if (a.is_scalar()) return b * a;
  throw ValidationError("jet layout mismatch in *");
}

Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }

Jet operator/(const Jet& a, const Jet& b) {
  if (b.is_scalar()) {
    Jet r = a;
    for (int i = 0; i < a.layout_->size(); ++i) r.c_[i] /= b.c_[0];
    return r;
  }
  return a * reciprocal(b);
}

Jet& Jet::operator/=(const Jet& o) { return *this = *this / o; }

namespace {

template <class F>
Jet apply(const Jet& x, F&& taylor_fill) {
  std::array<double, kMaxOrder + 1> t{};
  const int k = x.order();
  taylor_fill(x.value(), k, t);
  return x.compose(std::span<const double>(t.data(), k + 1));
}

}  // namespace

Jet sin(const Jet& x) {
  return apply(x, [](double a, int k, auto& t) {
    const double s = std::sin(a), c = std::cos(a);
    const double cyc[4] = {s, c, -s, -c};
    for (int i = 0; i <= k; ++i) t[i] = cyc[i % 4] / factorial(i);
  });
}

Jet cos(const Jet& x) {
  return apply(x, [](double a, int k, auto& t) {
    const double s = std::sin(a), c = std::cos(a);
    const double cyc[4] = {c, -s, -c, s};
    for (int i = 0; i <= k; ++i) t[i] = cyc[i % 4] / factorial(i);
  });
}

Jet exp(const Jet& x) {
  return apply(x, [](double a, int k, auto& t) {
    const double e = std::exp(a);
    for (int i = 0; i <= k; ++i) t[i] = e / factorial(i);
  });
}

Jet log(const Jet& x) {
  if (x.value() <= 0.0) throw DomainError("log of non-positive jet");
  return apply(x, [](double a, int k, auto& t) {
    t[0] = std::log(a);
    for (int i = 1; i <= k; ++i) t[i] = ((i % 2) ? 1.0 : -1.0) / (i * std::pow(a, i));
  });
}

Jet pow(const Jet& x, double q) {
  if (x.value() <= 0.0 && q != std::floor(q)) throw DomainError("fractional power of non-positive jet");
  return apply(x, [q](double a, int k, auto& t) {
    double binom = 1.0;
    for (int i = 0; i <= k; ++i) {
      t[i] = binom * std::pow(a, q - i);
      binom *= (q - i) / (i + 1);
    }
  });
}

Jet sqrt(const Jet& x) {
  if (x.value() <= 0.0) throw DomainError("sqrt of non-positive jet");
  return pow(x, 0.5);
}

Jet pow(const Jet& x, int k) {
  if (k < 0) return reciprocal(pow(x, -k));
  Jet r = Jet::constant(x.layout(), 1.0);
  Jet base = x;
  while (k > 0) {
    if (k & 1) r = r * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return r;
}

Jet square(const Jet& x) { return x * x; }

Jet reciprocal(const Jet& x) {
  if (x.value() == 0.0) throw DomainError("reciprocal of zero jet");
  return apply(x, [](double a, int k, auto& t) {
    for (int i = 0; i <= k; ++i) t[i] = ((i % 2) ? -1.0 : 1.0) / std::pow(a, i + 1);
  });
}

}  // namespace willmore
