#pragma once

// Truncated multivariate Taylor polynomials ("jets").
//
// A Jet of order K in m variables stores the Taylor coefficients c_alpha of a
// smooth function around a base point, for all multi-indices |alpha| <= K.
// Arithmetic and the elementary functions propagate the truncated series
// exactly, so evaluating a closed-form map on seeded variables yields its
// partial derivatives to rounding error.  This backs every "analytic"
// derivative supplier in the library.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace willmore {

inline constexpr int kMaxJetVars = 4;

class JetLayout {
 public:
  using Exponent = std::array<int, kMaxJetVars>;

  // Shared, immutable layout for (vars, order).  Monomials are ordered by
  // total degree so that a lower-order layout is a prefix of a higher one.
  static const JetLayout& get(int vars, int order);

  int vars() const { return vars_; }
  int order() const { return order_; }
  int size() const { return size_; }
  const Exponent& exponent(int i) const { return exponents_[i]; }
  int degree(int i) const;
  int index(const Exponent& e) const;  // -1 when |e| > order

  struct Product {
    int a, b, dst;
  };
  const std::vector<Product>& products() const { return products_; }
  // shift(v)[i] = index (in this layout) of monomial i of the order-1 layout
  // multiplied by x_v.
  const std::vector<int>& shift(int v) const { return shift_[v]; }

 private:
  JetLayout(int vars, int order);
  int vars_, order_, size_;
  std::vector<Exponent> exponents_;
  std::vector<Product> products_;
  std::vector<std::vector<int>> shift_;
};

class Jet {
 public:
  static constexpr int kCapacity = 35;

  Jet() : Jet(0.0) {}
  Jet(double constant);  // NOLINT: implicit so literals mix with jets

  static Jet constant(const JetLayout& layout, double value);
  static Jet variable(const JetLayout& layout, int var, double value);
  // Seeds x_v = point[v] + dx_v for v < point.size().
  static std::vector<Jet> seed(std::span<const double> point, int order);

  const JetLayout& layout() const { return *layout_; }
  int order() const { return layout_->order(); }
  double value() const { return c_[0]; }
  double coeff(int i) const { return c_[i]; }
  double& coeff(int i) { return c_[i]; }
  // Partial derivative d^alpha f at the base point.
  double derivative(const JetLayout::Exponent& alpha) const;
  double d1(int i) const;
  double d2(int i, int j) const;
  double d3(int i, int j, int k) const;

  // d/dx_v as a jet of order-1.
  Jet partial(int v) const;
  // Drop all terms of degree > order.
  Jet truncate(int order) const;

  // f(this) given the Taylor coefficients f^(k)(a0)/k! of a scalar function.
  Jet compose(std::span<const double> taylor) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);

 private:
  explicit Jet(const JetLayout* layout);
  bool is_scalar() const { return layout_->size() == 1; }
  const JetLayout* layout_;
  std::array<double, kCapacity> c_{};
};

Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet sqrt(const Jet& x);
Jet pow(const Jet& x, double q);
Jet pow(const Jet& x, int k);
Jet square(const Jet& x);
Jet reciprocal(const Jet& x);

using JetVec = std::vector<Jet>;

}  // namespace willmore
