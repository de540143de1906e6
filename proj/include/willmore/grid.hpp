#pragma once

// Tensor-product grids with per-axis differentiation and quadrature.

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "willmore/linalg.hpp"

namespace willmore {

enum class AxisKind {
  Periodic,  // uniform nodes on [lo, hi), Fourier differentiation, trapezoid weights
  Legendre,  // Gauss-Legendre nodes, polynomial differentiation
  Uniform,   // uniform nodes on [lo, hi], 4th-order central stencils
};

struct Axis {
  AxisKind kind = AxisKind::Periodic;
  double lo = 0.0;
  double hi = 1.0;
  int count = 0;

  static Axis periodic(double lo, double hi, int count) { return {AxisKind::Periodic, lo, hi, count}; }
  static Axis legendre(double lo, double hi, int count) { return {AxisKind::Legendre, lo, hi, count}; }
  static Axis uniform(double lo, double hi, int count) { return {AxisKind::Uniform, lo, hi, count}; }
};

using Index = std::vector<int>;

class Grid {
 public:
  explicit Grid(std::vector<Axis> axes);

  int dims() const { return static_cast<int>(axes_.size()); }
  int size() const { return size_; }
  const Axis& axis(int a) const { return axes_[a]; }
  const std::vector<double>& nodes(int a) const { return data_[a].nodes; }
  const std::vector<double>& weights(int a) const { return data_[a].weights; }
  bool periodic(int a) const { return axes_[a].kind == AxisKind::Periodic; }

  Index unflatten(int flat) const;
  int flatten(const Index& idx) const;
  Vec point(int flat) const;
  double weight(int flat) const;
  // True when every axis stencil at this node stays inside the grid.
  bool evaluable(int flat) const;

  // Derivatives of sampled values at a node.  Non-periodic uniform axes throw
  // StencilError within two nodes of the boundary.
  double d1(const std::vector<double>& values, int flat, int a) const;
  double d2(const std::vector<double>& values, int flat, int a, int b) const;
  Vec gradient(const std::vector<double>& values, int flat) const;
  Mat hessian(const std::vector<double>& values, int flat) const;

  // Differentiation matrices of one axis (rows flagged by evaluable_row).
  const Eigen::MatrixXd& first(int a) const { return data_[a].d1; }
  const Eigen::MatrixXd& second(int a) const { return data_[a].d2; }

  std::vector<double> sample(const std::function<double(const Vec&)>& fn) const;
  double integrate(const std::vector<double>& density) const;

 private:
  struct AxisData {
    std::vector<double> nodes, weights;
    Eigen::MatrixXd d1, d2;
    std::vector<bool> valid;
  };
  void check_row(int a, int i) const;

  std::vector<Axis> axes_;
  std::vector<AxisData> data_;
  std::vector<int> stride_;
  int size_ = 1;
};

// Field values on a grid (flat, last axis fastest).
struct ScalarField {
  std::vector<double> values;
};

// Per-node covariant 2-tensor; leafwise tensors carry s x s components.
struct TensorField {
  int rank = 2;
  bool leafwise = false;
  std::vector<Mat> values;
};

}  // namespace willmore
