#include "willmore/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "willmore/errors.hpp"
#include "willmore/quadrature.hpp"

namespace willmore {

namespace {

void fourier_matrices(int n, double length, Eigen::MatrixXd& d1, Eigen::MatrixXd& d2) {
  const double h = 2.0 * std::numbers::pi / n;
  const double scale = 2.0 * std::numbers::pi / length;
  d1 = Eigen::MatrixXd::Zero(n, n);
  d2 = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j == k) {
        d2(j, k) = -std::numbers::pi * std::numbers::pi / (3.0 * h * h) - 1.0 / 6.0;
        continue;
      }
      const double sgn = ((j - k) % 2 == 0) ? 1.0 : -1.0;
      const double x = 0.5 * (j - k) * h;
      d1(j, k) = 0.5 * sgn / std::tan(x);
      d2(j, k) = -0.5 * sgn / (std::sin(x) * std::sin(x));
    }
  }
  d1 *= scale;
  d2 *= scale * scale;
}

void legendre_matrices(const std::vector<double>& x, const std::vector<double>& w, double lo,
                       double hi, Eigen::MatrixXd& d1, Eigen::MatrixXd& d2) {
  const int n = static_cast<int>(x.size());
  // Barycentric weights of Gauss-Legendre points: (-1)^j sqrt((1 - t_j^2) w_j).
  std::vector<double> t(n), bw(n);
  for (int j = 0; j < n; ++j) {
    t[j] = (2.0 * x[j] - lo - hi) / (hi - lo);
    const double wj = 2.0 * w[j] / (hi - lo);
    bw[j] = ((j % 2) ? -1.0 : 1.0) * std::sqrt((1.0 - t[j] * t[j]) * wj);
  }
  d1 = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double diag = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      d1(j, k) = (bw[k] / bw[j]) / (x[j] - x[k]);
      diag -= d1(j, k);
    }
    d1(j, j) = diag;
  }
  d2 = d1 * d1;
}

void stencil_matrices(int n, double h, Eigen::MatrixXd& d1, Eigen::MatrixXd& d2,
                      std::vector<bool>& valid) {
  static constexpr double c1[5] = {1.0, -8.0, 0.0, 8.0, -1.0};
  static constexpr double c2[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};
  d1 = Eigen::MatrixXd::Zero(n, n);
  d2 = Eigen::MatrixXd::Zero(n, n);
  valid.assign(n, false);
  for (int i = 2; i + 2 < n; ++i) {
    valid[i] = true;
    for (int k = -2; k <= 2; ++k) {
      d1(i, i + k) = c1[k + 2] / (12.0 * h);
      d2(i, i + k) = c2[k + 2] / (12.0 * h * h);
    }
  }
}

}  // namespace

Grid::Grid(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty() || dims() > kMaxDim) throw ValidationError("grid: bad number of axes");
  data_.resize(axes_.size());
  stride_.assign(axes_.size(), 1);
  for (int a = dims() - 1; a >= 0; --a) {
    const Axis& ax = axes_[a];
    if (!(ax.hi > ax.lo)) throw ValidationError("grid: axis bounds must satisfy lo < hi");
    auto& d = data_[a];
    const int n = ax.count;
    switch (ax.kind) {
      case AxisKind::Periodic: {
        if (n < 4 || n % 2) throw ValidationError("grid: periodic axis needs an even count >= 4");
        const double h = (ax.hi - ax.lo) / n;
        for (int i = 0; i < n; ++i) d.nodes.push_back(ax.lo + i * h);
        d.weights.assign(n, h);
        fourier_matrices(n, ax.hi - ax.lo, d.d1, d.d2);
        d.valid.assign(n, true);
        break;
      }
      case AxisKind::Legendre: {
        if (n < 2) throw ValidationError("grid: Legendre axis needs count >= 2");
        auto rule = gauss_legendre(n, ax.lo, ax.hi);
        d.nodes = rule.nodes;
        d.weights = rule.weights;
        legendre_matrices(d.nodes, d.weights, ax.lo, ax.hi, d.d1, d.d2);
        d.valid.assign(n, true);
        break;
      }
      case AxisKind::Uniform: {
        if (n < 5) throw ValidationError("grid: uniform axis needs count >= 5");
        const double h = (ax.hi - ax.lo) / (n - 1);
        for (int i = 0; i < n; ++i) d.nodes.push_back(ax.lo + i * h);
        d.weights.assign(n, h);
        d.weights.front() = d.weights.back() = 0.5 * h;
        stencil_matrices(n, h, d.d1, d.d2, d.valid);
        break;
      }
    }
    if (a + 1 < dims()) stride_[a] = stride_[a + 1] * axes_[a + 1].count;
  }
  size_ = stride_[0] * axes_[0].count;
}

Index Grid::unflatten(int flat) const {
  Index idx(axes_.size());
  for (int a = 0; a < dims(); ++a) {
    idx[a] = flat / stride_[a];
    flat %= stride_[a];
  }
  return idx;
}

int Grid::flatten(const Index& idx) const {
  int flat = 0;
  for (int a = 0; a < dims(); ++a) flat += idx[a] * stride_[a];
  return flat;
}

Vec Grid::point(int flat) const {
  const Index idx = unflatten(flat);
  Vec x(dims());
  for (int a = 0; a < dims(); ++a) x[a] = data_[a].nodes[idx[a]];
  return x;
}

double Grid::weight(int flat) const {
  const Index idx = unflatten(flat);
  double w = 1.0;
  for (int a = 0; a < dims(); ++a) w *= data_[a].weights[idx[a]];
  return w;
}

bool Grid::evaluable(int flat) const {
  const Index idx = unflatten(flat);
  for (int a = 0; a < dims(); ++a) {
    if (!data_[a].valid[idx[a]]) return false;
  }
  return true;
}

void Grid::check_row(int a, int i) const {
  if (!data_[a].valid[i]) {
    throw StencilError("stencil leaves the grid on axis " + std::to_string(a) + " at node " +
                       std::to_string(i));
  }
}

double Grid::d1(const std::vector<double>& values, int flat, int a) const {
  const Index idx = unflatten(flat);
  check_row(a, idx[a]);
  const auto& m = data_[a].d1;
  const int base = flat - idx[a] * stride_[a];
  double sum = 0.0;
  for (int k = 0; k < axes_[a].count; ++k) {
    const double c = m(idx[a], k);
    if (c != 0.0) sum += c * values[base + k * stride_[a]];
  }
  return sum;
}

double Grid::d2(const std::vector<double>& values, int flat, int a, int b) const {
  const Index idx = unflatten(flat);
  check_row(a, idx[a]);
  check_row(b, idx[b]);
  if (a == b) {
    const auto& m = data_[a].d2;
    const int base = flat - idx[a] * stride_[a];
    double sum = 0.0;
    for (int k = 0; k < axes_[a].count; ++k) {
      const double c = m(idx[a], k);
      if (c != 0.0) sum += c * values[base + k * stride_[a]];
    }
    return sum;
  }
  const auto& ma = data_[a].d1;
  const auto& mb = data_[b].d1;
  const int base = flat - idx[a] * stride_[a] - idx[b] * stride_[b];
  double sum = 0.0;
  for (int k = 0; k < axes_[a].count; ++k) {
    const double ca = ma(idx[a], k);
    if (ca == 0.0) continue;
    double inner = 0.0;
    for (int l = 0; l < axes_[b].count; ++l) {
      const double cb = mb(idx[b], l);
      if (cb != 0.0) inner += cb * values[base + k * stride_[a] + l * stride_[b]];
    }
    sum += ca * inner;
  }
  return sum;
}

Vec Grid::gradient(const std::vector<double>& values, int flat) const {
  Vec g(dims());
  for (int a = 0; a < dims(); ++a) g[a] = d1(values, flat, a);
  return g;
}

Mat Grid::hessian(const std::vector<double>& values, int flat) const {
  Mat h(dims(), dims());
  for (int a = 0; a < dims(); ++a) {
    for (int b = a; b < dims(); ++b) h(a, b) = h(b, a) = d2(values, flat, a, b);
  }
  return h;
}

std::vector<double> Grid::sample(const std::function<double(const Vec&)>& fn) const {
  std::vector<double> out(size_);
  for (int i = 0; i < size_; ++i) out[i] = fn(point(i));
  return out;
}

double Grid::integrate(const std::vector<double>& density) const {
  if (static_cast<int>(density.size()) != size_) throw ValidationError("integrate: field size mismatch");
  double sum = 0.0;
  for (int i = 0; i < size_; ++i) sum += weight(i) * density[i];
  return sum;
}

}  // namespace willmore
