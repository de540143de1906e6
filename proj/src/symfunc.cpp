#include "willmore/symfunc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "willmore/errors.hpp"

namespace willmore {

SymmetricSpectrum::SymmetricSpectrum(std::vector<double> eigs) : eigs_(std::move(eigs)) {
  if (eigs_.empty()) throw DomainError("empty eigenvalue list");
  std::sort(eigs_.begin(), eigs_.end());
}

SymmetricSpectrum SymmetricSpectrum::of(const Mat& symmetric) {
  const Vec ev = symmetric_eigenvalues(symmetric);
  return SymmetricSpectrum(std::vector<double>(ev.data(), ev.data() + ev.size()));
}

std::vector<double> elementary_symmetric(const SymmetricSpectrum& spec) {
  const int s = spec.dim();
  std::vector<double> sigma(s + 1, 0.0);
  sigma[0] = 1.0;
  // Multiply the running polynomial by (1 + t k).
  int deg = 0;
  for (double k : spec.eigs()) {
    ++deg;
    for (int r = deg; r >= 1; --r) sigma[r] += k * sigma[r - 1];
  }
  return sigma;
}

std::vector<double> power_sums(const SymmetricSpectrum& spec, int max_i) {
  if (max_i < 1) throw DomainError("power_sums: max_i must be >= 1");
  std::vector<double> tau(max_i, 0.0);
  for (double k : spec.eigs()) {
    double pw = 1.0;
    for (int i = 0; i < max_i; ++i) {
      pw *= k;
      tau[i] += pw;
    }
  }
  return tau;
}

std::vector<double> sigma_from_power_sums(std::span<const double> tau, int s) {
  if (static_cast<int>(tau.size()) < s) throw DomainError("need tau_1..tau_s");
  std::vector<double> sigma(s + 1, 0.0);
  sigma[0] = 1.0;
  // r sigma_r = sum_{i=1}^r (-1)^{i-1} sigma_{r-i} tau_i
  for (int r = 1; r <= s; ++r) {
    double acc = 0.0;
    for (int i = 1; i <= r; ++i) acc += ((i % 2) ? 1.0 : -1.0) * sigma[r - i] * tau[i - 1];
    sigma[r] = acc / r;
  }
  return sigma;
}

double mean_curvature_function(std::span<const double> sigma, int s, int r) {
  if (r < 0 || r > s) throw DomainError("S_r: r out of range");
  return sigma[r] / binomial(s, r);
}

double q_r(std::span<const double> sigma, int s, int r) {
  if (r < 1 || r > s) throw DomainError("Q_r requires 1 <= r <= s, got r=" + std::to_string(r));
  const double s1 = mean_curvature_function(sigma, s, 1);
  double q = 0.0;
  for (int j = 0; j <= r; ++j) {
    const double sign = (j % 2) ? 1.0 : -1.0;  // (-1)^{j+1}
    q += sign * binomial(r, j) * std::pow(s1, r - j) * mean_curvature_function(sigma, s, j);
  }
  return q;
}

double q_r(const SymmetricSpectrum& spec, int r) {
  const auto sigma = elementary_symmetric(spec);
  return q_r(sigma, spec.dim(), r);
}

NewtonOperator newton_transform(const Mat& a_f, int r, double tol) {
  const int s = static_cast<int>(a_f.rows());
  if (a_f.cols() != s) throw ValidationError("newton_transform: matrix must be square");
  if (r < 0 || r > s) throw DomainError("newton_transform: r out of range");
  const double scale = std::max(1.0, a_f.cwiseAbs().maxCoeff());
  if (max_abs_diff(a_f, a_f.transpose()) > tol * scale) {
    throw ValidationError("newton_transform: matrix is not symmetric");
  }
  const Mat sym = 0.5 * (a_f + a_f.transpose());
  const auto sigma = elementary_symmetric(SymmetricSpectrum::of(sym));
  Mat t = Mat::Zero(s, s);
  Mat power = Mat::Identity(s, s);
  for (int j = 0; j <= r; ++j) {
    t += ((j % 2) ? -1.0 : 1.0) * sigma[r - j] * power;
    power = power * sym;
  }
  return {t, r};
}

TracelessPart traceless_part(const Mat& a_f) {
  const int s = static_cast<int>(a_f.rows());
  const double h = a_f.trace() / s;
  return {h * Mat::Identity(s, s) - a_f};
}

}  // namespace willmore
