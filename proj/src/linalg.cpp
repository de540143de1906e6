#include "willmore/linalg.hpp"

#include <cmath>

#include "willmore/errors.hpp"

namespace willmore {

Vec generalized_cross(const Mat& jacobian) {
  const int rows = static_cast<int>(jacobian.rows());
  const int n = static_cast<int>(jacobian.cols());
  if (rows != n + 1) throw ValidationError("generalized_cross expects an (n+1) x n matrix");
  Vec v(rows);
  Mat minor(n, n);
  for (int k = 0; k < rows; ++k) {
    for (int r = 0, mr = 0; r < rows; ++r) {
      if (r == k) continue;
      minor.row(mr++) = jacobian.row(r);
    }
    // Cofactor of entry (k, n) of the square matrix [J | v].
    const double sign = ((k + n) % 2 == 0) ? 1.0 : -1.0;
    v(k) = sign * minor.determinant();
  }
  return v;
}

Vec symmetric_eigenvalues(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Vec generalized_eigenvalues(const Mat& h, const Mat& g) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(h, g, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

double max_abs_diff(const Mat& a, const Mat& b) {
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace willmore
