#pragma once

#include <Eigen/Dense>
#include <vector>

namespace willmore {

// Small fixed-capacity dynamic matrices: no heap traffic for n <= 8.
inline constexpr int kMaxDim = 8;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;

// Vector orthogonal to the n columns of an (n+1) x n matrix, with
// det[J | v] = |v|^2 > 0 (cofactor expansion along the appended column).
Vec generalized_cross(const Mat& jacobian);

// Eigenvalues (ascending) of a symmetric matrix.
Vec symmetric_eigenvalues(const Mat& m);

// Eigenvalues of the self-adjoint operator g^{-1} h (g positive definite).
Vec generalized_eigenvalues(const Mat& h, const Mat& g);

double binomial(int n, int k);

// Largest entry of |a - b|.
double max_abs_diff(const Mat& a, const Mat& b);

}  // namespace willmore
