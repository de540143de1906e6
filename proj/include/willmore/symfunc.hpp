#pragma once

// Elementary symmetric functions, power sums, Newton transformations and the
// conformal combinations Q_r of the leafwise principal curvatures.

#include <span>
#include <vector>

#include "willmore/linalg.hpp"

namespace willmore {

inline constexpr double kDefaultTolerance = 1e-10;

// Eigenvalues k_1 <= ... <= k_s of the leafwise shape operator.
class SymmetricSpectrum {
 public:
  explicit SymmetricSpectrum(std::vector<double> eigs);
  // Spectrum of a symmetric matrix (orthonormal-frame representation).
  static SymmetricSpectrum of(const Mat& symmetric);

  int dim() const { return static_cast<int>(eigs_.size()); }
  std::span<const double> eigs() const { return eigs_; }

 private:
  std::vector<double> eigs_;
};

// sigma_0..sigma_s: coefficients of prod (1 + t k_i).
std::vector<double> elementary_symmetric(const SymmetricSpectrum& spec);
// tau_1..tau_max_i.
std::vector<double> power_sums(const SymmetricSpectrum& spec, int max_i);
// sigma_0..sigma_s from tau_1..tau_s via Newton's identities.
std::vector<double> sigma_from_power_sums(std::span<const double> tau, int s);

// S_r = sigma_r / C(s, r).
double mean_curvature_function(std::span<const double> sigma, int s, int r);
// Q_r = sum_j (-1)^{j+1} C(r, j) S_1^{r-j} S_j.
double q_r(std::span<const double> sigma, int s, int r);
double q_r(const SymmetricSpectrum& spec, int r);

struct NewtonOperator {
  Mat matrix;
  int r = 0;
};

// T_r(A) = sum_{j=0}^r (-1)^j sigma_{r-j} A^j for a symmetric s x s matrix A.
NewtonOperator newton_transform(const Mat& a_f, int r, double tol = kDefaultTolerance);

// B = H id - A, the traceless part (up to sign) of A.
struct TracelessPart {
  Mat matrix;
};
TracelessPart traceless_part(const Mat& a_f);

}  // namespace willmore
