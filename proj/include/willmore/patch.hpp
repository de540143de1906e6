#pragma once

// Foliated immersed hypersurface patches and their pointwise geometry.
//
// Coordinates are adapted: the leaves are the slices {x^{s+1..n} = const}.
// Tensors are returned in coordinate components unless the name says frame;
// the frame is g-orthonormal with its first s vectors tangent to the leaves.

#include <memory>
#include <mutex>
#include <vector>

#include "willmore/grid.hpp"
#include "willmore/immersion.hpp"

namespace willmore {

struct PointGeometry {
  int n = 0, s = 0;
  Vec x, position, normal;
  Mat jacobian;  // (n+1) x n, columns r_i
  Mat g, g_inv;
  std::vector<Mat> gamma;  // gamma[k](i, j) = Gamma^k_ij
  Mat h, A;
  Mat P;  // P^i_a, orthoprojector onto TF
  Mat frame;
  Mat h_frame;
  Mat h_F, h_mix, h_Fperp;  // covariant; h = h_F + 2 h_mix + h_Fperp
  Mat a_f;                  // s x s, A_F in the leaf frame
  Mat h_mix_block;          // s x (n-s), h(e_i, e_alpha)
  Mat mix_sq;               // s x s, sum_alpha h(e_i,e_alpha) h(e_j,e_alpha)
  Mat mix_sq_perp;          // (n-s) x (n-s), sum_i h(e_alpha,e_i) h(e_beta,e_i)
  std::vector<double> sigma_f;  // sigma^F_0..sigma^F_s
  double H = 0, H_F = 0, dv = 0;
  double norm_h_sq = 0, norm_hf_sq = 0, norm_hmix_sq = 0, norm_hmix_sym_sq = 0;

  // Leaf data (coordinate block 0..s-1).
  Mat g_leaf, g_leaf_inv;
  std::vector<Mat> gamma_leaf;  // s entries of s x s
  double dv_leaf = 0;

  // First derivatives; present when third-order jets were available.
  bool has_derivatives = false;
  std::vector<Mat> dg, dh;  // dg[k] = d_k g, dh[k] = d_k h

  // Frame components of a covariant 2-tensor.
  Mat to_frame(const Mat& t) const { return frame.transpose() * t * frame; }
};

struct PatchOptions {
  int orientation = 1;
  int jet_order = 3;  // 2 drops derivative data (needed for n >= 5 style charts)
};

class FoliatedPatch {
 public:
  FoliatedPatch(ImmersionPtr immersion, int s, std::shared_ptr<const Grid> grid, PatchOptions opt = {});

  int n() const { return n_; }
  int s() const { return s_; }
  int orientation() const { return opt_.orientation; }
  int jet_order() const { return opt_.jet_order; }
  const Grid& grid() const { return *grid_; }
  std::shared_ptr<const Grid> grid_ptr() const { return grid_; }
  const ImmersionPtr& immersion() const { return immersion_; }

  // Cached geometry at every grid node (computed once, thread-safe).
  const std::vector<PointGeometry>& nodes() const;
  const PointGeometry& at(int node) const { return nodes()[node]; }

  // Same patch data with another immersion (e.g. a normal variation).
  FoliatedPatch with_immersion(ImmersionPtr other, int orientation) const;

 private:
  int n_, s_;
  ImmersionPtr immersion_;
  std::shared_ptr<const Grid> grid_;
  PatchOptions opt_;
  struct Cache {
    std::once_flag once;
    std::vector<PointGeometry> nodes;
  };
  std::shared_ptr<Cache> cache_;
};

// Geometry from component jets of order >= 2 (>= 3 adds derivative data).
PointGeometry geometry_from_jets(const JetVec& r, int s, int orientation);
PointGeometry geometry_at(const Immersion& immersion, int s, const Vec& x, int orientation, int order = 3);

PointGeometry point_geometry(const FoliatedPatch& patch, int node);

// Coordinate derivatives of a scalar (closed form or grid field).
struct ScalarDerivs {
  double value = 0;
  Vec grad;  // u_i
  Mat hess;  // u_ij
};
ScalarDerivs derivs_of(const JetScalar& u, const Vec& x);
ScalarDerivs derivs_of(const Grid& grid, const std::vector<double>& values, int node);

struct Hessians {
  Mat full;       // n x n, Hess_u with Christoffel correction
  Mat leaf;       // s x s, leaf connection
  Mat mixed;      // s x (n-s) frame block of the full Hessian
  Mat restricted; // s x s frame block of the full Hessian on TF
};
Hessians hessians(const PointGeometry& pg, const ScalarDerivs& u);
Hessians hessians(const FoliatedPatch& patch, const std::vector<double>& u, int node);

double leaf_laplacian(const PointGeometry& pg, const ScalarDerivs& u);
double leaf_laplacian(const FoliatedPatch& patch, const std::vector<double>& u, int node);
double laplacian(const PointGeometry& pg, const ScalarDerivs& u);
// Leaf gradient as a vector (leaf coordinate components, length s).
Vec leaf_gradient(const PointGeometry& pg, const ScalarDerivs& u);

struct ProjectorDivergence {
  Vec div_p_on_leaves;  // covector b -> (div P)(P d_b)
  Vec h_perp;           // H^perp, coordinate components
  double norm = 0;      // |(div P) o P|
  double identity_residual = 0;  // |(div P)(P .) + <., (n-s) H^perp>|
};
ProjectorDivergence div_projector(const PointGeometry& pg);
ProjectorDivergence div_projector(const FoliatedPatch& patch, int node);

// Double divergence of a symmetric covariant 2-tensor field living on the
// first d coordinates, using the metric block of size d (d = s: (nabla^{F*})^2,
// d = n: (nabla^*)^2).  tensors[node] is d x d.
std::vector<double> double_divergence(const FoliatedPatch& patch, const std::vector<Mat>& tensors, int d);
double fstar_squared(const FoliatedPatch& patch, const std::vector<Mat>& leaf_tensors, int node);

// Leaf divergence of a leaf vector field (components on the first s axes).
std::vector<double> leaf_divergence(const FoliatedPatch& patch, const std::vector<Vec>& fields);

// Pointwise invariant residuals for tests and diagnostics.
struct InvariantResiduals {
  double projector_idempotent = 0, projector_selfadjoint = 0, a_f_vs_pap = 0;
  double hf_hmix_inner = 0, decomposition = 0, normal_unit = 0, normal_orthogonal = 0;
};
InvariantResiduals check_invariants(const PointGeometry& pg);

}  // namespace willmore
