#include "willmore/patch.hpp"

#include <cmath>

#include "willmore/errors.hpp"
#include "willmore/symfunc.hpp"

namespace willmore {

namespace {

Mat gram_schmidt(const Mat& g) {
  const int n = static_cast<int>(g.rows());
  Mat e = Mat::Identity(n, n);
  for (int a = 0; a < n; ++a) {
    Vec v = e.col(a);
    for (int b = 0; b < a; ++b) {
      const Vec eb = e.col(b);
      v -= (eb.transpose() * g * v)(0, 0) * eb;
    }
    const double norm = std::sqrt((v.transpose() * g * v)(0, 0));
    e.col(a) = v / norm;
  }
  return e;
}

double frob_sq(const Mat& m) { return m.size() ? m.squaredNorm() : 0.0; }

}  // namespace

PointGeometry geometry_from_jets(const JetVec& r, int s, int orientation) {
  const int rows = static_cast<int>(r.size());
  const int n = rows - 1;
  const int order = r.front().order();
  if (order < 2) throw DomainError("geometry needs jets of order >= 2");
  if (s < 1 || s > n) throw ValidationError("leaf dimension must satisfy 1 <= s <= n");

  PointGeometry pg;
  pg.n = n;
  pg.s = s;
  pg.x = Vec::Zero(n);
  pg.position.resize(rows);
  pg.jacobian.resize(rows, n);
  for (int c = 0; c < rows; ++c) {
    pg.position[c] = r[c].value();
    for (int i = 0; i < n; ++i) pg.jacobian(c, i) = r[c].d1(i);
  }
  // r_ij as vectors
  std::vector<std::vector<Vec>> r2(n, std::vector<Vec>(n, Vec(rows)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int c = 0; c < rows; ++c) r2[i][j][c] = r[c].d2(i, j);
    }
  }
  const Mat& J = pg.jacobian;
  pg.g = J.transpose() * J;
  const double det = pg.g.determinant();
  // Hadamard ratio: scale free, 1 for orthogonal coordinates.
  const double diag = pg.g.diagonal().prod();
  if (!(diag > 0 && det > 1e-14 * diag)) {
    throw SingularImmersionError("degenerate Jacobian (det g = " + std::to_string(det) + ")");
  }
  pg.g_inv = pg.g.inverse();
  pg.dv = std::sqrt(det);
  Vec nrm = generalized_cross(J);
  pg.normal = (orientation >= 0 ? 1.0 : -1.0) * nrm / nrm.norm();

  pg.h.resize(n, n);
  std::vector<Mat> glow(n, Mat(n, n));  // glow[l](i,j) = <r_ij, r_l>
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      pg.h(i, j) = pg.normal.dot(r2[i][j]);
      for (int l = 0; l < n; ++l) glow[l](i, j) = J.col(l).dot(r2[i][j]);
    }
  }
  pg.gamma.assign(n, Mat::Zero(n, n));
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) pg.gamma[k] += pg.g_inv(k, l) * glow[l];
  }
  pg.A = pg.g_inv * pg.h;

  // Foliated splitting.
  pg.g_leaf = pg.g.topLeftCorner(s, s);
  pg.g_leaf_inv = pg.g_leaf.inverse();
  pg.dv_leaf = std::sqrt(pg.g_leaf.determinant());
  pg.gamma_leaf.assign(s, Mat::Zero(s, s));
  for (int k = 0; k < s; ++k) {
    for (int l = 0; l < s; ++l) pg.gamma_leaf[k] += pg.g_leaf_inv(k, l) * glow[l].topLeftCorner(s, s);
  }
  pg.P = Mat::Zero(n, n);
  pg.P.topRows(s) = pg.g_leaf_inv * pg.g.topRows(s);
  const Mat Q = Mat::Identity(n, n) - pg.P;
  pg.h_F = pg.P.transpose() * pg.h * pg.P;
  pg.h_Fperp = Q.transpose() * pg.h * Q;
  pg.h_mix = 0.5 * (pg.P.transpose() * pg.h * Q + Q.transpose() * pg.h * pg.P);
  pg.frame = gram_schmidt(pg.g);
  pg.h_frame = pg.to_frame(pg.h);
  pg.h_frame = 0.5 * (pg.h_frame + pg.h_frame.transpose());
  pg.a_f = pg.h_frame.topLeftCorner(s, s);
  pg.h_mix_block = pg.h_frame.topRightCorner(s, n - s);
  pg.mix_sq = pg.h_mix_block * pg.h_mix_block.transpose();
  pg.mix_sq_perp = pg.h_mix_block.transpose() * pg.h_mix_block;
  pg.sigma_f = elementary_symmetric(SymmetricSpectrum::of(pg.a_f));
  pg.H = pg.A.trace() / n;
  pg.H_F = pg.sigma_f[1] / s;
  pg.norm_h_sq = frob_sq(pg.h_frame);
  pg.norm_hf_sq = frob_sq(pg.a_f);
  pg.norm_hmix_sq = frob_sq(pg.h_mix_block);
  pg.norm_hmix_sym_sq = frob_sq(pg.to_frame(pg.h_mix));

  if (order >= 3) {
    pg.has_derivatives = true;
    pg.dg.assign(n, Mat(n, n));
    pg.dh.assign(n, Mat(n, n));
    Vec r3(rows);
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          pg.dg[k](i, j) = r2[i][k].dot(J.col(j)) + J.col(i).dot(r2[j][k]);
          for (int c = 0; c < rows; ++c) r3[c] = r[c].d3(i, j, k);
          double nk_rij = 0.0;  // N_k = -A^l_k r_l
          for (int l = 0; l < n; ++l) nk_rij -= pg.A(l, k) * glow[l](i, j);
          pg.dh[k](i, j) = pg.normal.dot(r3) + nk_rij;
        }
      }
    }
  }
  return pg;
}

PointGeometry geometry_at(const Immersion& immersion, int s, const Vec& x, int orientation, int order) {
  PointGeometry pg = geometry_from_jets(immersion.jet(x, order), s, orientation);
  pg.x = x;
  return pg;
}

FoliatedPatch::FoliatedPatch(ImmersionPtr immersion, int s, std::shared_ptr<const Grid> grid, PatchOptions opt)
    : n_(immersion->dim()), s_(s), immersion_(std::move(immersion)), grid_(std::move(grid)), opt_(opt),
      cache_(std::make_shared<Cache>()) {
  if (s_ < 1 || s_ > n_) throw ValidationError("leaf dimension must satisfy 1 <= s <= n");
  if (grid_->dims() != n_) throw ValidationError("grid dimension does not match the immersion");
  if (opt_.orientation != 1 && opt_.orientation != -1) throw ValidationError("orientation must be +1 or -1");
}

const std::vector<PointGeometry>& FoliatedPatch::nodes() const {
  std::call_once(cache_->once, [this] {
    auto& out = cache_->nodes;
    out.resize(grid_->size());
    for (int i = 0; i < grid_->size(); ++i) {
      out[i] = geometry_at(*immersion_, s_, grid_->point(i), opt_.orientation, opt_.jet_order);
    }
  });
  return cache_->nodes;
}

FoliatedPatch FoliatedPatch::with_immersion(ImmersionPtr other, int orientation) const {
  PatchOptions opt = opt_;
  opt.orientation = orientation;
  return FoliatedPatch(std::move(other), s_, grid_, opt);
}

PointGeometry point_geometry(const FoliatedPatch& patch, int node) {
  if (node < 0 || node >= patch.grid().size()) throw ValidationError("node outside the grid");
  return patch.at(node);
}

ScalarDerivs derivs_of(const JetScalar& u, const Vec& x) {
  const int n = static_cast<int>(x.size());
  const auto seed = Jet::seed(std::span<const double>(x.data(), x.size()), 2);
  const Jet j = Jet::constant(seed.front().layout(), 0.0) + u(seed);
  ScalarDerivs d;
  d.value = j.value();
  d.grad.resize(n);
  d.hess.resize(n, n);
  for (int i = 0; i < n; ++i) {
    d.grad[i] = j.d1(i);
    for (int k = 0; k < n; ++k) d.hess(i, k) = j.d2(i, k);
  }
  return d;
}

ScalarDerivs derivs_of(const Grid& grid, const std::vector<double>& values, int node) {
  return {values[node], grid.gradient(values, node), grid.hessian(values, node)};
}

Hessians hessians(const PointGeometry& pg, const ScalarDerivs& u) {
  const int n = pg.n, s = pg.s;
  Hessians out;
  out.full = u.hess;
  for (int k = 0; k < n; ++k) out.full -= pg.gamma[k] * u.grad[k];
  out.leaf = u.hess.topLeftCorner(s, s);
  for (int k = 0; k < s; ++k) out.leaf -= pg.gamma_leaf[k] * u.grad[k];
  const Mat f = pg.to_frame(out.full);
  out.restricted = f.topLeftCorner(s, s);
  out.mixed = f.topRightCorner(s, n - s);
  return out;
}

Hessians hessians(const FoliatedPatch& patch, const std::vector<double>& u, int node) {
  return hessians(patch.at(node), derivs_of(patch.grid(), u, node));
}

double leaf_laplacian(const PointGeometry& pg, const ScalarDerivs& u) {
  Mat leaf = u.hess.topLeftCorner(pg.s, pg.s);
  for (int k = 0; k < pg.s; ++k) leaf -= pg.gamma_leaf[k] * u.grad[k];
  return (pg.g_leaf_inv * leaf).trace();
}

double leaf_laplacian(const FoliatedPatch& patch, const std::vector<double>& u, int node) {
  // Only leaf-axis derivatives are needed.
  const auto& grid = patch.grid();
  const int s = patch.s();
  ScalarDerivs d;
  d.value = u[node];
  d.grad = Vec::Zero(patch.n());
  d.hess = Mat::Zero(patch.n(), patch.n());
  for (int a = 0; a < s; ++a) {
    d.grad[a] = grid.d1(u, node, a);
    for (int b = a; b < s; ++b) d.hess(a, b) = d.hess(b, a) = grid.d2(u, node, a, b);
  }
  return leaf_laplacian(patch.at(node), d);
}

double laplacian(const PointGeometry& pg, const ScalarDerivs& u) {
  return (pg.g_inv * hessians(pg, u).full).trace();
}

Vec leaf_gradient(const PointGeometry& pg, const ScalarDerivs& u) {
  return pg.g_leaf_inv * u.grad.head(pg.s);
}

ProjectorDivergence div_projector(const PointGeometry& pg) {
  if (!pg.has_derivatives) throw DomainError("div_projector needs third-order jets");
  const int n = pg.n, s = pg.s;
  std::vector<Mat> dP(n, Mat::Zero(n, n));
  const Mat gft = pg.g.topRows(s);
  for (int k = 0; k < n; ++k) {
    const Mat dgf = pg.dg[k].topLeftCorner(s, s);
    dP[k].topRows(s) = -pg.g_leaf_inv * dgf * pg.g_leaf_inv * gft + pg.g_leaf_inv * pg.dg[k].topRows(s);
  }
  Vec div_p = Vec::Zero(n);
  for (int b = 0; b < n; ++b) {
    for (int a = 0; a < n; ++a) {
      div_p[b] += dP[a](a, b);
      for (int d = 0; d < n; ++d) div_p[b] += pg.gamma[a](a, d) * pg.P(d, b) - pg.gamma[d](a, b) * pg.P(a, d);
    }
  }
  ProjectorDivergence out;
  out.div_p_on_leaves = pg.P.transpose() * div_p;
  out.norm = std::sqrt(std::max(0.0, (out.div_p_on_leaves.transpose() * pg.g_inv * out.div_p_on_leaves)(0, 0)));
  out.h_perp = Vec::Zero(n);
  if (s < n) {
    const int m = n - s;
    const Mat V = (Mat::Identity(n, n) - pg.P).rightCols(m);
    const Mat G = V.transpose() * pg.g * V;
    const Mat Ginv = G.inverse();
    Vec sum = Vec::Zero(n);
    for (int al = 0; al < m; ++al) {
      for (int be = 0; be < m; ++be) {
        Vec cov = Vec::Zero(n);  // nabla_{V_al} V_be
        for (int c = 0; c < n; ++c) {
          for (int a = 0; a < n; ++a) {
            double t = -dP[a](c, s + be);
            for (int d = 0; d < n; ++d) t += pg.gamma[c](a, d) * V(d, be);
            cov[c] += V(a, al) * t;
          }
        }
        sum += Ginv(al, be) * cov;
      }
    }
    const Vec total = pg.P * sum;  // (n-s) H^perp
    out.h_perp = total / m;
    out.identity_residual = (out.div_p_on_leaves + pg.g * total).cwiseAbs().maxCoeff();
  } else {
    out.identity_residual = out.div_p_on_leaves.cwiseAbs().maxCoeff();
  }
  return out;
}

ProjectorDivergence div_projector(const FoliatedPatch& patch, int node) { return div_projector(patch.at(node)); }

std::vector<double> double_divergence(const FoliatedPatch& patch, const std::vector<Mat>& tensors, int d) {
  const auto& grid = patch.grid();
  const int size = grid.size();
  if (static_cast<int>(tensors.size()) != size) throw ValidationError("tensor field size mismatch");
  if (d != patch.s() && d != patch.n()) throw ValidationError("double_divergence: d must be s or n");
  auto metric = [&](const PointGeometry& pg) -> std::pair<Mat, double> {
    if (d == pg.n) return {pg.g_inv, pg.dv};
    return {pg.g_leaf_inv, pg.dv_leaf};
  };
  auto christoffel = [&](const PointGeometry& pg, int j) -> Mat {
    return d == pg.n ? pg.gamma[j] : pg.gamma_leaf[j];
  };
  std::vector<std::vector<double>> y(d * d, std::vector<double>(size));
  std::vector<Mat> contra(size);
  for (int node = 0; node < size; ++node) {
    const auto& pg = patch.at(node);
    const auto [ginv, vol] = metric(pg);
    contra[node] = ginv * tensors[node] * ginv;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) y[i * d + j][node] = vol * contra[node](i, j);
    }
  }
  std::vector<std::vector<double>> z(d, std::vector<double>(size, 0.0));
  for (int node = 0; node < size; ++node) {
    if (!grid.evaluable(node)) continue;
    const auto& pg = patch.at(node);
    const double vol = metric(pg).second;
    for (int j = 0; j < d; ++j) {
      double w = 0.0;
      for (int i = 0; i < d; ++i) w += grid.d1(y[i * d + j], node, i);
      w /= vol;
      w += (christoffel(pg, j).array() * contra[node].array()).sum();
      z[j][node] = vol * w;
    }
  }
  std::vector<double> out(size, 0.0);
  for (int node = 0; node < size; ++node) {
    if (!grid.evaluable(node)) continue;
    double acc = 0.0;
    for (int j = 0; j < d; ++j) acc += grid.d1(z[j], node, j);
    out[node] = acc / metric(patch.at(node)).second;
  }
  return out;
}

double fstar_squared(const FoliatedPatch& patch, const std::vector<Mat>& leaf_tensors, int node) {
  return double_divergence(patch, leaf_tensors, patch.s())[node];
}

std::vector<double> leaf_divergence(const FoliatedPatch& patch, const std::vector<Vec>& fields) {
  const auto& grid = patch.grid();
  const int s = patch.s();
  std::vector<std::vector<double>> y(s, std::vector<double>(grid.size()));
  for (int node = 0; node < grid.size(); ++node) {
    for (int i = 0; i < s; ++i) y[i][node] = patch.at(node).dv_leaf * fields[node][i];
  }
  std::vector<double> out(grid.size(), 0.0);
  for (int node = 0; node < grid.size(); ++node) {
    if (!grid.evaluable(node)) continue;
    double acc = 0.0;
    for (int i = 0; i < s; ++i) acc += grid.d1(y[i], node, i);
    out[node] = acc / patch.at(node).dv_leaf;
  }
  return out;
}

InvariantResiduals check_invariants(const PointGeometry& pg) {
  InvariantResiduals r;
  const int n = pg.n, s = pg.s;
  r.projector_idempotent = max_abs_diff(pg.P * pg.P, pg.P);
  const Mat gp = pg.g * pg.P;
  r.projector_selfadjoint = max_abs_diff(gp, gp.transpose());
  const Mat pap = pg.P * pg.A * pg.P;
  const Mat in_frame = pg.frame.inverse() * pap * pg.frame;
  Mat expect = Mat::Zero(n, n);
  expect.topLeftCorner(s, s) = pg.a_f;
  r.a_f_vs_pap = max_abs_diff(in_frame, expect);
  r.hf_hmix_inner = std::abs((pg.g_inv * pg.h_F * pg.g_inv * pg.h_mix).trace());
  r.decomposition = max_abs_diff(pg.h, pg.h_F + 2.0 * pg.h_mix + pg.h_Fperp);
  r.normal_unit = std::abs(pg.normal.norm() - 1.0);
  r.normal_orthogonal = (pg.jacobian.transpose() * pg.normal).cwiseAbs().maxCoeff();
  return r;
}

}  // namespace willmore
