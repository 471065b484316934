#pragma once

// Dense complex linear algebra: rank-revealing kernels, determinants and
// spectral projectors onto sums of generalized eigenspaces of non-normal
// matrices.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <vector>

#include "torsionlab/error.hpp"

namespace torsionlab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

struct ToleranceConfig {
  double rank_tol = 1e-10;     // relative to the largest singular value
  double cluster_tol = 1e-8;   // relative to the operator norm
  double check_tol = 1e-8;

  void validate() const {
    for (double t : {rank_tol, cluster_tol, check_tol}) {
      if (!(t > 0.0 && t < 1.0)) {
        throw InputError("tolerances must lie strictly between 0 and 1");
      }
    }
  }
};

inline void require_finite(const CMatrix& a, const char* what = "matrix") {
  if (!a.allFinite()) throw InputError(std::string(what) + " has non-finite entries");
}

inline void require_square(const CMatrix& a, const char* what = "matrix") {
  if (a.rows() != a.cols()) {
    throw InputError(std::string(what) + " must be square, got " + std::to_string(a.rows()) +
                     "x" + std::to_string(a.cols()));
  }
}

/// Spectral norm; 0 for empty matrices.
inline double operator_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

struct SvdSplit {
  Index rank = 0;
  CMatrix range;   // orthonormal basis of the column space
  CMatrix kernel;  // orthonormal basis of the null space
  CMatrix corange; // orthonormal basis of the row space (complement of kernel)
  Eigen::VectorXd singular_values;
};

inline SvdSplit svd_split(const CMatrix& a, double rank_tol) {
  require_finite(a);
  SvdSplit out;
  const Index m = a.rows(), n = a.cols();
  if (m == 0 || n == 0) {
    out.range = CMatrix(m, 0);
    out.kernel = CMatrix::Identity(n, n);
    out.corange = CMatrix(n, 0);
    return out;
  }
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.singular_values = svd.singularValues();
  const double top = out.singular_values(0);
  Index r = 0;
  if (top > 0.0) {
    while (r < out.singular_values.size() && out.singular_values(r) > rank_tol * top) ++r;
  }
  out.rank = r;
  out.range = svd.matrixU().leftCols(r);
  out.corange = svd.matrixV().leftCols(r);
  out.kernel = svd.matrixV().rightCols(n - r);
  return out;
}

inline Index numerical_rank(const CMatrix& a, const ToleranceConfig& tol = {}) {
  return svd_split(a, tol.rank_tol).rank;
}

/// Orthonormal kernel vectors, one per column.
inline CMatrix kernel_basis(const CMatrix& a, const ToleranceConfig& tol = {}) {
  return svd_split(a, tol.rank_tol).kernel;
}

inline CMatrix range_basis(const CMatrix& a, const ToleranceConfig& tol = {}) {
  return svd_split(a, tol.rank_tol).range;
}

/// Orthonormal basis of the dominant `dim`-dimensional column space, for
/// matrices whose rank is known from elsewhere.
inline CMatrix dominant_columns(const CMatrix& a, Index dim) {
  if (dim == 0 || a.rows() == 0) return CMatrix(a.rows(), 0);
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(dim);
}

inline Complex determinant(const CMatrix& a) {
  require_square(a);
  require_finite(a);
  if (a.rows() == 0) return Complex(1.0, 0.0);
  return a.partialPivLu().determinant();
}

inline CVector eigenvalues(const CMatrix& a) {
  require_square(a);
  require_finite(a);
  if (a.rows() == 0) return CVector(0);
  Eigen::ComplexEigenSolver<CMatrix> es(a, false);
  return es.eigenvalues();
}

/// Single-linkage clusters of `values` under `radius`; each entry lists member
/// indices.
inline std::vector<std::vector<Index>> cluster_values(const CVector& values, double radius) {
  const Index n = values.size();
  std::vector<Index> parent(n);
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (std::abs(values(i) - values(j)) <= radius) parent[find(i)] = find(j);
    }
  }
  std::vector<std::vector<Index>> groups;
  std::vector<Index> slot(n, -1);
  for (Index i = 0; i < n; ++i) {
    Index r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<Index>(groups.size());
      groups.emplace_back();
    }
    groups[slot[r]].push_back(i);
  }
  return groups;
}

struct SpectralCluster {
  Complex center;
  Index algebraic_multiplicity = 0;
  CMatrix projector;
};

namespace detail {

struct OrderedSchur {
  CMatrix t;  // upper triangular, selected eigenvalues first
  CMatrix u;  // unitary, a = u t u*
  Index selected = 0;
};

// Swap the adjacent diagonal entries k, k+1 of an upper-triangular t by a
// Givens rotation, updating u so that u t u* is unchanged.
inline void swap_adjacent(CMatrix& t, CMatrix& u, Index k) {
  const Complex a = t(k, k), c = t(k + 1, k + 1), b = t(k, k + 1);
  const Complex x0 = b, x1 = c - a;
  const double r = std::hypot(std::abs(x0), std::abs(x1));
  if (r == 0.0) return;
  Eigen::Matrix2cd g;
  g << x0 / r, -std::conj(x1) / r, x1 / r, std::conj(x0) / r;
  const Index n = t.rows();
  t.block(k, k, 2, n - k) = g.adjoint() * t.block(k, k, 2, n - k);
  t.block(0, k, k + 2, 2) = t.block(0, k, k + 2, 2) * g;
  u.middleCols(k, 2) = u.middleCols(k, 2) * g;
  t(k + 1, k) = Complex(0.0, 0.0);
}

template <class Pred>
OrderedSchur ordered_schur(const CMatrix& a, Pred selected) {
  OrderedSchur out;
  const Index n = a.rows();
  if (n == 0) {
    out.t = CMatrix(0, 0);
    out.u = CMatrix(0, 0);
    return out;
  }
  Eigen::ComplexSchur<CMatrix> schur(a);
  out.t = schur.matrixT().triangularView<Eigen::Upper>();
  out.u = schur.matrixU();
  std::vector<char> mask(n);
  for (Index i = 0; i < n; ++i) mask[i] = selected(out.t(i, i)) ? 1 : 0;
  Index next = 0;
  for (Index i = 0; i < n; ++i) {
    if (!mask[i]) continue;
    for (Index k = i; k > next; --k) {
      swap_adjacent(out.t, out.u, k - 1);
      std::swap(mask[k], mask[k - 1]);
    }
    ++next;
  }
  out.selected = next;
  return out;
}

// Solve t11 x - x t22 = rhs for upper-triangular t11, t22 with disjoint spectra.
inline CMatrix solve_triangular_sylvester(const CMatrix& t11, const CMatrix& t22,
                                          const CMatrix& rhs) {
  const Index k = t11.rows(), m = t22.rows();
  CMatrix x(k, m);
  for (Index j = 0; j < m; ++j) {
    CVector col = rhs.col(j);
    for (Index i = 0; i < j; ++i) col += x.col(i) * t22(i, j);
    CMatrix shifted = t11;
    shifted.diagonal().array() -= t22(j, j);
    x.col(j) = shifted.triangularView<Eigen::Upper>().solve(col);
  }
  return x;
}

// Spectral projector onto the leading invariant subspace, together with an
// orthonormal basis of the complementary invariant subspace.
struct SchurProjector {
  CMatrix projector;
  CMatrix selected_basis;
  CMatrix complement_basis;
};

inline SchurProjector projector_from_schur(const OrderedSchur& s) {
  const Index n = s.t.rows(), k = s.selected;
  SchurProjector out;
  if (k == 0 || k == n) {
    out.projector = k == 0 ? CMatrix(CMatrix::Zero(n, n)) : CMatrix(CMatrix::Identity(n, n));
    out.selected_basis = s.u.leftCols(k);
    out.complement_basis = s.u.rightCols(n - k);
    return out;
  }
  const CMatrix t11 = s.t.topLeftCorner(k, k);
  const CMatrix t12 = s.t.topRightCorner(k, n - k);
  const CMatrix t22 = s.t.bottomRightCorner(n - k, n - k);
  const CMatrix x = solve_triangular_sylvester(t11, t22, -t12);
  CMatrix inner = CMatrix::Zero(n, n);
  inner.topLeftCorner(k, k).setIdentity();
  inner.topRightCorner(k, n - k) = -x;
  out.projector = s.u * inner * s.u.adjoint();
  out.selected_basis = s.u.leftCols(k);
  CMatrix stacked(n, n - k);
  stacked.topRows(k) = x;
  stacked.bottomRows(n - k).setIdentity();
  Eigen::HouseholderQR<CMatrix> qr(s.u * stacked);
  out.complement_basis = qr.householderQ() * CMatrix::Identity(n, n - k);
  return out;
}

inline double spectral_scale(const CMatrix& a) {
  const double s = operator_norm(a);
  return s > 0.0 ? s : 1.0;
}

}  // namespace detail

/// Projector onto the generalized eigenspaces of the eigenvalues clustered
/// around `centers`.
inline SpectralCluster generalized_eigenprojector(const CMatrix& a,
                                                  const std::vector<Complex>& centers,
                                                  const ToleranceConfig& tol = {}) {
  require_square(a);
  require_finite(a);
  tol.validate();
  const double radius = tol.cluster_tol * detail::spectral_scale(a);
  const CVector vals = eigenvalues(a);
  const auto groups = cluster_values(vals, radius);

  std::vector<char> take(vals.size(), 0);
  for (const Complex& c : centers) {
    bool hit = false;
    for (const auto& g : groups) {
      bool near = std::any_of(g.begin(), g.end(),
                              [&](Index i) { return std::abs(vals(i) - c) <= radius; });
      if (!near) continue;
      hit = true;
      for (Index i : g) take[i] = 1;
    }
    if (!hit) throw InputError("cluster center is not an eigenvalue within cluster_tol");
  }

  SpectralCluster out;
  Complex sum(0.0, 0.0);
  for (Index i = 0; i < vals.size(); ++i) {
    if (take[i]) {
      sum += vals(i);
      ++out.algebraic_multiplicity;
    }
  }
  out.center = out.algebraic_multiplicity ? sum / double(out.algebraic_multiplicity) : sum;

  // Membership is decided on the Schur diagonal, which carries the same
  // eigenvalues up to rounding; re-cluster against the selected set.
  auto selected = [&](const Complex& mu) {
    for (Index i = 0; i < vals.size(); ++i) {
      if (take[i] && std::abs(mu - vals(i)) <= radius) return true;
    }
    return false;
  };
  const auto schur = detail::ordered_schur(a, selected);
  if (schur.selected != out.algebraic_multiplicity) {
    throw CutCollision("cluster is not separated from the rest of the spectrum", {});
  }
  out.projector = detail::projector_from_schur(schur).projector;
  return out;
}

struct InvariantSplit {
  CMatrix low;   // projector onto |mu| <= lambda
  CMatrix high;  // complementary projector
  Index low_dim = 0;
  CMatrix low_basis;   // orthonormal basis of image(low)
  CMatrix high_basis;  // orthonormal basis of image(high)
  CVector spectrum;
};

/// Threshold below which eigenvalues count as numerically zero, relative to
/// the scale of the operator.
inline double zero_band(double scale, const ToleranceConfig& tol) {
  return std::sqrt(tol.cluster_tol) * scale;
}

/// Splits the space into the generalized eigenspaces with |mu| <= lambda and
/// |mu| > lambda. `scale` sets the clustering radius; pass the same value for
/// operators that must be cut consistently, or a nonpositive value to use the
/// operator norm of `a`.
inline InvariantSplit invariant_split(const CMatrix& a, double lambda,
                                      const ToleranceConfig& tol = {}, double scale = -1.0) {
  require_square(a);
  require_finite(a);
  tol.validate();
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InputError("lambda must be a finite nonnegative real");
  }
  if (!(scale > 0.0)) scale = detail::spectral_scale(a);
  const double radius = tol.cluster_tol * scale;
  const double cut = std::max(lambda, zero_band(scale, tol));

  InvariantSplit out;
  out.spectrum = eigenvalues(a);
  std::vector<double> nearest;
  for (Index i = 0; i < out.spectrum.size(); ++i) {
    const double m = std::abs(out.spectrum(i));
    if (std::abs(m - cut) <= radius) nearest.push_back(m);
  }
  if (!nearest.empty()) {
    throw CutCollision("eigenvalue on the cut circle |mu| = " + std::to_string(cut),
                       nearest);
  }
  const auto schur =
      detail::ordered_schur(a, [&](const Complex& mu) { return std::abs(mu) <= cut; });
  const auto p = detail::projector_from_schur(schur);
  const Index n = a.rows();
  out.low = p.projector;
  out.high = CMatrix::Identity(n, n) - p.projector;
  out.low_dim = schur.selected;
  out.low_basis = p.selected_basis;
  out.high_basis = p.complement_basis;
  return out;
}

}  // namespace torsionlab
