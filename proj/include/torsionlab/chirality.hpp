#pragma once

// Degree-reversing involutions, sharp differentials and the doubled operator
// B = G~ D~ + D~ G~ on C (+) C.

#include <string>
#include <vector>

#include "torsionlab/bicomplex.hpp"

namespace torsionlab {

class ChiralityComplex {
 public:
  /// d[j] : C^j -> C^{j+1}; gamma[k] : C^k -> C^{n-k}.
  ChiralityComplex(std::vector<Index> dims, std::vector<CMatrix> d, std::vector<CMatrix> gamma,
                   const ToleranceConfig& tol = {})
      : dims_(std::move(dims)), d_(std::move(d)), gamma_(std::move(gamma)) {
    detail::check_graded_shapes(dims_, d_, true);
    const int n = top_degree();
    if (int(gamma_.size()) != n + 1) throw InputError("one Gamma block per degree is required");
    for (int k = 0; k <= n; ++k) {
      if (dims_[k] != dims_[n - k]) {
        throw InputError("dims must be symmetric under k -> n-k (degree " + std::to_string(k) +
                         ")");
      }
      if (gamma_[k].rows() != dims_[n - k] || gamma_[k].cols() != dims_[k]) {
        throw InputError("Gamma block " + std::to_string(k) + " has wrong shape");
      }
      require_finite(gamma_[k], "Gamma");
    }
    for (int k = 0; k <= n; ++k) {
      if (dims_[k] == 0) continue;
      const CMatrix id = CMatrix::Identity(dims_[k], dims_[k]);
      const double r = (gamma_[n - k] * gamma_[k] - id).norm() / std::sqrt(double(dims_[k]));
      if (r > tol.check_tol) throw InputError("Gamma^2 != Id in degree " + std::to_string(k));
    }
    for (int j = 0; j + 1 < n; ++j) {
      const double r = detail::square_residual(d_[j + 1], d_[j]);
      if (r > tol.check_tol) throw CheckFailure("d^2 != 0", j, r);
    }
  }

  int top_degree() const { return int(dims_.size()) - 1; }
  const std::vector<Index>& dims() const { return dims_; }
  const std::vector<CMatrix>& d_maps() const { return d_; }
  const std::vector<CMatrix>& gamma() const { return gamma_; }

  CMatrix d(int j) const {
    if (j >= 0 && j < top_degree()) return d_[j];
    const Index src = (j >= 0 && j <= top_degree()) ? dims_[j] : 0;
    const Index dst = (j + 1 >= 0 && j + 1 <= top_degree()) ? dims_[j + 1] : 0;
    return CMatrix::Zero(dst, src);
  }

 private:
  std::vector<Index> dims_;
  std::vector<CMatrix> d_;
  std::vector<CMatrix> gamma_;
};

namespace detail {

// Gamma_{n-k+1} e_{n-k} Gamma_k : C^k -> C^{k-1}, for k = 1..n.
inline std::vector<CMatrix> conjugated_down(const ChiralityComplex& g, const ChiralityComplex& e) {
  const int n = g.top_degree();
  std::vector<CMatrix> out;
  for (int k = 1; k <= n; ++k) out.push_back(g.gamma()[n - k + 1] * e.d(n - k) * g.gamma()[k]);
  return out;
}

}  // namespace detail

/// (C, d, Gamma d Gamma).
inline BiGradedComplex sharp_differential(const ChiralityComplex& x) {
  return BiGradedComplex(x.dims(), x.d_maps(), detail::conjugated_down(x, x));
}

/// Graded-total layout used for B: degree offsets inside one copy of C.
inline std::vector<Index> degree_offsets(const std::vector<Index>& dims) {
  std::vector<Index> off(dims.size() + 1, 0);
  for (size_t k = 0; k < dims.size(); ++k) off[k + 1] = off[k] + dims[k];
  return off;
}

class DoubledComplex {
 public:
  DoubledComplex(ChiralityComplex xmin, ChiralityComplex xmax, const ToleranceConfig& tol = {})
      : min_(std::move(xmin)), max_(std::move(xmax)) {
    if (min_.dims() != max_.dims()) throw InputError("doubled constituents differ in dimensions");
    const int n = min_.top_degree();
    for (int k = 0; k <= n; ++k) {
      const double r = (min_.gamma()[k] - max_.gamma()[k]).norm();
      if (r > tol.check_tol * std::max(1.0, min_.gamma()[k].norm())) {
        throw InputError("doubled constituents must share Gamma");
      }
    }
    rel_ = BiGradedComplex(min_.dims(), min_.d_maps(), detail::conjugated_down(min_, max_));
    abs_ = BiGradedComplex(max_.dims(), max_.d_maps(), detail::conjugated_down(max_, min_));
    assemble_b();
  }

  const ChiralityComplex& min_role() const { return min_; }
  const ChiralityComplex& max_role() const { return max_; }
  int top_degree() const { return min_.top_degree(); }
  const std::vector<Index>& dims() const { return min_.dims(); }

  /// (C, d_min, Gamma d_max Gamma)
  const BiGradedComplex& rel() const { return rel_; }
  /// (C, d_max, Gamma d_min Gamma)
  const BiGradedComplex& abs() const { return abs_; }

  /// B on the total space [rel copy | abs copy], each copy ordered by degree.
  const CMatrix& b() const { return b_; }

  /// Degree-k block of B^2 acting on C^k (+) C^k.
  CMatrix b_squared_block(int k) const {
    const auto idx = doubled_indices(k);
    const CMatrix b2 = b_ * b_;
    CMatrix out(idx.size(), idx.size());
    for (size_t i = 0; i < idx.size(); ++i)
      for (size_t j = 0; j < idx.size(); ++j) out(i, j) = b2(idx[i], idx[j]);
    return out;
  }

  /// Gamma~ : degree n-k -> degree k, on C (+) C.
  CMatrix gamma_tilde(int k) const {
    const int n = top_degree();
    const CMatrix& g = min_.gamma()[n - k];
    const Index c = g.rows();
    const Index s = g.cols();
    CMatrix out = CMatrix::Zero(2 * c, 2 * s);
    out.topRightCorner(c, s) = g;
    out.bottomLeftCorner(c, s) = g;
    return out;
  }

  /// diag(d_min, d_max) : C^j (+) C^j -> C^{j+1} (+) C^{j+1}
  CMatrix nabla(int j) const {
    const CMatrix a = min_.d(j), m = max_.d(j);
    CMatrix out = CMatrix::Zero(a.rows() + m.rows(), a.cols() + m.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(m.rows(), m.cols()) = m;
    return out;
  }

  /// ||B^2 - diag(Delta_rel, Delta_abs)|| relative to ||B||^2.
  double block_diagonality_residual() const {
    const Index t = total_;
    CMatrix target = CMatrix::Zero(2 * t, 2 * t);
    const auto off = degree_offsets(dims());
    for (int k = 0; k <= top_degree(); ++k) {
      const Index c = dims()[k];
      target.block(off[k], off[k], c, c) = sharp_laplacian(rel_, k);
      target.block(t + off[k], t + off[k], c, c) = sharp_laplacian(abs_, k);
    }
    const double scale = std::max(1.0, b_.squaredNorm());
    return (b_ * b_ - target).norm() / scale;
  }

 private:
  std::vector<Index> doubled_indices(int k) const {
    const auto off = degree_offsets(dims());
    std::vector<Index> idx;
    for (Index i = 0; i < dims()[k]; ++i) idx.push_back(off[k] + i);
    for (Index i = 0; i < dims()[k]; ++i) idx.push_back(total_ + off[k] + i);
    return idx;
  }

  void assemble_b() {
    const auto off = degree_offsets(dims());
    const int n = top_degree();
    total_ = off.back();
    CMatrix gam = CMatrix::Zero(total_, total_);
    CMatrix dmin = CMatrix::Zero(total_, total_), dmax = CMatrix::Zero(total_, total_);
    for (int k = 0; k <= n; ++k) {
      gam.block(off[n - k], off[k], dims()[n - k], dims()[k]) = min_.gamma()[k];
      if (k < n) {
        dmin.block(off[k + 1], off[k], dims()[k + 1], dims()[k]) = min_.d(k);
        dmax.block(off[k + 1], off[k], dims()[k + 1], dims()[k]) = max_.d(k);
      }
    }
    b_ = CMatrix::Zero(2 * total_, 2 * total_);
    b_.topRightCorner(total_, total_) = gam * dmax + dmin * gam;
    b_.bottomLeftCorner(total_, total_) = gam * dmin + dmax * gam;
  }

  ChiralityComplex min_, max_;
  BiGradedComplex rel_, abs_;
  CMatrix b_;
  Index total_ = 0;
};

inline DoubledComplex build_doubled(const ChiralityComplex& xmin, const ChiralityComplex& xmax,
                                    const ToleranceConfig& tol = {}) {
  return DoubledComplex(xmin, xmax, tol);
}

struct DeterminantComparison {
  Complex lhs{1.0, 0.0};  // prod det(B^2_high,k)^{(-1)^{k+1} k / 2}
  Complex rhs{1.0, 0.0};  // prod det(Delta_rel,high,k)^{(-1)^{k+1} k}
  Complex rhs_abs{1.0, 0.0};
  Complex radicand{1.0, 0.0};
  std::vector<Complex> b2_dets;   // per degree, high band of B^2
  std::vector<Complex> rel_dets;  // per degree, high band of Delta_rel
  double relative_difference = 0.0;
};

namespace detail {

inline double doubled_scale(const DoubledComplex& dc) {
  double s = 0.0;
  for (int k = 0; k <= dc.top_degree(); ++k) s = std::max(s, operator_norm(dc.b_squared_block(k)));
  return s > 0.0 ? s : 1.0;
}

inline Complex high_det(const CMatrix& a, double lambda, const ToleranceConfig& tol, double scale) {
  const auto s = invariant_split(a, lambda, tol, scale);
  const CMatrix r = s.high_basis.adjoint() * a * s.high_basis;
  return determinant(r);
}

}  // namespace detail

/// The lhs takes the square root on the block-diagonal factorization: rel
/// determinants carry the exponent, and only the graded quotient
/// prod (det B^2_k / det rel_k^2)^{e_k} passes through the principal root.
inline DeterminantComparison determinant_comparison(const DoubledComplex& dc, double lambda,
                                                    const ToleranceConfig& tol = {}) {
  tol.validate();
  DeterminantComparison out;
  const int n = dc.top_degree();
  const double scale_b = detail::doubled_scale(dc);
  const double scale_rel = laplacian_scale(dc.rel());
  const double scale_abs = laplacian_scale(dc.abs());
  for (int k = 0; k <= n; ++k) {
    const long long e = detail::parity_sign(k + 1) * k;
    const Complex b2 = detail::high_det(dc.b_squared_block(k), lambda, tol, scale_b);
    const Complex rel = detail::high_det(sharp_laplacian(dc.rel(), k), lambda, tol, scale_rel);
    const Complex ab = detail::high_det(sharp_laplacian(dc.abs(), k), lambda, tol, scale_abs);
    out.b2_dets.push_back(b2);
    out.rel_dets.push_back(rel);
    out.rhs *= detail::int_power(rel, e);
    out.rhs_abs *= detail::int_power(ab, e);
    out.radicand *= detail::int_power(b2 / (rel * rel), e);
  }
  out.lhs = out.rhs * std::sqrt(out.radicand);
  out.relative_difference = std::abs(out.lhs - out.rhs) / std::max(std::abs(out.rhs), 1e-300);
  return out;
}

struct ComparisonReport {
  double ratio = 0.0;  // |T_rel| / (|rho| |lhs|)
  Complex t_rel{1.0, 0.0};
  Complex rho{1.0, 0.0};
  Complex lhs{1.0, 0.0};
  Complex rhs{1.0, 0.0};
  std::vector<std::string> warnings;
};

/// Modulus comparison of the rel torsion with the refined-torsion coordinate
/// rho_[0,lambda] * (graded det B^2)^{1/2}. rho is the torsion of the doubled
/// low band with a Gamma~-symmetric chain element and cohomology
/// representatives (e_j, Gamma g_{n-j}). Requires odd top degree.
inline ComparisonReport comparison_residual(
    const DoubledComplex& dc, double lambda, const ToleranceConfig& tol = {},
    const std::optional<std::vector<BasedSpace>>& cohomology = {},
    const std::optional<std::vector<BasedSpace>>& homology = {}) {
  tol.validate();
  const int n = dc.top_degree();
  if (n % 2 == 0) throw InputError("comparison_residual needs an odd top degree");
  ComparisonReport rep;

  const auto e = detail::resolve_reps(dc.rel(), Differential::d, cohomology, tol);
  const auto g = detail::resolve_reps(dc.rel(), Differential::dstar, homology, tol);
  const TorsionElement t = cm_torsion(dc.rel(), lambda, sign_convention(SignMode::plain), e, g, tol);
  rep.t_rel = t.coordinate;

  const double scale_b = detail::doubled_scale(dc);
  std::vector<CMatrix> w, p;
  for (int k = 0; k <= n; ++k) {
    auto s = invariant_split(dc.b_squared_block(k), lambda, tol, scale_b);
    w.push_back(std::move(s.low_basis));
    p.push_back(std::move(s.low));
  }
  std::vector<Index> dims;
  std::vector<CMatrix> maps;
  for (int k = 0; k <= n; ++k) dims.push_back(w[k].cols());
  for (int k = 0; k < n; ++k) {
    const CMatrix full = dc.nabla(k);
    maps.push_back(detail::truncate_below(w[k + 1].adjoint() * full * w[k],
                                          tol.rank_tol * operator_norm(full)));
  }
  const CochainComplex low{dims, maps};

  const int half = (n + 1) / 2;
  std::vector<BasedSpace> chain(n + 1);
  for (int k = 0; k < half; ++k) chain[k] = BasedSpace::standard(dims[k]);
  for (int k = half; k <= n; ++k) {
    chain[k] = BasedSpace(w[k].adjoint() * dc.gamma_tilde(k) * w[n - k]);
  }

  std::vector<BasedSpace> reps;
  for (int k = 0; k <= n; ++k) {
    const Index c = dc.dims()[k];
    const CMatrix gh = dc.min_role().gamma()[n - k] * g[n - k].basis;
    CMatrix r = CMatrix::Zero(2 * c, e[k].dimension() + gh.cols());
    r.topLeftCorner(c, e[k].dimension()) = e[k].basis;
    r.bottomRightCorner(c, gh.cols()) = gh;
    reps.emplace_back(w[k].adjoint() * (p[k] * r));
  }
  rep.rho = torsion_tau(low, chain, reps, tol);

  const auto cmp = determinant_comparison(dc, lambda, tol);
  rep.lhs = cmp.lhs;
  rep.rhs = cmp.rhs;
  const double denom = std::abs(rep.rho) * std::abs(rep.lhs);
  if (!(denom > 0.0) || !(std::abs(rep.t_rel) > 0.0)) {
    throw CheckFailure("degenerate torsion in comparison");
  }
  rep.ratio = std::abs(rep.t_rel) / denom;
  rep.warnings = {"undetermined sign", "undetermined phase"};
  return rep;
}

}  // namespace torsionlab
