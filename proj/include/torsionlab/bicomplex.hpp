#pragma once

// Bi-graded complexes (C, d, d*), sharp Laplacians, spectral cuts and the
// torsion element tau(c) / tau'(c) with its cutoff form.

#include <optional>
#include <string>
#include <vector>

#include "torsionlab/detline.hpp"
#include "torsionlab/speclin.hpp"

namespace torsionlab {

class BiGradedComplex {
 public:
  BiGradedComplex() : dims_{0} {}

  /// d[j] : C^j -> C^{j+1}, dstar[j] : C^{j+1} -> C^j, for j = 0..n-1.
  BiGradedComplex(std::vector<Index> dims, std::vector<CMatrix> d, std::vector<CMatrix> dstar)
      : dims_(std::move(dims)), d_(std::move(d)), dstar_(std::move(dstar)) {
    detail::check_graded_shapes(dims_, d_, true);
    detail::check_graded_shapes(dims_, dstar_, false);
    for (Index n : dims_) {
      if (n < 0) throw InputError("negative dimension");
    }
  }

  int top_degree() const { return int(dims_.size()) - 1; }
  const std::vector<Index>& dims() const { return dims_; }
  Index dim(int j) const { return (j < 0 || j > top_degree()) ? 0 : dims_[j]; }

  /// d_j : C^j -> C^{j+1}; the zero map outside 0..n-1.
  CMatrix d(int j) const {
    if (j >= 0 && j < top_degree()) return d_[j];
    return CMatrix::Zero(dim(j + 1), dim(j));
  }

  /// d*_j : C^j -> C^{j-1}; the zero map outside 1..n.
  CMatrix dstar(int j) const {
    if (j >= 1 && j <= top_degree()) return dstar_[j - 1];
    return CMatrix::Zero(dim(j - 1), dim(j));
  }

  const std::vector<CMatrix>& d_maps() const { return d_; }
  const std::vector<CMatrix>& dstar_maps() const { return dstar_; }

  CochainComplex d_complex() const { return {dims_, d_}; }
  ChainComplex dstar_complex() const { return {dims_, dstar_}; }

 private:
  std::vector<Index> dims_;
  std::vector<CMatrix> d_;
  std::vector<CMatrix> dstar_;
};

/// Per-degree positive-definite inner products on cochains.
struct HermitianWeight {
  std::vector<CMatrix> h;

  static HermitianWeight identity(const std::vector<Index>& dims) {
    HermitianWeight w;
    for (Index n : dims) w.h.push_back(CMatrix::Identity(n, n));
    return w;
  }

  void validate(const std::vector<Index>& dims, const ToleranceConfig& tol = {}) const {
    if (h.size() != dims.size()) throw InputError("weight needs one matrix per degree");
    for (size_t j = 0; j < h.size(); ++j) {
      if (h[j].rows() != dims[j] || h[j].cols() != dims[j]) {
        throw InputError("weight in degree " + std::to_string(j) + " has wrong shape");
      }
      require_finite(h[j], "weight");
      if (dims[j] == 0) continue;
      const double asym = (h[j] - h[j].adjoint()).norm() / std::max(1.0, h[j].norm());
      if (asym > tol.check_tol) {
        throw InputError("weight in degree " + std::to_string(j) + " is not Hermitian");
      }
      Eigen::SelfAdjointEigenSolver<CMatrix> es(h[j]);
      if (!(es.eigenvalues().minCoeff() > 0.0)) {
        throw InputError("weight in degree " + std::to_string(j) + " is not positive definite");
      }
    }
  }
};

/// h_j^{-1} d_j^dagger h_{j+1}: the adjoint of d for the weighted inner products.
inline std::vector<CMatrix> weighted_adjoint(const std::vector<Index>& dims,
                                             const std::vector<CMatrix>& d,
                                             const HermitianWeight& w) {
  w.validate(dims);
  std::vector<CMatrix> out;
  for (size_t j = 0; j < d.size(); ++j) {
    if (dims[j] == 0) {
      out.push_back(CMatrix::Zero(0, dims[j + 1]));
      continue;
    }
    out.push_back(w.h[j].llt().solve(d[j].adjoint() * w.h[j + 1]));
  }
  return out;
}

inline BiGradedComplex with_adjoint(std::vector<Index> dims, std::vector<CMatrix> d,
                                    const std::optional<HermitianWeight>& w = std::nullopt) {
  auto dstar = weighted_adjoint(dims, d, w ? *w : HermitianWeight::identity(dims));
  return BiGradedComplex(std::move(dims), std::move(d), std::move(dstar));
}

struct Violation {
  std::string what;
  int degree = 0;
  double residual = 0.0;
};

struct ValidationReport {
  bool valid = true;
  double d_residual = 0.0;      // max relative ||d_{j+1} d_j||
  double dstar_residual = 0.0;  // max relative ||d*_{j-1} d*_j||
  std::vector<Violation> violations;
};

inline ValidationReport validate(const BiGradedComplex& x, const ToleranceConfig& tol = {}) {
  ValidationReport r;
  const int n = x.top_degree();
  for (int j = 0; j + 1 < n; ++j) {
    const double res = detail::square_residual(x.d(j + 1), x.d(j));
    r.d_residual = std::max(r.d_residual, res);
    if (res > tol.check_tol) r.violations.push_back({"d^2 != 0", j, res});
  }
  for (int j = 2; j <= n; ++j) {
    const double res = detail::square_residual(x.dstar(j - 1), x.dstar(j));
    r.dstar_residual = std::max(r.dstar_residual, res);
    if (res > tol.check_tol) r.violations.push_back({"(d*)^2 != 0", j, res});
  }
  r.valid = r.violations.empty();
  return r;
}

inline void require_valid(const BiGradedComplex& x, const ToleranceConfig& tol) {
  const auto r = validate(x, tol);
  if (!r.valid) {
    const auto& v = r.violations.front();
    throw CheckFailure(v.what, v.degree, v.residual);
  }
}

/// d_{j-1} d*_j + d*_{j+1} d_j on C^j.
inline CMatrix sharp_laplacian(const BiGradedComplex& x, int j) {
  if (j < 0 || j > x.top_degree()) {
    throw InputError("degree " + std::to_string(j) + " out of range 0.." +
                     std::to_string(x.top_degree()));
  }
  CMatrix out = CMatrix::Zero(x.dim(j), x.dim(j));
  if (j >= 1 && x.dim(j - 1) > 0) out += x.d(j - 1) * x.dstar(j);
  if (j < x.top_degree() && x.dim(j + 1) > 0) out += x.dstar(j + 1) * x.d(j);
  return out;
}

enum class Differential { d, dstar };

/// Orthonormal representatives of ker(out) modulo im(in), chosen orthogonal to
/// the image.
inline BasedSpace cohomology_basis(const BiGradedComplex& x, int j, Differential which,
                                   const ToleranceConfig& tol = {}) {
  if (j < 0 || j > x.top_degree()) throw InputError("degree out of range");
  const CMatrix out = which == Differential::d ? x.d(j) : x.dstar(j);
  const CMatrix in = which == Differential::d ? x.d(j - 1) : x.dstar(j + 1);
  const CMatrix ker = kernel_basis(out, tol);
  const auto img = svd_split(in, tol.rank_tol);
  const Index h = ker.cols() - img.rank;
  if (h < 0) throw CheckFailure("image exceeds kernel", j, double(-h));
  const CMatrix reduced = ker - img.range * (img.range.adjoint() * ker);
  return BasedSpace(dominant_columns(reduced, h));
}

inline std::vector<BasedSpace> cohomology_bases(const BiGradedComplex& x, Differential which,
                                                const ToleranceConfig& tol = {}) {
  std::vector<BasedSpace> out;
  for (int j = 0; j <= x.top_degree(); ++j) out.push_back(cohomology_basis(x, j, which, tol));
  return out;
}

inline std::vector<Index> cohomology_dims(const BiGradedComplex& x, Differential which,
                                          const ToleranceConfig& tol = {}) {
  std::vector<Index> out;
  for (int j = 0; j <= x.top_degree(); ++j) {
    const CMatrix o = which == Differential::d ? x.d(j) : x.dstar(j);
    const CMatrix i = which == Differential::d ? x.d(j - 1) : x.dstar(j + 1);
    out.push_back(x.dim(j) - numerical_rank(o, tol) - numerical_rank(i, tol));
  }
  return out;
}

inline ComplexSummary summarize(const BiGradedComplex& x, const ToleranceConfig& tol = {}) {
  ComplexSummary s;
  s.dims = x.dims();
  for (const auto& m : x.d_maps()) s.d_ranks.push_back(numerical_rank(m, tol));
  for (const auto& m : x.dstar_maps()) s.dstar_ranks.push_back(numerical_rank(m, tol));
  s.cohomology_dims = cohomology_dims(x, Differential::d, tol);
  s.homology_dims = cohomology_dims(x, Differential::dstar, tol);
  return s;
}

struct SpectralCut {
  double lambda = 0.0;
  double scale = 1.0;
  std::vector<CMatrix> low_projectors;
  std::vector<CMatrix> high_projectors;
  std::vector<CMatrix> low_bases;   // orthonormal, per degree
  std::vector<CMatrix> high_bases;  // orthonormal, per degree
  std::vector<CVector> spectra;
  double compatibility_residual = 0.0;

  std::vector<Index> low_dims() const {
    std::vector<Index> out;
    for (const auto& b : low_bases) out.push_back(b.cols());
    return out;
  }
  std::vector<Index> high_dims() const {
    std::vector<Index> out;
    for (const auto& b : high_bases) out.push_back(b.cols());
    return out;
  }
};

/// One clustering scale shared by all degrees, so that an eigenvalue carried
/// between degrees by d lands on the same side of the cut everywhere.
inline double laplacian_scale(const BiGradedComplex& x) {
  double s = 0.0;
  for (int j = 0; j <= x.top_degree(); ++j) s = std::max(s, operator_norm(sharp_laplacian(x, j)));
  return s > 0.0 ? s : 1.0;
}

inline SpectralCut spectral_cut(const BiGradedComplex& x, double lambda,
                                const ToleranceConfig& tol = {}) {
  tol.validate();
  SpectralCut cut;
  cut.lambda = lambda;
  cut.scale = laplacian_scale(x);
  for (int j = 0; j <= x.top_degree(); ++j) {
    auto s = invariant_split(sharp_laplacian(x, j), lambda, tol, cut.scale);
    cut.low_projectors.push_back(std::move(s.low));
    cut.high_projectors.push_back(std::move(s.high));
    cut.low_bases.push_back(std::move(s.low_basis));
    cut.high_bases.push_back(std::move(s.high_basis));
    cut.spectra.push_back(std::move(s.spectrum));
  }
  for (int j = 0; j < x.top_degree(); ++j) {
    const CMatrix& p0 = cut.low_projectors[j];
    const CMatrix& p1 = cut.low_projectors[j + 1];
    const double dn = std::max(1.0, x.d(j).norm());
    const double sn = std::max(1.0, x.dstar(j + 1).norm());
    const double rd = (x.d(j) * p0 - p1 * x.d(j)).norm() / dn;
    const double rs = (x.dstar(j + 1) * p1 - p0 * x.dstar(j + 1)).norm() / sn;
    cut.compatibility_residual = std::max({cut.compatibility_residual, rd, rs});
    if (rd > tol.check_tol) throw CheckFailure("low projectors do not commute with d", j, rd);
    if (rs > tol.check_tol) throw CheckFailure("low projectors do not commute with d*", j + 1, rs);
  }
  return cut;
}

namespace detail {

// Drop singular values at or below `floor`. A restricted map inherits rounding
// noise from the projection, and a relative rank test on the restriction alone
// would read that noise as rank.
inline CMatrix truncate_below(const CMatrix& m, double floor) {
  if (m.size() == 0) return m;
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd s = svd.singularValues();
  bool any = false;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) <= floor) {
      s(i) = 0.0;
      any = true;
    }
  }
  if (!any) return m;
  return svd.matrixU() * s.cast<Complex>().asDiagonal() * svd.matrixV().adjoint();
}

}  // namespace detail

/// The subcomplex on invariant subspaces with orthonormal bases `bases`,
/// written in those coordinates.
inline BiGradedComplex restrict_to(const BiGradedComplex& x, const std::vector<CMatrix>& bases,
                                   const ToleranceConfig& tol = {}) {
  std::vector<Index> dims;
  for (const auto& b : bases) dims.push_back(b.cols());
  std::vector<CMatrix> d, ds;
  for (int j = 0; j < x.top_degree(); ++j) {
    const double fd = tol.rank_tol * operator_norm(x.d(j));
    const double fs = tol.rank_tol * operator_norm(x.dstar(j + 1));
    d.push_back(detail::truncate_below(bases[j + 1].adjoint() * x.d(j) * bases[j], fd));
    ds.push_back(detail::truncate_below(bases[j].adjoint() * x.dstar(j + 1) * bases[j + 1], fs));
  }
  return BiGradedComplex(std::move(dims), std::move(d), std::move(ds));
}

inline BiGradedComplex low_part(const BiGradedComplex& x, const SpectralCut& c,
                                const ToleranceConfig& tol = {}) {
  return restrict_to(x, c.low_bases, tol);
}

inline BiGradedComplex high_part(const BiGradedComplex& x, const SpectralCut& c,
                                 const ToleranceConfig& tol = {}) {
  return restrict_to(x, c.high_bases, tol);
}

namespace detail {

inline Complex int_power(Complex z, long long e) {
  Complex r(1.0, 0.0);
  const bool inv = e < 0;
  for (long long k = 0; k < (inv ? -e : e); ++k) r *= z;
  return inv ? 1.0 / r : r;
}

}  // namespace detail

/// prod_j det(Delta_j)^{(-1)^{j+1} j}
inline Complex graded_determinant_high(const BiGradedComplex& x, const ToleranceConfig& tol = {}) {
  Complex total(1.0, 0.0);
  for (int j = 0; j <= x.top_degree(); ++j) {
    const CMatrix lap = sharp_laplacian(x, j);
    if (lap.rows() == 0) continue;
    if (numerical_rank(lap, tol) < lap.rows()) {
      throw CheckFailure("restricted Laplacian is singular", j, 0.0);
    }
    total *= detail::int_power(determinant(lap), detail::parity_sign(j + 1) * j);
  }
  return total;
}

struct TorsionElement {
  Complex coordinate{1.0, 0.0};
  std::vector<BasedSpace> cohomology_bases;  // representatives in ambient coordinates
  std::vector<BasedSpace> homology_bases;
  SignConvention sign;

  double lambda = 0.0;
  int sign_value = 1;
  Complex tau_low{1.0, 0.0};
  Complex tau_prime_low{1.0, 0.0};
  Complex graded_det_high{1.0, 0.0};
  std::vector<Index> low_dims;
  std::vector<Index> high_dims;
};

namespace detail {

inline std::vector<BasedSpace> resolve_reps(const BiGradedComplex& x, Differential which,
                                            const std::optional<std::vector<BasedSpace>>& given,
                                            const ToleranceConfig& tol) {
  if (!given) return cohomology_bases(x, which, tol);
  if (int(given->size()) != x.top_degree() + 1) {
    throw InputError("one representative set per degree is required");
  }
  const auto dims = cohomology_dims(x, which, tol);
  for (int j = 0; j <= x.top_degree(); ++j) {
    const auto& b = (*given)[j];
    if (b.ambient() != x.dim(j) || b.dimension() != dims[j]) {
      throw InputError(std::string(which == Differential::d ? "cohomology" : "homology") +
                       " basis in degree " + std::to_string(j) + " has dimension " +
                       std::to_string(b.dimension()) + ", expected " + std::to_string(dims[j]));
    }
  }
  return *given;
}

// Move representatives into the low band, in low-band coordinates.
inline std::vector<BasedSpace> to_low_band(const std::vector<BasedSpace>& reps,
                                           const SpectralCut& cut) {
  std::vector<BasedSpace> out;
  for (size_t j = 0; j < reps.size(); ++j) {
    out.emplace_back(cut.low_bases[j].adjoint() * (cut.low_projectors[j] * reps[j].basis));
  }
  return out;
}

}  // namespace detail

/// sign * tau_[0,lambda] / tau'_[0,lambda] * prod det(Delta_high,j)^{(-1)^{j+1} j}.
/// Representatives default to computed ones; the sign is evaluated on the low
/// band.
inline TorsionElement cm_torsion(const BiGradedComplex& x, double lambda,
                                 const SignConvention& sign,
                                 const std::optional<std::vector<BasedSpace>>& cohomology = {},
                                 const std::optional<std::vector<BasedSpace>>& homology = {},
                                 const ToleranceConfig& tol = {}) {
  tol.validate();
  require_valid(x, tol);
  TorsionElement t;
  t.sign = sign;
  t.lambda = lambda;
  t.cohomology_bases = detail::resolve_reps(x, Differential::d, cohomology, tol);
  t.homology_bases = detail::resolve_reps(x, Differential::dstar, homology, tol);

  const SpectralCut cut = spectral_cut(x, lambda, tol);
  const BiGradedComplex low = low_part(x, cut, tol);
  const BiGradedComplex high = high_part(x, cut, tol);
  t.low_dims = cut.low_dims();
  t.high_dims = cut.high_dims();

  const auto chain = standard_bases(low.dims());
  t.tau_low = torsion_tau(low.d_complex(), chain,
                          detail::to_low_band(t.cohomology_bases, cut), tol);
  t.tau_prime_low = torsion_tau_prime(low.dstar_complex(), chain,
                                      detail::to_low_band(t.homology_bases, cut), tol);
  t.graded_det_high = graded_determinant_high(high, tol);
  t.sign_value = sign.evaluate(summarize(low, tol));
  t.coordinate = double(t.sign_value) * t.tau_low / t.tau_prime_low * t.graded_det_high;
  return t;
}

}  // namespace torsionlab
