#pragma once

// Hurwitz zeta function and zeta-regularized determinants of shifted-lattice
// spectra {c^2 (k + a)^2}.

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "torsionlab/models.hpp"

namespace torsionlab {

namespace detail {

// B_2, B_4, ..., B_20.
inline constexpr std::array<double, 10> kBernoulliEven = {
    1.0 / 6.0,       -1.0 / 30.0,   1.0 / 42.0,        -1.0 / 30.0,   5.0 / 66.0,
    -691.0 / 2730.0, 7.0 / 6.0,     -3617.0 / 510.0,   43867.0 / 798.0, -174611.0 / 330.0};

inline constexpr int kEulerMaclaurinOrder = 9;

// Euler-Maclaurin with the first n terms summed. Returns the value and the
// size of the first omitted correction term, which bounds the remainder.
inline std::pair<double, double> hurwitz_em(double s, double a, int n) {
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += std::pow(k + a, -s);
  const double x = n + a;
  sum += std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
  double poch = s;  // s (s+1) ... (s+2j-2)
  double fact = 2.0;  // (2j)!
  double xpow = std::pow(x, -s - 1.0);
  double omitted = 0.0;
  for (int j = 1; j <= kEulerMaclaurinOrder + 1; ++j) {
    const double term = kBernoulliEven[j - 1] / fact * poch * xpow;
    if (j <= kEulerMaclaurinOrder) {
      sum += term;
    } else {
      omitted = std::abs(term);
    }
    poch *= (s + 2 * j - 1) * (s + 2 * j);
    fact *= (2 * j + 1) * (2 * j + 2);
    xpow /= x * x;
  }
  return {sum, omitted};
}

}  // namespace detail

/// zeta_H(s, a) = sum_{k >= 0} (k + a)^{-s}, analytically continued.
inline double hurwitz_zeta(double s, double a) {
  if (!std::isfinite(s) || !std::isfinite(a)) throw InputError("hurwitz_zeta needs finite arguments");
  if (s == 1.0) throw InputError("hurwitz_zeta has a pole at s = 1");
  if (!(a > 0.0)) throw InputError("hurwitz_zeta needs a > 0");
  int n = std::max(8, int(std::ceil(std::abs(s))) + 8);
  for (;;) {
    const auto [value, omitted] = detail::hurwitz_em(s, a, n);
    if (omitted <= 1e-13 * std::max(1.0, std::abs(value)) || n > (1 << 20)) return value;
    n *= 2;
  }
}

/// d/ds zeta_H(s, a) at s = 0 (Lerch): log Gamma(a) - log(2 pi) / 2.
inline double hurwitz_zeta_deriv0(double a) {
  if (!(a > 0.0)) throw InputError("hurwitz_zeta_deriv0 needs a > 0");
  return std::lgamma(a) - 0.5 * std::log(2.0 * std::numbers::pi);
}

enum class IndexSet { half_line, integers };

/// Eigenvalues c^2 (k + a)^2 for k >= 0 or k in Z, each with `multiplicity`.
struct LatticeSpectrum {
  double scale = 1.0;
  double offset = 1.0;
  IndexSet index_set = IndexSet::half_line;
  Index multiplicity = 1;
  bool excluded_zero = false;

  bool has_zero_mode() const { return index_set == IndexSet::integers && offset == 1.0; }

  void validate() const {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw InputError("spectrum scale must be positive");
    if (!(offset > 0.0 && offset <= 1.0)) throw InputError("spectrum offset must lie in (0, 1]");
    if (multiplicity < 1) throw InputError("empty spectrum");
    if (has_zero_mode() && !excluded_zero) {
      throw InputError("spectrum contains a zero eigenvalue; it must be flagged as excluded");
    }
    if (!has_zero_mode() && excluded_zero) throw InputError("no zero eigenvalue to exclude");
  }

  // Offsets b with the nonzero spectrum equal to the union of {c^2 (k + b)^2, k >= 0}.
  std::vector<double> hurwitz_offsets() const {
    if (index_set == IndexSet::half_line) return {offset};
    if (has_zero_mode()) return {1.0, 1.0};
    return {offset, 1.0 - offset};
  }
};

inline double spectral_zeta(const LatticeSpectrum& spec, double s) {
  spec.validate();
  double total = 0.0;
  for (double b : spec.hurwitz_offsets()) total += hurwitz_zeta(2.0 * s, b);
  return double(spec.multiplicity) * std::pow(spec.scale, -2.0 * s) * total;
}

struct ZetaDetReport {
  double zeta_at_0 = 0.0;
  double zeta_prime_at_0 = 0.0;
  double determinant = 1.0;
};

inline ZetaDetReport zeta_determinant(const LatticeSpectrum& spec) {
  spec.validate();
  ZetaDetReport r;
  const double m = double(spec.multiplicity);
  for (double b : spec.hurwitz_offsets()) {
    const double z0 = 0.5 - b;
    r.zeta_at_0 += m * z0;
    r.zeta_prime_at_0 += m * (-2.0 * std::log(spec.scale) * z0 + 2.0 * hurwitz_zeta_deriv0(b));
  }
  r.determinant = std::exp(-r.zeta_prime_at_0);
  return r;
}

/// Nonzero spectrum of the interval Laplacian of length L. Dirichlet and
/// Neumann conditions, and rel/abs in either degree, share it.
inline LatticeSpectrum interval_spectrum(double length, Index multiplicity = 1) {
  if (!(length > 0.0)) throw InputError("length must be positive");
  return {std::numbers::pi / length, 1.0, IndexSet::half_line, multiplicity, false};
}

/// Circle of circumference P, trivial coefficients, zero mode excluded.
inline LatticeSpectrum circle_spectrum(double circumference, Index multiplicity = 1) {
  if (!(circumference > 0.0)) throw InputError("circumference must be positive");
  return {2.0 * std::numbers::pi / circumference, 1.0, IndexSet::integers, multiplicity, true};
}

/// Circle of circumference P with holonomy e^{2 pi i theta}, theta in (0, 1).
inline LatticeSpectrum holonomy_circle_spectrum(double circumference, double theta) {
  if (!(circumference > 0.0)) throw InputError("circumference must be positive");
  if (!(theta > 0.0 && theta < 1.0)) throw InputError("theta must lie in (0, 1)");
  return {2.0 * std::numbers::pi / circumference, theta, IndexSet::integers, 1, false};
}

struct GluingReport {
  double first_length = 1.0;
  double second_length = 1.0;
  int chi_n = 2;
  double anomaly = 4.0;
  std::array<double, 2> rel_dets{};     // det' Delta_{rel, j} on the first piece
  std::array<double, 2> abs_dets{};     // det' Delta_{abs, j} on the second piece
  std::array<double, 2> circle_dets{};  // det' Delta_j on the glued circle
  double t_rel = 0.0, t_abs = 0.0, t_glued = 0.0;
  double psi = 0.0, psi_prime = 0.0;
  DetLineElement phi;  // flip of T_rel (x) T_abs
  double lhs = 0.0, rhs = 0.0, ratio = 0.0;
  // Signed LHS / (anomaly * RHS). Its phase is not fixed by the modulus check and
  // is reported as is.
  Complex signed_ratio{1.0, 0.0};
};

namespace detail {

// Torsion modulus from the nonzero-spectrum determinants with L2-orthonormal
// harmonic bases; the harmonic factor is 1 in those bases.
inline double torsion_from_dets(const std::array<double, 2>& dets) {
  double t = 1.0;
  for (int j = 0; j < 2; ++j) t *= std::pow(dets[j], parity_sign(j + 1) * j);
  return t;
}

// Cohomology sequence of 0 -> Omega_rel(A) -> Omega(M) -> Omega_abs(B) -> 0
// for intervals A, B of lengths la, lb glued into a circle, in the
// L2-normalized harmonic bases 1/sqrt(len) and dx/sqrt(len). Restriction of
// 1/sqrt(P) to B is sqrt(lb/P) times the basis; extension by zero of
// dx/sqrt(la) integrates to sqrt(la) against sqrt(P) for the circle class; the
// connecting map vanishes since the harmonic extension of a constant is
// constant.
inline LesResult de_rham_les(double la, double lb, const ToleranceConfig& tol) {
  const double p = la + lb;
  const std::vector<Index> dims = {0, 1, 1, 1, 1, 0};
  auto scalar = [](double v) { return CMatrix::Constant(1, 1, Complex(v, 0.0)); };
  const std::vector<CMatrix> maps = {CMatrix(1, 0), scalar(std::sqrt(lb / p)), scalar(0.0),
                                     scalar(std::sqrt(la / p)), CMatrix(0, 1)};
  return les_from_maps(dims, maps, tol);
}

}  // namespace detail

/// Circle of circumference la + lb split into intervals of lengths la and lb
/// with the trivial line bundle, at lambda = 0. Returns
/// |T_rel(A)| |T_abs(B)| |Psi| |Psi'| / (2^{chi(N)} |T(M)|).
inline GluingReport analytic_gluing_check(double la, double lb = -1.0,
                                          const ToleranceConfig& tol = {}) {
  if (lb < 0.0) lb = la;
  if (!(la > 0.0) || !(lb > 0.0) || !std::isfinite(la) || !std::isfinite(lb)) {
    throw InputError("lengths must be positive");
  }
  GluingReport r;
  r.first_length = la;
  r.second_length = lb;
  for (int j = 0; j < 2; ++j) {
    r.rel_dets[j] = zeta_determinant(interval_spectrum(la)).determinant;
    r.abs_dets[j] = zeta_determinant(interval_spectrum(lb)).determinant;
    r.circle_dets[j] = zeta_determinant(circle_spectrum(la + lb)).determinant;
  }
  r.t_rel = detail::torsion_from_dets(r.rel_dets);
  r.t_abs = detail::torsion_from_dets(r.abs_dets);
  r.t_glued = detail::torsion_from_dets(r.circle_dets);

  // H_rel(A) = (0, 1) and H_abs(B) = (1, 0).
  DetLineElement a{Complex(r.t_rel, 0.0),
                   {{"H_rel(A)^0", 0, 0, 1}, {"H_rel(A)^1", 1, 1, -1}}, false};
  DetLineElement b{Complex(r.t_abs, 0.0),
                   {{"H_abs(B)^0", 0, 1, 1}, {"H_abs(B)^1", 1, 0, -1}}, false};
  r.phi = flip(fuse(a, b));

  const Complex psi = detail::de_rham_les(la, lb, tol).coordinate;
  const Complex psi_prime = detail::de_rham_les(lb, la, tol).coordinate;
  r.psi = std::abs(psi);
  r.psi_prime = std::abs(psi_prime);
  r.lhs = std::abs(r.phi.coordinate) * r.psi * r.psi_prime;
  r.rhs = r.t_glued;
  r.ratio = r.lhs / (r.anomaly * r.rhs);
  r.signed_ratio = r.phi.coordinate * psi * psi_prime / (r.anomaly * r.rhs);
  return r;
}

}  // namespace torsionlab
