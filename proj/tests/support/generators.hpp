#pragma once

// Hand-rolled random generators for property tests. Everything is seeded so
// failures reproduce.

#include <random>
#include <vector>

#include "torsionlab/bicomplex.hpp"
#include "torsionlab/chirality.hpp"

namespace tlgen {

using torsionlab::BiGradedComplex;
using torsionlab::CMatrix;
using torsionlab::Complex;
using torsionlab::Index;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng_); }
  Complex gauss() {
    std::normal_distribution<double> n(0.0, 1.0);
    return {n(eng_), n(eng_)};
  }

 private:
  std::mt19937_64 eng_;
};

inline CMatrix gaussian(Rng& rng, Index m, Index n) {
  CMatrix a(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = rng.gauss();
  return a;
}

inline CMatrix unitary(Rng& rng, Index n) {
  if (n == 0) return CMatrix(0, 0);
  Eigen::HouseholderQR<CMatrix> qr(gaussian(rng, n, n));
  return qr.householderQ() * CMatrix::Identity(n, n);
}

/// Invertible with singular values in [e^-spread, e^spread].
inline CMatrix conditioned(Rng& rng, Index n, double spread = 0.7) {
  if (n == 0) return CMatrix(0, 0);
  Eigen::VectorXcd s(n);
  for (Index i = 0; i < n; ++i) s(i) = std::exp(rng.uniform(-spread, spread));
  return unitary(rng, n) * s.asDiagonal() * unitary(rng, n);
}

struct Shape {
  std::vector<Index> ranks;      // rank of d_j, j = 0..n-1
  std::vector<Index> harmonics;  // cohomology dimension, j = 0..n

  std::vector<Index> dims() const {
    std::vector<Index> c;
    for (size_t j = 0; j < harmonics.size(); ++j) {
      const Index in = j == 0 ? 0 : ranks[j - 1];
      const Index out = j < ranks.size() ? ranks[j] : 0;
      c.push_back(in + harmonics[j] + out);
    }
    return c;
  }
};

/// Random shape with top degree <= max_top and every dimension <= max_dim.
inline Shape random_shape(Rng& rng, bool acyclic, int max_top = 4, Index max_dim = 6) {
  for (;;) {
    Shape s;
    const int n = rng.integer(1, max_top);
    for (int j = 0; j < n; ++j) s.ranks.push_back(rng.integer(acyclic ? 1 : 0, 3));
    for (int j = 0; j <= n; ++j) s.harmonics.push_back(acyclic ? 0 : rng.integer(0, 2));
    bool ok = true;
    for (Index c : s.dims()) ok = ok && c <= max_dim && c >= 1;
    if (ok) return s;
  }
}

// Block shift C^j -> C^{j+1} in adapted coordinates [in | harmonic | out]:
// the `out` block of C^j goes to the `in` block of C^{j+1}.
inline CMatrix shift_up(const Shape& s, size_t j, const CMatrix& core) {
  const auto c = s.dims();
  CMatrix e = CMatrix::Zero(c[j + 1], c[j]);
  const Index r = s.ranks[j];
  e.block(0, c[j] - r, r, r) = core;
  return e;
}

inline CMatrix shift_down(const Shape& s, size_t j, const CMatrix& core) {
  const auto c = s.dims();
  CMatrix e = CMatrix::Zero(c[j], c[j + 1]);
  const Index r = s.ranks[j];
  e.block(c[j] - r, 0, r, r) = core;
  return e;
}

/// d = G E G^-1 and d* = G' E' G'^-1 with independent frames, so d* is not
/// the adjoint of d and the Laplacians are non-normal.
inline BiGradedComplex random_bicomplex(Rng& rng, const Shape& s) {
  const auto c = s.dims();
  std::vector<CMatrix> g, gp;
  for (Index n : c) {
    g.push_back(conditioned(rng, n));
    gp.push_back(conditioned(rng, n));
  }
  std::vector<CMatrix> d, ds;
  for (size_t j = 0; j + 1 < c.size(); ++j) {
    const Index r = s.ranks[j];
    d.push_back(g[j + 1] * shift_up(s, j, conditioned(rng, r)) * g[j].inverse());
    ds.push_back(gp[j] * shift_down(s, j, conditioned(rng, r)) * gp[j + 1].inverse());
  }
  return BiGradedComplex(c, d, ds);
}

/// dstar = d^dagger.
inline BiGradedComplex random_selfadjoint(Rng& rng, const Shape& s) {
  const auto c = s.dims();
  std::vector<CMatrix> g;
  for (Index n : c) g.push_back(conditioned(rng, n));
  std::vector<CMatrix> d;
  for (size_t j = 0; j + 1 < c.size(); ++j) {
    d.push_back(g[j + 1] * shift_up(s, j, conditioned(rng, s.ranks[j])) * g[j].inverse());
  }
  return torsionlab::with_adjoint(c, d);
}

/// Sorted distinct moduli of all Laplacian eigenvalues.
inline std::vector<double> laplacian_moduli(const BiGradedComplex& x) {
  std::vector<double> m;
  for (int j = 0; j <= x.top_degree(); ++j) {
    const auto ev = torsionlab::eigenvalues(torsionlab::sharp_laplacian(x, j));
    for (Index i = 0; i < ev.size(); ++i) m.push_back(std::abs(ev(i)));
  }
  std::sort(m.begin(), m.end());
  return m;
}

/// Geometric mean of the two adjacent moduli with the widest relative gap,
/// or a negative value if no usable gap exists.
inline double mid_gap(const BiGradedComplex& x, double min_ratio = 1.05) {
  const auto m = laplacian_moduli(x);
  double best = -1.0, ratio = min_ratio;
  for (size_t i = 0; i + 1 < m.size(); ++i) {
    if (m[i] < 1e-6 * m.back()) continue;
    const double r = m[i + 1] / m[i];
    if (r > ratio) {
      ratio = r;
      best = std::sqrt(m[i] * m[i + 1]);
    }
  }
  return best;
}

inline double above_spectrum(const BiGradedComplex& x) {
  const auto m = laplacian_moduli(x);
  return m.empty() ? 1.0 : 2.0 * m.back() + 1.0;
}

/// Direct sum, degree by degree, with X's coordinates first.
inline BiGradedComplex direct_sum(const BiGradedComplex& x, const BiGradedComplex& y) {
  std::vector<Index> dims;
  for (int j = 0; j <= x.top_degree(); ++j) dims.push_back(x.dim(j) + y.dim(j));
  auto block = [](const CMatrix& a, const CMatrix& b) {
    CMatrix m = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    m.topLeftCorner(a.rows(), a.cols()) = a;
    m.bottomRightCorner(b.rows(), b.cols()) = b;
    return m;
  };
  std::vector<CMatrix> d, ds;
  for (int j = 0; j < x.top_degree(); ++j) {
    d.push_back(block(x.d(j), y.d(j)));
    ds.push_back(block(x.dstar(j + 1), y.dstar(j + 1)));
  }
  return BiGradedComplex(dims, d, ds);
}

/// Random d with d^2 = 0 on the given dimensions: block shifts of random
/// rank, conjugated by random frames.
inline std::vector<CMatrix> random_differential(Rng& rng, const std::vector<Index>& dims) {
  const size_t n = dims.size() - 1;
  std::vector<CMatrix> d;
  Index prev = 0;
  for (size_t j = 0; j < n; ++j) {
    const Index r = rng.integer(0, int(std::min(dims[j] - prev, dims[j + 1])));
    CMatrix e = CMatrix::Zero(dims[j + 1], dims[j]);
    e.block(0, dims[j] - r, r, r) = conditioned(rng, r);
    d.push_back(e);
    prev = r;
  }
  std::vector<CMatrix> g;
  for (Index c : dims) g.push_back(conditioned(rng, c));
  for (size_t j = 0; j < n; ++j) d[j] = g[j + 1] * d[j] * g[j].inverse();
  return d;
}

struct ChiralData {
  std::vector<Index> dims;
  std::vector<CMatrix> gamma;
};

/// Symmetric dimensions for odd top degree n and an involution Gamma with
/// Gamma_{n-k} = Gamma_k^{-1}.
inline ChiralData random_chiral_data(Rng& rng, int n, Index max_dim = 4) {
  ChiralData c;
  const int half = (n + 1) / 2;
  c.dims.assign(n + 1, 0);
  for (int k = 0; k < half; ++k) c.dims[k] = c.dims[n - k] = rng.integer(1, int(max_dim));
  c.gamma.resize(n + 1);
  for (int k = 0; k < half; ++k) {
    c.gamma[k] = conditioned(rng, c.dims[k], 0.4);
    c.gamma[n - k] = c.gamma[k].inverse();
  }
  return c;
}

inline torsionlab::ChiralityComplex random_chirality(Rng& rng, int n, Index max_dim = 4) {
  const ChiralData c = random_chiral_data(rng, n, max_dim);
  return torsionlab::ChiralityComplex(c.dims, random_differential(rng, c.dims), c.gamma);
}

/// Minimal and maximal roles sharing Gamma, with independent differentials.
inline std::pair<torsionlab::ChiralityComplex, torsionlab::ChiralityComplex> random_chiral_pair(
    Rng& rng, int n, Index max_dim = 4) {
  const ChiralData c = random_chiral_data(rng, n, max_dim);
  return {torsionlab::ChiralityComplex(c.dims, random_differential(rng, c.dims), c.gamma),
          torsionlab::ChiralityComplex(c.dims, random_differential(rng, c.dims), c.gamma)};
}

}  // namespace tlgen
