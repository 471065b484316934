#pragma once

// Determinant lines against explicit bases: wedge coordinates, the torsion
// isomorphisms tau and tau', fusion and the flip.

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "torsionlab/speclin.hpp"

namespace torsionlab {

/// A subspace given by basis columns in ambient coordinates.
struct BasedSpace {
  CMatrix basis;

  BasedSpace() = default;
  explicit BasedSpace(CMatrix b) : basis(std::move(b)) {}

  static BasedSpace standard(Index n) { return BasedSpace(CMatrix::Identity(n, n)); }
  Index dimension() const { return basis.cols(); }
  Index ambient() const { return basis.rows(); }
};

inline std::vector<BasedSpace> standard_bases(const std::vector<Index>& dims) {
  std::vector<BasedSpace> out;
  for (Index n : dims) out.push_back(BasedSpace::standard(n));
  return out;
}

/// Determinant of the matrix expressing `vectors` in `space.basis`.
inline Complex wedge_coordinate(const CMatrix& vectors, const BasedSpace& space) {
  if (vectors.cols() != space.dimension()) {
    throw InputError("wedge_coordinate: got " + std::to_string(vectors.cols()) +
                     " vectors for a space of dimension " +
                     std::to_string(space.dimension()));
  }
  if (vectors.rows() != space.ambient()) {
    throw InputError("wedge_coordinate: ambient dimension mismatch");
  }
  if (space.dimension() == 0) return Complex(1.0, 0.0);
  require_finite(vectors, "wedge vectors");
  if (space.basis.rows() == space.basis.cols()) {
    return determinant(space.basis.partialPivLu().solve(vectors));
  }
  const auto qr = space.basis.colPivHouseholderQr();
  const CMatrix coeff = qr.solve(vectors);
  const double res = (space.basis * coeff - vectors).norm();
  if (res > 1e-8 * std::max(1.0, vectors.norm())) {
    throw InputError("wedge_coordinate: vectors leave the span of the basis");
  }
  return determinant(coeff);
}

/// maps[j] : C^j -> C^{j+1}
struct CochainComplex {
  std::vector<Index> dims;
  std::vector<CMatrix> maps;
};

/// maps[j] : C^{j+1} -> C^j
struct ChainComplex {
  std::vector<Index> dims;
  std::vector<CMatrix> maps;
};

namespace detail {

inline void check_graded_shapes(const std::vector<Index>& dims, const std::vector<CMatrix>& maps,
                                bool raising) {
  if (dims.empty()) throw InputError("complex needs at least one degree");
  if (maps.size() + 1 != dims.size()) {
    throw InputError("complex has " + std::to_string(dims.size()) + " degrees but " +
                     std::to_string(maps.size()) + " maps");
  }
  for (size_t j = 0; j < maps.size(); ++j) {
    const Index rows = raising ? dims[j + 1] : dims[j];
    const Index cols = raising ? dims[j] : dims[j + 1];
    if (maps[j].rows() != rows || maps[j].cols() != cols) {
      throw InputError("map " + std::to_string(j) + " has shape " +
                       std::to_string(maps[j].rows()) + "x" + std::to_string(maps[j].cols()) +
                       ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
    }
    require_finite(maps[j], "differential");
  }
}

// Relative size of a composite of two maps.
inline double square_residual(const CMatrix& second, const CMatrix& first) {
  if (second.size() == 0 || first.size() == 0 || second.cols() == 0) return 0.0;
  const double scale = std::max(1.0, second.norm() * first.norm());
  return (second * first).norm() / scale;
}

// One degree of the standard recipe: the collection [incoming, reps, lift]
// must form a basis of C^j.
inline Complex collection_coordinate(const CMatrix& first, const CMatrix& reps,
                                     const CMatrix& last, const BasedSpace& chain, int degree,
                                     const ToleranceConfig& tol) {
  const Index n = chain.ambient();
  if (first.cols() + reps.cols() + last.cols() != n) {
    throw InputError("degree " + std::to_string(degree) + ": basis of dimension " +
                     std::to_string(reps.cols()) + " does not match the computed (co)homology " +
                     "dimension " + std::to_string(n - first.cols() - last.cols()));
  }
  CMatrix k(n, n);
  k << first, reps, last;
  if (n > 0 && numerical_rank(k, tol) < n) {
    throw InputError("degree " + std::to_string(degree) +
                     ": representatives are dependent modulo the image");
  }
  return wedge_coordinate(k, chain);
}

inline void check_bases(const std::vector<BasedSpace>& chain,
                        const std::vector<BasedSpace>& reps, const std::vector<Index>& dims) {
  if (chain.size() != dims.size() || reps.size() != dims.size()) {
    throw InputError("one basis per degree is required");
  }
  for (size_t j = 0; j < dims.size(); ++j) {
    if (chain[j].ambient() != dims[j] || chain[j].dimension() != dims[j]) {
      throw InputError("chain basis in degree " + std::to_string(j) + " has wrong shape");
    }
    if (reps[j].ambient() != dims[j]) {
      throw InputError("representatives in degree " + std::to_string(j) +
                       " live in the wrong space");
    }
  }
}

inline int parity_sign(long long k) { return (k % 2 == 0) ? 1 : -1; }

}  // namespace detail

/// Coordinate of tau(c) against the given cohomology representatives. In
/// degree j the collection is {d s_{j-1}, reps_j, s_j} with s_j a lift
/// complementary to ker d_j; the result is prod det(M_j)^{(-1)^{j+1}}.
/// Optional `lifts` override the default row-space lifts.
inline Complex torsion_tau(const CochainComplex& cx, const std::vector<BasedSpace>& chain,
                           const std::vector<BasedSpace>& cohomology,
                           const ToleranceConfig& tol = {},
                           const std::optional<std::vector<CMatrix>>& lifts = std::nullopt) {
  detail::check_graded_shapes(cx.dims, cx.maps, true);
  detail::check_bases(chain, cohomology, cx.dims);
  const size_t n = cx.dims.size();
  for (size_t j = 0; j + 1 < cx.maps.size(); ++j) {
    const double r = detail::square_residual(cx.maps[j + 1], cx.maps[j]);
    if (r > tol.check_tol) throw CheckFailure("d^2 != 0", int(j), r);
  }
  std::vector<CMatrix> s(n);
  for (size_t j = 0; j < n; ++j) {
    if (j + 1 == n) {
      s[j] = CMatrix(cx.dims[j], 0);
      continue;
    }
    const auto split = svd_split(cx.maps[j], tol.rank_tol);
    if (lifts) {
      const CMatrix& l = (*lifts)[j];
      if (l.rows() != cx.dims[j] || l.cols() != split.rank ||
          numerical_rank(cx.maps[j] * l, tol) != split.rank) {
        throw InputError("lift in degree " + std::to_string(j) + " is not complementary");
      }
      s[j] = l;
    } else {
      s[j] = split.corange;
    }
  }
  Complex total(1.0, 0.0);
  for (size_t j = 0; j < n; ++j) {
    const CMatrix in = j == 0 ? CMatrix(cx.dims[0], 0) : CMatrix(cx.maps[j - 1] * s[j - 1]);
    if (j + 1 < n && cohomology[j].dimension() > 0) {
      const double r = (cx.maps[j] * cohomology[j].basis).norm() /
                       std::max(1.0, cx.maps[j].norm() * cohomology[j].basis.norm());
      if (r > tol.check_tol) throw CheckFailure("cohomology representative is not closed", int(j), r);
    }
    const Complex m = detail::collection_coordinate(in, cohomology[j].basis, s[j], chain[j],
                                                    int(j), tol);
    total *= detail::parity_sign(j + 1) > 0 ? m : 1.0 / m;
  }
  return total;
}

/// Coordinate of tau'(c) for the degree-lowering complex. In degree j the
/// collection is {t_j, reps_j, d* t_{j+1}} with t_j complementary to ker d*_j,
/// raised to (-1)^{j+1}; the pair d = (a), d* = (b) gives tau/tau' = ab.
inline Complex torsion_tau_prime(const ChainComplex& cx, const std::vector<BasedSpace>& chain,
                                 const std::vector<BasedSpace>& homology,
                                 const ToleranceConfig& tol = {},
                                 const std::optional<std::vector<CMatrix>>& lifts = std::nullopt) {
  detail::check_graded_shapes(cx.dims, cx.maps, false);
  detail::check_bases(chain, homology, cx.dims);
  const size_t n = cx.dims.size();
  for (size_t j = 0; j + 1 < cx.maps.size(); ++j) {
    const double r = detail::square_residual(cx.maps[j], cx.maps[j + 1]);
    if (r > tol.check_tol) throw CheckFailure("(d*)^2 != 0", int(j + 2), r);
  }
  // t[j] lifts against d*_j : C^j -> C^{j-1}, i.e. maps[j-1].
  std::vector<CMatrix> t(n);
  for (size_t j = 0; j < n; ++j) {
    if (j == 0) {
      t[j] = CMatrix(cx.dims[0], 0);
      continue;
    }
    const auto split = svd_split(cx.maps[j - 1], tol.rank_tol);
    if (lifts) {
      const CMatrix& l = (*lifts)[j];
      if (l.rows() != cx.dims[j] || l.cols() != split.rank ||
          numerical_rank(cx.maps[j - 1] * l, tol) != split.rank) {
        throw InputError("lift in degree " + std::to_string(j) + " is not complementary");
      }
      t[j] = l;
    } else {
      t[j] = split.corange;
    }
  }
  Complex total(1.0, 0.0);
  for (size_t j = 0; j < n; ++j) {
    const CMatrix in = j + 1 == n ? CMatrix(cx.dims[j], 0) : CMatrix(cx.maps[j] * t[j + 1]);
    if (j > 0 && homology[j].dimension() > 0) {
      const double r = (cx.maps[j - 1] * homology[j].basis).norm() /
                       std::max(1.0, cx.maps[j - 1].norm() * homology[j].basis.norm());
      if (r > tol.check_tol) throw CheckFailure("homology representative is not closed", int(j), r);
    }
    const Complex m = detail::collection_coordinate(t[j], homology[j].basis, in, chain[j],
                                                    int(j), tol);
    total *= detail::parity_sign(j + 1) > 0 ? m : 1.0 / m;
  }
  return total;
}

struct LineFactor {
  std::string label;
  int degree = 0;
  Index dimension = 0;
  int exponent = 1;
};

struct DetLineElement {
  Complex coordinate{1.0, 0.0};
  std::vector<LineFactor> signature;
  bool degenerate = false;

  static DetLineElement unit() { return {}; }
};

/// Koszul sign of moving every factor of b past the higher-degree factors of a.
inline int fusion_sign(const std::vector<LineFactor>& a, const std::vector<LineFactor>& b) {
  long long parity = 0;
  for (const auto& f : a) {
    for (const auto& g : b) {
      if (f.degree > g.degree) parity += f.dimension * g.dimension;
    }
  }
  return detail::parity_sign(parity);
}

inline DetLineElement fuse(const DetLineElement& a, const DetLineElement& b) {
  std::set<std::string> seen;
  for (const auto& f : a.signature) seen.insert(f.label);
  for (const auto& g : b.signature) {
    if (seen.count(g.label)) throw InputError("fuse: label collision on '" + g.label + "'");
  }
  DetLineElement out;
  out.coordinate = a.coordinate * b.coordinate * double(fusion_sign(a.signature, b.signature));
  out.signature = a.signature;
  out.signature.insert(out.signature.end(), b.signature.begin(), b.signature.end());
  out.degenerate = a.degenerate || b.degenerate;
  return out;
}

/// (v1 w1)(w2 v2) -> (v1 w2)(w1 v2)
inline DetLineElement flip(const DetLineElement& t) {
  if (t.signature.size() != 4) {
    throw InputError("flip expects four factors, got " + std::to_string(t.signature.size()));
  }
  DetLineElement out = t;
  std::swap(out.signature[1], out.signature[2]);
  return out;
}

enum class SignMode { plain, cm_sign, bk_sign };

inline std::string to_string(SignMode m) {
  switch (m) {
    case SignMode::plain: return "plain";
    case SignMode::cm_sign: return "cm";
    case SignMode::bk_sign: return "bk";
  }
  return "plain";
}

inline SignMode parse_sign_mode(const std::string& s) {
  if (s == "plain") return SignMode::plain;
  if (s == "cm" || s == "cm_sign") return SignMode::cm_sign;
  if (s == "bk" || s == "bk_sign") return SignMode::bk_sign;
  throw InputError("unknown sign mode '" + s + "' (expected plain, cm or bk)");
}

/// Rank and dimension data a sign convention may look at.
struct ComplexSummary {
  std::vector<Index> dims;
  std::vector<Index> d_ranks;      // rank of d_j : C^j -> C^{j+1}
  std::vector<Index> dstar_ranks;  // rank of d*_j : C^{j+1} -> C^j
  std::vector<Index> cohomology_dims;
  std::vector<Index> homology_dims;
};

struct SignConvention {
  SignMode mode = SignMode::plain;
  std::function<int(const ComplexSummary&)> value;

  int evaluate(const ComplexSummary& s) const {
    const int v = value ? value(s) : 1;
    if (v != 1 && v != -1) throw InputError("sign convention must return +1 or -1");
    return v;
  }
};

inline SignConvention sign_convention(SignMode mode) {
  SignConvention c;
  c.mode = mode;
  switch (mode) {
    case SignMode::plain:
      c.value = [](const ComplexSummary&) { return 1; };
      break;
    case SignMode::cm_sign:
      // (-1)^{sum C(r,2)} over the ranks of d and d*; with this factor the
      // coordinate is multiplicative under direct sums of complexes.
      c.value = [](const ComplexSummary& s) {
        long long p = 0;
        for (Index r : s.d_ranks) p += r * (r - 1) / 2;
        for (Index r : s.dstar_ranks) p += r * (r - 1) / 2;
        return detail::parity_sign(p);
      };
      break;
    case SignMode::bk_sign:
      c.value = [](const ComplexSummary& s) {
        long long p = 0;
        for (size_t j = 0; j < s.dims.size(); ++j) {
          const long long c_j = s.dims[j];
          p += c_j * (c_j + detail::parity_sign(j + 1)) / 2;
        }
        return detail::parity_sign(p);
      };
      break;
  }
  return c;
}

}  // namespace torsionlab
