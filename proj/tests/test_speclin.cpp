#include <gtest/gtest.h>

#include "support/generators.hpp"
#include "torsionlab/speclin.hpp"

using namespace torsionlab;

namespace {

CMatrix jordan(Complex mu, Index m) {
  CMatrix j = CMatrix::Identity(m, m) * mu;
  for (Index i = 0; i + 1 < m; ++i) j(i, i + 1) = 1.0;
  return j;
}

CMatrix block_diag(const CMatrix& a, const CMatrix& b) {
  CMatrix m = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

double idempotence(const CMatrix& p) { return (p * p - p).norm(); }

}  // namespace

TEST(Speclin, RankOfEmptyAndZero) {
  EXPECT_EQ(numerical_rank(CMatrix(0, 3)), 0);
  EXPECT_EQ(numerical_rank(CMatrix::Zero(3, 2)), 0);
  EXPECT_EQ(kernel_basis(CMatrix::Zero(2, 3)).cols(), 3);
}

TEST(Speclin, RankKernelRangeAreConsistent) {
  tlgen::Rng rng(1);
  for (int it = 0; it < 50; ++it) {
    const Index m = rng.integer(1, 6), n = rng.integer(1, 6);
    const Index r = rng.integer(0, int(std::min(m, n)));
    const CMatrix a = tlgen::gaussian(rng, m, r) * tlgen::gaussian(rng, r, n);
    EXPECT_EQ(numerical_rank(a), r);
    const CMatrix k = kernel_basis(a);
    EXPECT_EQ(k.cols(), n - r);
    EXPECT_LT((a * k).norm(), 1e-10 * std::max(1.0, a.norm()));
    EXPECT_EQ(range_basis(a).cols(), r);
  }
}

TEST(Speclin, DeterminantOfTriangular) {
  CMatrix a(2, 2);
  a << Complex(2, 0), Complex(5, 1), Complex(0, 0), Complex(0, 3);
  EXPECT_NEAR(std::abs(determinant(a) - Complex(0, 6)), 0.0, 1e-14);
  EXPECT_EQ(determinant(CMatrix(0, 0)), Complex(1.0, 0.0));
}

TEST(Speclin, RejectsNonFinite) {
  CMatrix a = CMatrix::Identity(2, 2);
  a(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(invariant_split(a, 0.5), InputError);
}

TEST(Speclin, JordanBlockProjectorAnnihilatedByPower) {
  // Jordan block at 1 of size 3 next to a 2 x 2 block at 5.
  const CMatrix a = block_diag(jordan(1.0, 3), jordan(5.0, 2));
  tlgen::Rng rng(2);
  const CMatrix g = tlgen::conditioned(rng, 5);
  const CMatrix x = g * a * g.inverse();
  // A defective eigenvalue splits by about eps^(1/3) under rounding, so the
  // cluster radius has to cover that.
  ToleranceConfig tol;
  tol.cluster_tol = 1e-3;
  const auto c = generalized_eigenprojector(x, {Complex(1.0, 0.0)}, tol);
  EXPECT_EQ(c.algebraic_multiplicity, 3);
  EXPECT_LT(idempotence(c.projector), 1e-9);
  const CMatrix shifted = x - CMatrix::Identity(5, 5);
  EXPECT_LT((shifted * shifted * shifted * c.projector).norm(), 1e-8);
  EXPECT_NEAR(std::abs(c.projector.trace() - 3.0), 0.0, 1e-9);
}

TEST(Speclin, CenterAwayFromSpectrumRejected) {
  EXPECT_THROW(generalized_eigenprojector(CMatrix::Identity(2, 2), {Complex(3.0, 0.0)}),
               InputError);
}

TEST(Speclin, EverythingBelowCut) {
  const CMatrix a = CMatrix::Identity(3, 3) * 0.5;
  const auto s = invariant_split(a, 1.0);
  EXPECT_EQ(s.low_dim, 3);
  EXPECT_LT((s.low - CMatrix::Identity(3, 3)).norm(), 1e-12);
  EXPECT_LT(s.high.norm(), 1e-12);
}

TEST(Speclin, CutOnEigenvalueRejectedWithModuli) {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 4.0;
  try {
    invariant_split(a, 1.0);
    FAIL() << "expected a cut collision";
  } catch (const CutCollision& e) {
    ASSERT_EQ(e.nearest_moduli().size(), 1u);
    EXPECT_NEAR(e.nearest_moduli()[0], 1.0, 1e-12);
  }
}

TEST(Speclin, NumericallyZeroEigenvaluesStayLow) {
  CMatrix a = CMatrix::Zero(3, 3);
  a(0, 0) = 1e-14;
  a(1, 1) = 2.0;
  a(2, 2) = 3.0;
  const auto s = invariant_split(a, 0.0);
  EXPECT_EQ(s.low_dim, 1);
}

// Hand-rolled property: random non-normal matrices with a spectral gap.
TEST(SpeclinProperty, SplitIsComplementaryAndInvariant) {
  tlgen::Rng rng(3);
  int tested = 0;
  for (int it = 0; it < 100; ++it) {
    const Index n = rng.integer(1, 7);
    CMatrix t = CMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
      t(i, i) = std::polar(rng.uniform(0.1, 4.0), rng.uniform(0.0, 6.28));
      for (Index k = i + 1; k < n; ++k) t(i, k) = rng.gauss();
    }
    const CMatrix g = tlgen::conditioned(rng, n);
    const CMatrix a = g * t * g.inverse();
    const double lambda = rng.uniform(0.0, 4.5);
    InvariantSplit s;
    try {
      s = invariant_split(a, lambda);
    } catch (const CutCollision&) {
      continue;
    }
    ++tested;
    const double scale = std::max(1.0, a.norm());
    EXPECT_LT((s.low + s.high - CMatrix::Identity(n, n)).norm(), 1e-12 * n);
    EXPECT_LT(idempotence(s.low), 1e-8 * scale);
    EXPECT_LT((a * s.low - s.low * a).norm(), 1e-8 * scale * scale);
    Index below = 0;
    for (Index i = 0; i < n; ++i) below += std::abs(t(i, i)) <= lambda;
    EXPECT_EQ(s.low_dim, below);
    EXPECT_EQ(s.low_basis.cols(), below);
    EXPECT_EQ(s.high_basis.cols(), n - below);
  }
  EXPECT_GT(tested, 80);
}

TEST(SpeclinProperty, ClusteringIsSingleLinkage) {
  CVector v(4);
  v << 0.0, 0.5, 1.0, 3.0;
  const auto groups = cluster_values(v, 0.6);
  EXPECT_EQ(groups.size(), 2u);
}
