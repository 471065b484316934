#include <gtest/gtest.h>

#include <numbers>

#include "support/generators.hpp"
#include "torsionlab/models.hpp"

using namespace torsionlab;

namespace {

const SignConvention kPlain = sign_convention(SignMode::plain);

double closed_form(double theta) { return 4.0 * std::pow(std::sin(std::numbers::pi * theta), 2); }

CMatrix hpd(tlgen::Rng& rng, Index r) {
  const CMatrix g = tlgen::conditioned(rng, r, 0.5);
  return g.adjoint() * g;
}

// Random cellwise weights agreeing on the identified vertices.
void randomize_weights(tlgen::Rng& rng, SpliceScenario& s) {
  const Index r = s.first.holonomy.rank;
  CellWeight w1 = CellWeight::identity(s.first.cells, r);
  CellWeight w2 = CellWeight::identity(s.second.cells, r);
  for (auto* list : {&w1.vertex_blocks, &w1.edge_blocks, &w2.vertex_blocks, &w2.edge_blocks}) {
    for (auto& b : *list) b = hpd(rng, r);
  }
  for (const auto& [u, v] : s.identification) w2.vertex_blocks[v] = w1.vertex_blocks[u];
  s.first.weight = w1;
  s.second.weight = w2;
}

}  // namespace

TEST(Models, CircleCellsAndSelfLoop) {
  const auto c = circle_cells(1);
  ASSERT_EQ(c.edges.size(), 1u);
  EXPECT_EQ(c.edges[0], std::make_pair(Index(0), Index(0)));
  EXPECT_THROW(circle_cells(0), InputError);
}

TEST(Models, CoboundaryConvention) {
  // (d phi)(e) = g_e phi(head) - phi(tail)
  const Complex q = std::polar(1.0, 0.7);
  const auto x = circle_complex(2, Holonomy::loop(2, CMatrix::Constant(1, 1, q)));
  CMatrix expected(2, 2);
  expected << -1.0, 1.0, q, -1.0;
  EXPECT_LT((x.d(0) - expected).norm(), 1e-15);
}

TEST(Models, IntervalDimensionsAndCohomology) {
  const auto rel = interval_complex(4, Boundary::rel);
  const auto abs = interval_complex(4, Boundary::abs);
  EXPECT_EQ(rel.dims(), (std::vector<Index>{3, 4}));
  EXPECT_EQ(abs.dims(), (std::vector<Index>{5, 4}));
  EXPECT_EQ(cohomology_dims(rel, Differential::d), (std::vector<Index>{0, 1}));
  EXPECT_EQ(cohomology_dims(abs, Differential::d), (std::vector<Index>{1, 0}));
  EXPECT_EQ(euler_characteristic(rel), -1);
  EXPECT_EQ(euler_characteristic(abs), 1);
}

TEST(Models, HolonomyValidation) {
  EXPECT_THROW(circle_complex(3, Holonomy::trivial(2)), InputError);
  EXPECT_THROW(circle_complex(2, Holonomy::loop(2, CMatrix::Zero(1, 1))), InputError);
}

TEST(Models, CircleClosedForm) {
  for (Index n : {1, 8, 32}) {
    for (double theta : {1.0 / 3.0, 0.5, 0.123}) {
      const auto x = circle_complex(n, Holonomy::loop(n, unitary_phase(theta)));
      const double t = std::abs(cm_torsion(x, 0.0, kPlain).coordinate);
      EXPECT_NEAR(t, closed_form(theta), 1e-8 * closed_form(theta)) << n << " " << theta;
    }
  }
}

TEST(Models, RankTwoCircleSquaresTheLineValue) {
  const auto x = circle_complex(5, Holonomy::loop(5, unitary_phase(0.3, 2)));
  EXPECT_NEAR(std::abs(cm_torsion(x, 0.0, kPlain).coordinate), std::pow(closed_form(0.3), 2),
              1e-9);
}

TEST(Models, TrivialCircleWithOrthonormalHarmonics) {
  for (Index n : {2, 5, 9}) {
    const auto x = circle_complex(n, Holonomy::trivial(n));
    EXPECT_NEAR(std::abs(cm_torsion(x, 0.0, kPlain).coordinate), double(n * n), 1e-9 * n * n);
  }
}

TEST(Models, SpliceOfCutCircleIsTheCircle) {
  const CMatrix q = unitary_phase(0.2);
  const auto s = split_circle(3, 4, q);
  const auto glued = splice(s);
  EXPECT_EQ(glued.dims(), (std::vector<Index>{7, 7}));
  const auto circle = circle_complex(7, Holonomy::loop(7, q));
  EXPECT_NEAR(std::abs(cm_torsion(glued, 0.0, kPlain).coordinate),
              std::abs(cm_torsion(circle, 0.0, kPlain).coordinate), 1e-10);
}

TEST(Models, SpliceRejectsMismatchedWeights) {
  auto s = split_circle(2, 2, unitary_phase(0.3));
  CellWeight w = CellWeight::identity(s.first.cells, 1);
  w.vertex_blocks[0] *= 2.0;
  s.first.weight = w;
  EXPECT_THROW(splice(s), InputError);
}

TEST(Models, SpliceRejectsBadIdentification) {
  auto s = split_circle(2, 2, unitary_phase(0.3));
  s.identification = {{1, 0}, {0, 2}};  // vertex 1 is interior
  EXPECT_THROW(splice(s), InputError);
  s.identification = {{2, 0}};
  EXPECT_THROW(splice(s), InputError);
}

TEST(Models, LesDimensionsForTrivialHolonomy) {
  // 0 -> H^0(M) -> H^0_abs(M2) -> H^1_rel(M1) -> H^1(M) -> 0
  const auto iso = les_determinant_iso(split_circle(3, 4, unitary_phase(0.0)), LesSide::Psi);
  EXPECT_EQ(iso.les.dims, (std::vector<Index>{0, 1, 1, 1, 1, 0}));
  EXPECT_LT(iso.les.exactness_residual, 1e-10);
  EXPECT_EQ(iso.source.size(), 4u);
  EXPECT_EQ(iso.target.size(), 2u);
}

TEST(Models, LesFromMapsRejectsInexactSequences) {
  const std::vector<Index> dims = {1, 1, 1};
  const CMatrix one = CMatrix::Constant(1, 1, 1.0);
  EXPECT_THROW(les_from_maps(dims, {one, one}, {}), CheckFailure);
  EXPECT_THROW(les_from_maps({1, 1}, {CMatrix::Zero(1, 1)}, {}), CheckFailure);
  EXPECT_NEAR(std::abs(les_from_maps({1, 1}, {one * 2.0}, {}).coordinate - 2.0), 0.0, 1e-14);
}

TEST(Models, SplittingRatioOnDeskCases) {
  for (double theta : {0.0, 1.0 / 3.0, 0.5}) {
    const auto r = combinatorial_splitting_check(split_circle(3, 5, unitary_phase(theta)));
    EXPECT_NEAR(r.ratio, 1.0, 1e-8) << theta;
    EXPECT_EQ(r.chi_spliced, 0);
  }
}

TEST(ModelsProperty, SplittingRatioWithRandomWeightsAndHolonomy) {
  tlgen::Rng rng(301);
  for (int it = 0; it < 100; ++it) {
    const Index r = rng.integer(1, 2);
    CMatrix q;
    switch (rng.integer(0, 2)) {
      case 0: q = CMatrix::Identity(r, r); break;
      case 1: q = tlgen::unitary(rng, r); break;
      default: q = tlgen::conditioned(rng, r, 0.5); break;
    }
    auto s = split_circle(rng.integer(1, 5), rng.integer(1, 5), q);
    if (rng.integer(0, 1)) randomize_weights(rng, s);
    EXPECT_NEAR(combinatorial_splitting_check(s).ratio, 1.0, 1e-8) << it;
  }
}

TEST(ModelsProperty, CircleTorsionIndependentOfSubdivision) {
  tlgen::Rng rng(302);
  for (int it = 0; it < 40; ++it) {
    const double theta = rng.uniform(0.05, 0.95);
    const Index n = rng.integer(1, 24);
    const auto x = circle_complex(n, Holonomy::loop(n, unitary_phase(theta)));
    EXPECT_NEAR(std::abs(cm_torsion(x, 0.0, kPlain).coordinate), closed_form(theta), 1e-8) << it;
  }
}
