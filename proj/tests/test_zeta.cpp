#include <gtest/gtest.h>

#include <numbers>

#include "support/generators.hpp"
#include "torsionlab/zeta.hpp"

using namespace torsionlab;

namespace {

constexpr double kPi = std::numbers::pi;

// Partial sum plus the integral tail and half the last term.
double direct_hurwitz(double s, double a, int terms = 200000) {
  double sum = 0.0;
  for (int k = 0; k < terms; ++k) sum += std::pow(k + a, -s);
  const double x = terms + a;
  return sum + std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
}

}  // namespace

TEST(Zeta, BaselZeta) { EXPECT_NEAR(hurwitz_zeta(2.0, 1.0), kPi * kPi / 6.0, 1e-10); }

TEST(Zeta, ValuesAtZero) {
  for (double a : {0.25, 0.5, 1.0}) EXPECT_NEAR(hurwitz_zeta(0.0, a), 0.5 - a, 1e-10);
}

TEST(Zeta, ContinuationToMinusOne) { EXPECT_NEAR(hurwitz_zeta(-1.0, 1.0), -1.0 / 12.0, 1e-10); }

TEST(Zeta, PoleAndDomainRejected) {
  EXPECT_THROW(hurwitz_zeta(1.0, 1.0), InputError);
  EXPECT_THROW(hurwitz_zeta(2.0, 0.0), InputError);
  EXPECT_THROW(hurwitz_zeta_deriv0(-1.0), InputError);
}

TEST(Zeta, LerchValues) {
  EXPECT_NEAR(hurwitz_zeta_deriv0(1.0), -0.5 * std::log(2.0 * kPi), 1e-14);
  EXPECT_NEAR(hurwitz_zeta_deriv0(0.5), -0.5 * std::log(2.0), 1e-14);
  EXPECT_NEAR(hurwitz_zeta_deriv0(2.0), -0.5 * std::log(2.0 * kPi), 1e-14);
}

TEST(Zeta, DeterminantExamples) {
  EXPECT_NEAR(zeta_determinant(interval_spectrum(1.0)).determinant, 2.0, 1e-12);
  EXPECT_NEAR(zeta_determinant(circle_spectrum(2.0 * kPi)).determinant, 4.0 * kPi * kPi, 1e-10);
  for (double len : {0.5, 1.0, 2.0, 7.0}) {
    EXPECT_NEAR(zeta_determinant(holonomy_circle_spectrum(len, 0.5)).determinant, 4.0, 1e-10);
    EXPECT_NEAR(zeta_determinant(interval_spectrum(len)).determinant, 2.0 * len, 1e-10);
  }
}

TEST(Zeta, ReportIsConsistent) {
  const auto r = zeta_determinant(interval_spectrum(3.0, 2));
  EXPECT_DOUBLE_EQ(r.determinant, std::exp(-r.zeta_prime_at_0));
  EXPECT_NEAR(r.zeta_at_0, -1.0, 1e-15);
}

TEST(Zeta, SpectrumValidation) {
  LatticeSpectrum s{1.0, 1.0, IndexSet::integers, 1, false};
  EXPECT_THROW(zeta_determinant(s), InputError);  // zero mode not excluded
  s.excluded_zero = true;
  EXPECT_NO_THROW(zeta_determinant(s));
  s.multiplicity = 0;
  EXPECT_THROW(zeta_determinant(s), InputError);
  EXPECT_THROW(zeta_determinant({1.0, 0.5, IndexSet::half_line, 1, true}), InputError);
  EXPECT_THROW(zeta_determinant({1.0, 1.5, IndexSet::half_line, 1, false}), InputError);
}

TEST(Zeta, GluingRatio) {
  for (double len : {0.5, 1.0, 2.0}) {
    const auto g = analytic_gluing_check(len);
    EXPECT_NEAR(g.ratio, 1.0, 1e-6) << len;
    EXPECT_EQ(g.anomaly, 4.0);
    EXPECT_EQ(g.chi_n, 2);
    EXPECT_NEAR(g.t_rel, 2.0 * len, 1e-10);
    EXPECT_NEAR(g.t_glued, 4.0 * len * len, 1e-10);
  }
}

TEST(Zeta, GluedCircleMatchesCombinatorialCircle) {
  // Unit edges: circumference n, and the trivial combinatorial circle has |T| = n^2.
  for (Index n : {3, 8}) {
    const double analytic = zeta_determinant(circle_spectrum(double(n))).determinant;
    const auto x = circle_complex(n, Holonomy::trivial(n));
    const double comb =
        std::abs(cm_torsion(x, 0.0, sign_convention(SignMode::plain)).coordinate);
    EXPECT_NEAR(comb, analytic, 1e-8 * analytic) << n;
  }
}

TEST(ZetaProperty, MatchesDirectSummation) {
  tlgen::Rng rng(401);
  for (int it = 0; it < 20; ++it) {
    const double s = rng.uniform(2.0, 6.0);
    const double a = rng.uniform(0.05, 3.0);
    EXPECT_NEAR(hurwitz_zeta(s, a), direct_hurwitz(s, a), 1e-10) << s << " " << a;
  }
}

TEST(ZetaProperty, LerchMatchesNumericalDerivative) {
  tlgen::Rng rng(402);
  for (int it = 0; it < 30; ++it) {
    const double a = rng.uniform(0.05, 4.0);
    const double h = 1e-5;
    const double numeric = (hurwitz_zeta(h, a) - hurwitz_zeta(-h, a)) / (2.0 * h);
    EXPECT_NEAR(numeric, hurwitz_zeta_deriv0(a), 1e-8) << a;
  }
}

TEST(ZetaProperty, ScalingLaw) {
  tlgen::Rng rng(403);
  for (int it = 0; it < 30; ++it) {
    LatticeSpectrum s{rng.uniform(0.2, 5.0), rng.uniform(0.05, 1.0),
                      rng.integer(0, 1) ? IndexSet::half_line : IndexSet::integers,
                      Index(rng.integer(1, 3)), false};
    if (s.has_zero_mode()) s.excluded_zero = true;
    const double t = rng.uniform(0.3, 3.0);
    const auto base = zeta_determinant(s);
    LatticeSpectrum scaled = s;
    scaled.scale *= t;  // eigenvalues scale by t^2
    const auto r = zeta_determinant(scaled);
    EXPECT_NEAR(r.determinant / base.determinant, std::pow(t, 2.0 * base.zeta_at_0), 1e-10) << it;
  }
}

TEST(ZetaProperty, HolonomyCircleIndependentOfCircumference) {
  tlgen::Rng rng(404);
  for (int it = 0; it < 30; ++it) {
    const double theta = rng.uniform(0.01, 0.99);
    const double expected = 4.0 * std::pow(std::sin(kPi * theta), 2);
    const double len = rng.uniform(0.1, 10.0);
    EXPECT_NEAR(zeta_determinant(holonomy_circle_spectrum(len, theta)).determinant, expected,
                1e-10);
  }
}

TEST(ZetaProperty, GluingRatioIndependentOfLengths) {
  const double base = analytic_gluing_check(1.0).ratio;
  tlgen::Rng rng(405);
  for (int it = 0; it < 20; ++it) {
    const double a = rng.uniform(0.1, 5.0), b = rng.uniform(0.1, 5.0);
    EXPECT_NEAR(analytic_gluing_check(a, b).ratio, base, 1e-8);
  }
}
