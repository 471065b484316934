#include <cstdio>

#include "torsionlab/models.hpp"
#include "torsionlab/zeta.hpp"

int main() {
  using namespace torsionlab;

  // d = (2), d* = (3): the torsion is 2 * 3.
  const BiGradedComplex two_term({1, 1}, {CMatrix::Constant(1, 1, 2.0)},
                                 {CMatrix::Constant(1, 1, 3.0)});
  const auto t = cm_torsion(two_term, 0.0, sign_convention(SignMode::plain));
  std::printf("two-term torsion      %.17g %+.17gi\n", t.coordinate.real(), t.coordinate.imag());

  // Circle with 16 edges and holonomy exp(2 pi i / 3), against 4 sin^2(pi / 3).
  const double theta = 1.0 / 3.0;
  const auto circle = circle_complex(16, Holonomy::loop(16, unitary_phase(theta)));
  const auto c = cm_torsion(circle, 0.0, sign_convention(SignMode::plain));
  const double zeta = zeta_determinant(holonomy_circle_spectrum(16.0, theta)).determinant;
  std::printf("circle torsion        %.17g (zeta determinant %.17g)\n", std::abs(c.coordinate), zeta);

  // The same circle cut into pieces of 7 and 9 edges.
  const auto split = combinatorial_splitting_check(split_circle(7, 9, unitary_phase(theta)));
  std::printf("splitting ratio       %.17g\n", split.ratio);

  const auto glue = analytic_gluing_check(1.0);
  std::printf("analytic gluing ratio %.17g\n", glue.ratio);
  return 0;
}
