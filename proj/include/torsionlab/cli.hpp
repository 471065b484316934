#pragma once

// Command implementations behind the torsionlab executable. Each command
// returns a RunReport; run() maps exceptions onto report statuses.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "torsionlab/chirality.hpp"
#include "torsionlab/models.hpp"
#include "torsionlab/report.hpp"
#include "torsionlab/zeta.hpp"

namespace torsionlab {

struct CliOptions {
  std::string command;
  std::string path;
  double lambda = 0.0;
  std::string sign_mode = "plain";
  std::optional<double> theta;
  Index subdiv = 8;
  Index second_subdiv = 0;  // 0: same as subdiv
  double length = 1.0;
  Index rank = 1;
  std::string bc = "rel";
  bool combinatorial = false;
  std::optional<double> s;
  std::optional<double> a;
  ToleranceConfig tol;
  std::vector<std::string> echo;
};

// Criterion thresholds that do not follow --check-tol.
inline constexpr double kZetaAgreementTol = 1e-6;
inline constexpr double kGluingTol = 1e-6;
inline constexpr double kClosedFormTol = 1e-10;

namespace detail {

inline Json dims_json(const std::vector<Index>& v) { return Json(v); }

inline void conventions(RunReport& r, SignMode mode) {
  r.conventions["sign_mode"] = to_string(mode);
  r.conventions["tau_exponent"] = "(-1)^(j+1)";
  r.conventions["graded_det_exponent"] = "(-1)^(j+1) j";
}

inline bool all_zero(const BiGradedComplex& x) {
  for (const auto& m : x.d_maps()) {
    if (m.size() && m.cwiseAbs().maxCoeff() > 0.0) return false;
  }
  for (const auto& m : x.dstar_maps()) {
    if (m.size() && m.cwiseAbs().maxCoeff() > 0.0) return false;
  }
  return true;
}

inline double relative_difference(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

inline double require_theta(const CliOptions& o) {
  if (!o.theta) throw InputError("--theta is required");
  const double t = *o.theta;
  if (t == 0.0 || t == 1.0) {
    throw InputError("theta = " + format_number(t) +
                     " gives trivial holonomy: the circle is non-acyclic and its torsion "
                     "needs cohomology bases (use `splice` for the non-acyclic case)");
  }
  if (!(t > 0.0 && t < 1.0)) throw InputError("theta must lie in (0, 1)");
  return t;
}

inline Boundary parse_boundary(const std::string& s) {
  if (s == "rel") return Boundary::rel;
  if (s == "abs") return Boundary::abs;
  throw InputError("unknown boundary condition '" + s + "' (expected rel or abs)");
}

}  // namespace detail

inline RunReport cmd_validate(const CliOptions& o) {
  RunReport r;
  r.tolerances = o.tol;
  const ComplexDocument doc = load_document(o.path);
  const BiGradedComplex x = to_complex(doc);
  const ValidationReport v = validate(x, o.tol);
  r.results["top_degree"] = x.top_degree();
  r.results["dims"] = x.dims();
  r.results["dstar_source"] = doc.dstar ? "document" : (doc.weight ? "weighted adjoint" : "adjoint");
  r.check("max d^2 residual", v.d_residual, o.tol.check_tol);
  r.check("max (d*)^2 residual", v.dstar_residual, o.tol.check_tol);
  for (const auto& violation : v.violations) {
    r.check(violation.what + " at degree " + std::to_string(violation.degree), violation.residual,
            o.tol.check_tol);
  }
  if (v.valid) {
    const ComplexSummary s = summarize(x, o.tol);
    r.results["d_ranks"] = s.d_ranks;
    r.results["dstar_ranks"] = s.dstar_ranks;
    r.results["cohomology_dims"] = s.cohomology_dims;
    r.results["homology_dims"] = s.homology_dims;
  }
  return r;
}

inline RunReport cmd_torsion(const CliOptions& o) {
  RunReport r;
  r.tolerances = o.tol;
  const SignMode mode = parse_sign_mode(o.sign_mode);
  detail::conventions(r, mode);
  const BiGradedComplex x = to_complex(load_document(o.path));
  if (detail::all_zero(x)) r.warnings.push_back("no content: every differential is zero");
  const TorsionElement t = cm_torsion(x, o.lambda, sign_convention(mode), {}, {}, o.tol);
  r.results["lambda"] = o.lambda;
  r.results["coordinate"] = complex_json(t.coordinate);
  r.results["modulus"] = std::abs(t.coordinate);
  r.results["sign"] = t.sign_value;
  r.results["tau_low"] = complex_json(t.tau_low);
  r.results["tau_prime_low"] = complex_json(t.tau_prime_low);
  r.results["graded_det_high"] = complex_json(t.graded_det_high);
  r.results["low_dims"] = t.low_dims;
  r.results["high_dims"] = t.high_dims;
  std::vector<Index> h;
  for (const auto& b : t.cohomology_bases) h.push_back(b.dimension());
  r.results["cohomology_dims"] = h;
  return r;
}

/// The spectral split at lambda: the high part must be acyclic and the low
/// part must carry the full cohomology.
inline RunReport cmd_cut(const CliOptions& o) {
  RunReport r;
  r.tolerances = o.tol;
  const BiGradedComplex x = to_complex(load_document(o.path));
  require_valid(x, o.tol);
  const SpectralCut cut = spectral_cut(x, o.lambda, o.tol);
  const BiGradedComplex low = low_part(x, cut, o.tol);
  const BiGradedComplex high = high_part(x, cut, o.tol);
  const auto full = cohomology_dims(x, Differential::d, o.tol);
  const auto lowh = cohomology_dims(low, Differential::d, o.tol);
  const auto highh = cohomology_dims(high, Differential::d, o.tol);
  r.results["lambda"] = o.lambda;
  r.results["scale"] = cut.scale;
  r.results["low_dims"] = cut.low_dims();
  r.results["high_dims"] = cut.high_dims();
  r.results["cohomology_dims"] = full;
  r.results["low_cohomology_dims"] = lowh;
  r.results["high_cohomology_dims"] = highh;
  Json moduli = Json::array();
  for (const auto& spec : cut.spectra) {
    std::vector<double> m;
    for (Index i = 0; i < spec.size(); ++i) m.push_back(std::abs(spec(i)));
    std::sort(m.begin(), m.end());
    moduli.push_back(m);
  }
  r.results["laplacian_moduli"] = std::move(moduli);
  r.check("projector commutation residual", cut.compatibility_residual, o.tol.check_tol);
  double high_defect = 0.0, low_defect = 0.0;
  for (size_t j = 0; j < full.size(); ++j) {
    high_defect += std::abs(double(highh[j]));
    low_defect += std::abs(double(lowh[j] - full[j]));
  }
  r.check("high part cohomology (total dimension)", high_defect, 0.0);
  r.check("low part cohomology defect (total dimension)", low_defect, 0.0);
  return r;
}

inline RunReport cmd_circle(const CliOptions& o) {
  RunReport r;
  r.tolerances = o.tol;
  detail::conventions(r, SignMode::plain);
  const double theta = detail::require_theta(o);
  if (o.rank < 1) throw InputError("--rank must be positive");
  const Index n = o.subdiv;
  const BiGradedComplex x =
      circle_complex(n, Holonomy::loop(n, unitary_phase(theta, o.rank)), std::nullopt, o.tol);
  const TorsionElement t = cm_torsion(x, 0.0, sign_convention(SignMode::plain), {}, {}, o.tol);
  const double comb = std::abs(t.coordinate);
  const double closed = std::pow(4.0 * std::pow(std::sin(std::numbers::pi * theta), 2), o.rank);
  const double zeta =
      std::pow(zeta_determinant(holonomy_circle_spectrum(double(n), theta)).determinant, o.rank);
  r.results["theta"] = theta;
  r.results["subdivisions"] = n;
  r.results["rank"] = o.rank;
  r.results["combinatorial"] = comb;
  r.results["closed_form"] = closed;
  r.results["zeta_determinant"] = zeta;
  r.check("relative difference to 4 sin^2(pi theta)", detail::relative_difference(comb, closed),
          o.tol.check_tol);
  r.check("relative difference to zeta determinant", detail::relative_difference(comb, zeta),
          kZetaAgreementTol);
  return r;
}

inline RunReport cmd_interval(const CliOptions& o) {
  RunReport r;
  r.tolerances = o.tol;
  detail::conventions(r, SignMode::plain);
  const Boundary bc = detail::parse_boundary(o.bc);
  if (o.rank < 1) throw InputError("--rank must be positive");
  const BiGradedComplex x = interval_complex(o.subdiv, bc, std::nullopt, o.rank, o.tol);
  const TorsionElement t = cm_torsion(x, 0.0, sign_convention(SignMode::plain), {}, {}, o.tol);
  const ComplexSummary s = summarize(x, o.tol);
  r.results["boundary"] = to_string(bc);
  r.results["subdivisions"] = o.subdiv;
  r.results["rank"] = o.rank;
  r.results["dims"] = x.dims();
  r.results["cohomology_dims"] = s.cohomology_dims;
  r.results["combinatorial"] = std::abs(t.coordinate);
  const double analytic =
      std::pow(zeta_determinant(interval_spectrum(double(o.subdiv))).determinant, o.rank);
  r.results["zeta_determinant_length_n"] = analytic;
  r.check("d^2 residual", validate(x, o.tol).d_residual, o.tol.check_tol);
  return r;
}

inline RunReport cmd_splice(const CliOptions& o) {
  RunReport r;
  r.tolerances = o.tol;
  detail::conventions(r, SignMode::plain);
  const double theta = o.theta.value_or(0.0);
  if (!(theta >= 0.0 && theta < 1.0)) throw InputError("theta must lie in [0, 1)");
  if (o.rank < 1) throw InputError("--rank must be positive");
  const Index n1 = o.subdiv;
  const Index n2 = o.second_subdiv > 0 ? o.second_subdiv : o.subdiv;
  const SpliceScenario s = split_circle(n1, n2, unitary_phase(theta, o.rank));
  const SplittingReport rep = combinatorial_splitting_check(s, o.tol);
  r.results["theta"] = theta;
  r.results["first_subdivisions"] = n1;
  r.results["second_subdivisions"] = n2;
  r.results["rank"] = o.rank;
  r.results["t_rel_first"] = complex_json(rep.t_rel1);
  r.results["t_abs_second"] = complex_json(rep.t_abs2);
  r.results["t_spliced"] = complex_json(rep.t_spliced);
  r.results["psi"] = complex_json(rep.psi);
  r.results["psi_prime"] = complex_json(rep.psi_prime);
  r.results["anomaly"] = 1.0;
  r.results["ratio"] = rep.ratio;
  r.results["signed_ratio"] = complex_json(rep.signed_ratio);
  r.check("|ratio - 1|", std::abs(rep.ratio - 1.0), o.tol.check_tol);
  if (std::abs(rep.signed_ratio - 1.0) > o.tol.check_tol) {
    r.warnings.push_back("signed ratio differs from 1 by a phase; sign conventions are not fixed");
  }
  return r;
}

inline RunReport cmd_glue(const CliOptions& o) {
  if (o.combinatorial) return cmd_splice(o);
  RunReport r;
  r.tolerances = o.tol;
  detail::conventions(r, SignMode::plain);
  const GluingReport g = analytic_gluing_check(o.length, o.length, o.tol);
  r.results["length"] = o.length;
  r.results["chi_n"] = g.chi_n;
  r.results["anomaly"] = g.anomaly;
  r.results["t_rel"] = g.t_rel;
  r.results["t_abs"] = g.t_abs;
  r.results["t_glued"] = g.t_glued;
  r.results["psi"] = g.psi;
  r.results["psi_prime"] = g.psi_prime;
  r.results["lhs"] = g.lhs;
  r.results["rhs"] = g.rhs;
  r.results["ratio"] = g.ratio;
  r.results["signed_ratio"] = complex_json(g.signed_ratio);
  r.check("|ratio - 1|", std::abs(g.ratio - 1.0), kGluingTol);
  if (std::abs(g.signed_ratio - 1.0) > kGluingTol) {
    r.warnings.push_back("signed ratio is [" + format_number(g.signed_ratio.real()) + ", " +
                         format_number(g.signed_ratio.imag()) +
                         "]; the phase is left to the undetermined sign conventions");
  }
  return r;
}

inline RunReport cmd_zeta(const CliOptions& o) {
  RunReport r;
  r.tolerances = o.tol;
  if (o.s || o.a) {
    const double s = o.s.value_or(0.0);
    const double a = o.a.value_or(1.0);
    r.results["s"] = s;
    r.results["a"] = a;
    r.results["hurwitz_zeta"] = hurwitz_zeta(s, a);
    r.results["hurwitz_zeta_deriv0"] = hurwitz_zeta_deriv0(a);
    return r;
  }
  const double len = o.length;
  const double pi = std::numbers::pi;
  const double z2 = hurwitz_zeta(2.0, 1.0);
  const auto dir = zeta_determinant(interval_spectrum(len));
  const auto circ = zeta_determinant(circle_spectrum(len));
  r.results["length"] = len;
  r.results["hurwitz_zeta_2_1"] = z2;
  r.results["interval_determinant"] = dir.determinant;
  r.results["interval_zeta_at_0"] = dir.zeta_at_0;
  r.results["circle_determinant"] = circ.determinant;
  r.check("|zeta_H(2,1) - pi^2/6|", std::abs(z2 - pi * pi / 6.0), kClosedFormTol);
  r.check("|interval determinant - 2L|", std::abs(dir.determinant - 2.0 * len), kClosedFormTol);
  r.check("|circle determinant - L^2| / L^2",
          detail::relative_difference(circ.determinant, len * len), kClosedFormTol);
  const double theta = o.theta.value_or(0.5);
  if (!(theta > 0.0 && theta < 1.0)) throw InputError("theta must lie in (0, 1)");
  const auto hol = zeta_determinant(holonomy_circle_spectrum(len, theta));
  const double closed = 4.0 * std::pow(std::sin(pi * theta), 2);
  r.results["theta"] = theta;
  r.results["holonomy_circle_determinant"] = hol.determinant;
  r.check("|holonomy circle determinant - 4 sin^2(pi theta)|", std::abs(hol.determinant - closed),
          kClosedFormTol);
  return r;
}

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"validate", "torsion", "cut",  "circle",
                                                 "interval", "splice",  "glue", "zeta"};
  return names;
}

/// Runs one command. Input errors (exit 2) and failed checks (exit 1) come
/// back as report statuses rather than exceptions.
inline RunReport run(const CliOptions& o) {
  RunReport r;
  try {
    o.tol.validate();
    if (o.command == "validate") r = cmd_validate(o);
    else if (o.command == "torsion") r = cmd_torsion(o);
    else if (o.command == "cut") r = cmd_cut(o);
    else if (o.command == "circle") r = cmd_circle(o);
    else if (o.command == "interval") r = cmd_interval(o);
    else if (o.command == "splice") r = cmd_splice(o);
    else if (o.command == "glue") r = cmd_glue(o);
    else if (o.command == "zeta") r = cmd_zeta(o);
    else throw InputError("unknown command '" + o.command + "'");
  } catch (const InputError& e) {
    r = RunReport{};
    r.input_error = true;
    r.error = e.what();
  } catch (const CutCollision& e) {
    r = RunReport{};
    r.input_error = true;
    r.error = e.what();
    r.results["nearest_moduli"] = e.nearest_moduli();
  } catch (const CheckFailure& e) {
    r = RunReport{};
    r.error = e.what();
  } catch (const Error& e) {
    r = RunReport{};
    r.error = e.what();
  }
  r.command = o.echo.empty() ? std::vector<std::string>{o.command} : o.echo;
  r.tolerances = o.tol;
  return r;
}

}  // namespace torsionlab
