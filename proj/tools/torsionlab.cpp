#include <iostream>

#include <CLI11.hpp>

#include "torsionlab/cli.hpp"

int main(int argc, char** argv) {
  using namespace torsionlab;
  CliOptions o;
  bool json = false;
  for (int i = 1; i < argc; ++i) o.echo.emplace_back(argv[i]);

  CLI::App app{"Torsion of finite bi-graded complexes"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--rank-tol", o.tol.rank_tol, "relative singular value cutoff")->capture_default_str();
  app.add_option("--cluster-tol", o.tol.cluster_tol, "eigenvalue clustering radius")->capture_default_str();
  app.add_option("--check-tol", o.tol.check_tol, "residual tolerance for checks")->capture_default_str();
  app.add_flag("--json", json, "print the report as JSON");

  auto* validate = app.add_subcommand("validate", "check the invariants of a complex document");
  validate->add_option("path", o.path)->required();

  auto* torsion = app.add_subcommand("torsion", "torsion coordinate of a complex document");
  torsion->add_option("path", o.path)->required();
  torsion->add_option("--lambda", o.lambda, "spectral cut")->capture_default_str();
  torsion->add_option("--sign-mode", o.sign_mode, "plain, cm or bk")->capture_default_str();

  auto* cut = app.add_subcommand("cut", "spectral split of a complex document");
  cut->add_option("path", o.path)->required();
  cut->add_option("--lambda", o.lambda, "spectral cut")->capture_default_str();

  auto* circle = app.add_subcommand("circle", "circle with holonomy exp(2 pi i theta)");
  circle->add_option("--theta", o.theta, "holonomy angle in (0, 1)")->required();
  circle->add_option("--subdiv", o.subdiv, "number of edges")->capture_default_str();
  circle->add_option("--rank", o.rank, "fiber rank")->capture_default_str();

  auto* interval = app.add_subcommand("interval", "subdivided interval with rel or abs boundary");
  interval->add_option("--subdiv", o.subdiv, "number of edges")->capture_default_str();
  interval->add_option("--bc", o.bc, "rel or abs")->capture_default_str();
  interval->add_option("--rank", o.rank, "fiber rank")->capture_default_str();

  auto* splice = app.add_subcommand("splice", "combinatorial splitting check on a cut circle");
  splice->add_option("--theta", o.theta, "holonomy angle in [0, 1)");
  splice->add_option("--subdiv", o.subdiv, "edges of the first piece")->capture_default_str();
  splice->add_option("--second-subdiv", o.second_subdiv, "edges of the second piece (default: --subdiv)");
  splice->add_option("--rank", o.rank, "fiber rank")->capture_default_str();

  auto* glue = app.add_subcommand("glue", "analytic gluing check on a circle of circumference 2L");
  glue->add_option("--length", o.length, "length L of each piece")->capture_default_str();
  glue->add_flag("--combinatorial", o.combinatorial, "run the combinatorial splitting check instead");
  glue->add_option("--theta", o.theta, "holonomy angle for --combinatorial");
  glue->add_option("--subdiv", o.subdiv, "edges of the first piece for --combinatorial")->capture_default_str();
  glue->add_option("--second-subdiv", o.second_subdiv, "edges of the second piece for --combinatorial");
  glue->add_option("--rank", o.rank, "fiber rank for --combinatorial")->capture_default_str();

  auto* zeta = app.add_subcommand("zeta", "zeta-regularized determinants of model spectra");
  zeta->add_option("--length", o.length, "interval length / circle circumference")->capture_default_str();
  zeta->add_option("--theta", o.theta, "holonomy angle in (0, 1)");
  zeta->add_option("--s", o.s, "evaluate zeta_H(s, a) instead");
  zeta->add_option("--a", o.a, "offset for --s");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  o.command = app.get_subcommands().front()->get_name();

  const RunReport report = run(o);
  if (json) {
    std::cout << report.to_json().dump(2) << "\n";
  } else {
    std::cout << report.to_text();
  }
  if (report.status() == RunStatus::input_error) std::cerr << "error: " << report.error << "\n";
  return report.exit_code();
}
