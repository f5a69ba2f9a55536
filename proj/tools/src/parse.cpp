#include <CLI11.hpp>

#include <string>
#include <vector>

#include "gsw/cli/cli.hpp"

namespace gsw::cli {
namespace {

void add_output(CLI::App* sub, ExperimentConfig& c) {
  sub->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"json", "csv", "text"}));
  sub->add_option("--out", c.out_path, "Write the report here instead of stdout");
  sub->add_option("--dump", c.dump_prefix, "Write intermediate artifacts to <prefix>.*.txt");
  sub->add_option("--seed", c.seed, "Random seed (recorded in the report)");
}

void add_expression_extras(CLI::App* sub, ExperimentConfig& c) {
  sub->add_option("--modes", c.modes, "Number of modes (inferred from the expression by default)")
      ->check(CLI::Range(1, 64));
  sub->add_option("--param", c.params, "Parameter binding name=value (repeatable)");
}

void add_cutoff(CLI::App* sub, ExperimentConfig& c) {
  sub->add_option("--cutoff", c.cutoffs, "Fock cutoff: one value, or one per mode (default: adequate for the ensemble)")
      ->check(CLI::Range(1U, 4096U))
      ->delimiter(',');
}

}  // namespace

ExperimentConfig parse_arguments(int argc, const char* const* argv) {
  ExperimentConfig c;
  CLI::App app{"Classical-to-quantum P-mapping workbench", "gsw"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", version());

  auto* normal = app.add_subcommand("normal-order", "Normal-order a ladder-operator expression");
  normal->add_option("--expr", c.expr, "Operator expression, e.g. a0*ad0")->required();
  add_expression_extras(normal, c);
  add_output(normal, c);

  auto* quantize = app.add_subcommand("quantize", "Quantize a classical polynomial");
  quantize->add_option("--expr", c.expr, "Classical expression in al/conj(al)")->required();
  quantize->add_option("--rule", c.rule, "normal (G_n), raw (G_r) or both")->check(CLI::IsMember({"normal", "raw", "both"}));
  add_expression_extras(quantize, c);
  add_output(quantize, c);

  auto* spectrum = app.add_subcommand("spectrum", "Eigen-analysis of M(E) = N((h - E)^2)");
  spectrum->add_option("--h", c.h, "Classical Hamiltonian")->required();
  spectrum->add_option("--energy", c.energy, "Energy E >= 0")->required()->check(CLI::NonNegativeNumber);
  spectrum->add_option("--ensemble", c.ensemble, "point:..., phase:K:r, levelset:E:count:seed or file:path");
  spectrum->add_option("--tol", c.tolerance, "Zero-eigenvalue tolerance (default 1e-8 (1 + spectral radius))")
      ->check(CLI::PositiveNumber);
  add_cutoff(spectrum, c);
  add_expression_extras(spectrum, c);
  add_output(spectrum, c);

  auto* trace = app.add_subcommand("trace-check", "Compare Tr(rho G_n) with the classical average of g");
  trace->add_option("--g", c.g, "Classical polynomial g")->required();
  trace->add_option("--ensemble", c.ensemble, "point:..., phase:K:r, levelset:E:count:seed (needs --h) or file:path")
      ->required();
  trace->add_option("--h", c.h, "Hamiltonian for levelset ensembles");
  trace->add_option("--tolerance", c.tolerance, "Residual tolerance (default 1e-8)")->check(CLI::PositiveNumber);
  trace->add_option("--max-degree", c.max_degree, "Largest accepted degree of g")->check(CLI::Range(0U, 16U));
  add_cutoff(trace, c);
  add_expression_extras(trace, c);
  add_output(trace, c);

  auto* lattice = app.add_subcommand("lattice-check", "Lattice-field energy and trace-theorem checks");
  lattice->add_option("--model", c.model_path, "Model file (overrides the inline model options)");
  lattice->add_option("--sites", c.sites, "Lattice sites")->check(CLI::Range(1, 16));
  lattice->add_option("--spacing", c.spacing, "Lattice spacing")->check(CLI::PositiveNumber);
  lattice->add_option("--masses", c.masses, "Field masses")->delimiter(',')->check(CLI::PositiveNumber);
  lattice->add_option("--interaction", c.interaction, "Local interaction in phiJ, piJ, e.g. 0.1*phi0^4");
  lattice->add_option("--configs", c.configs, "Random configurations")->check(CLI::Range(1, 10000));
  lattice->add_option("--amplitude", c.amplitude, "Half-width of the uniform phi/pi draw")->check(CLI::PositiveNumber);
  lattice->add_option("--tolerance", c.tolerance, "Trace residual tolerance (default 1e-6)")->check(CLI::PositiveNumber);
  add_cutoff(lattice, c);
  add_output(lattice, c);

  auto* incompressible = app.add_subcommand("incompressibility", "Phase-space divergence of a flow");
  incompressible->add_option("--hamiltonian", c.hamiltonian, "Hamiltonian in q/p (or phi/pi) variables");
  incompressible->add_option("--damped", c.gamma, "Use the damped oscillator with this gamma instead");
  incompressible->add_option("--model", c.model_path, "Use a lattice model's real-space Hamiltonian");
  incompressible->add_option("--samples", c.samples, "Sample points")->check(CLI::Range(1, 1000000));
  incompressible->add_option("--expect", c.expect, "incompressible (default) or compressible")
      ->check(CLI::IsMember({"incompressible", "compressible"}));
  add_expression_extras(incompressible, c);
  add_output(incompressible, c);

  auto* boltzmann = app.add_subcommand("boltzmann", "Metropolis samples from exp(-k H)");
  boltzmann->add_option("--hamiltonian", c.hamiltonian, "Hamiltonian in q/p variables (default p0^2/2 + q0^2/2)");
  boltzmann->add_option("--k", c.k, "Inverse temperature k > 0")->check(CLI::PositiveNumber);
  boltzmann->add_option("--count", c.count, "Samples")->check(CLI::Range(1, 10000000));
  add_expression_extras(boltzmann, c);
  add_output(boltzmann, c);

  auto* invariance = app.add_subcommand("invariance", "Moment drift of an ensemble under the flow");
  invariance->add_option("--hamiltonian", c.hamiltonian, "Hamiltonian in q/p variables (default p0^2/2 + q0^2/2)");
  invariance->add_option("--ensemble", c.ensemble, "boltzmann:k:count or point:q,p;...")->required();
  invariance->add_option("--T", c.T, "Horizon T >= 0")->check(CLI::NonNegativeNumber);
  invariance->add_option("--dt", c.dt, "Time step")->check(CLI::PositiveNumber);
  invariance->add_option("--expect", c.expect, "invariant (default) or drift")->check(CLI::IsMember({"invariant", "drift"}));
  add_expression_extras(invariance, c);
  add_output(invariance, c);

  auto* dual = app.add_subcommand("dual-check", "Tr(F rho(alpha)) against exp(-k h(alpha))");
  dual->add_option("--h", c.h, "Classical polynomial h")->required();
  dual->add_option("--k", c.k, "k > 0")->check(CLI::PositiveNumber);
  dual->add_option("--order", c.order, "Taylor order")->check(CLI::Range(0U, 40U));
  dual->add_option("--alpha", c.alpha, "State re,im;re,im;... (one pair per mode)")->required();
  dual->add_option("--tolerance", c.tolerance, "Numerical allowance added to the remainder bound (default 1e-9)")
      ->check(CLI::PositiveNumber);
  add_cutoff(dual, c);
  add_expression_extras(dual, c);
  add_output(dual, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    throw HelpRequested(sub->help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::CallForVersion&) {
    throw HelpRequested(version() + "\n");
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  for (auto* sub : app.get_subcommands()) c.subcommand = sub->get_name();
  c.damped = incompressible->count("--damped") > 0;
  if (c.format.empty()) c.format = (c.subcommand == "normal-order" || c.subcommand == "quantize") ? "text" : "json";
  return c;
}

}  // namespace gsw::cli
