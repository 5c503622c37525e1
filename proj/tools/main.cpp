#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "cvxscat/error.hpp"

namespace {

void add_common(CLI::App* sub, cvxscat::cli::CommonArgs& args) {
  sub->add_option("-c,--config", args.config_file, "JSON config layered over the defaults")->check(CLI::ExistingFile);
  sub->add_option("-s,--set", args.overrides, "Override one config key, e.g. --set functional.lambda=2");
  sub->add_option("-o,--out", args.out_dir, "Output directory (defaults to output_dir from the config)");
  sub->add_flag("-q,--quiet", args.quiet, "Suppress the summary on stdout");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace cvxscat::cli;
  CLI::App app{"Convexification solver for the 1-D inverse scattering problem"};
  app.require_subcommand(1);

  CommonArgs args;

  auto* simulate = app.add_subcommand("simulate", "Simulate boundary data for the configured profile");
  add_common(simulate, args);
  double field_k = 0.0;
  bool dump_basis = false;
  simulate->add_option("--field-k", field_k, "Also write the forward field u(x, k) at this wavenumber");
  simulate->add_flag("--dump-basis", dump_basis, "Also write basis values, M and G");

  auto* invert = app.add_subcommand("invert", "Minimize the Carleman-weighted functional");
  add_common(invert, args);
  std::string data_file;
  invert->add_option("--data", data_file, "data.csv from `simulate` (otherwise data are simulated)")
      ->check(CLI::ExistingFile);

  auto* reconstruct = app.add_subcommand("reconstruct", "Recover c(x) from a V_fields.csv");
  add_common(reconstruct, args);
  std::string fields_file;
  reconstruct->add_option("fields", fields_file, "V_fields.csv written by `invert`")->required()->check(CLI::ExistingFile);

  auto* certify = app.add_subcommand("certify", "Run numerical certificates; exit status 1 if any fails");
  add_common(certify, args);
  std::string certify_example = "example1";
  certify->add_option("--example", certify_example, "Problem to certify on")->capture_default_str();
  std::vector<std::string> which{"carleman", "convexity", "lipschitz", "gradient", "contraction"};
  certify->add_option("--only", which, "Subset of carleman, convexity, lipschitz, gradient, contraction, error")
      ->check(CLI::IsMember({"carleman", "convexity", "lipschitz", "gradient", "contraction", "error"}));

  auto* example = app.add_subcommand("example", "Run example1, example2, example3 or homogeneous");
  add_common(example, args);
  std::string name;
  example->add_option("name", name, "Example name or number")->required();

  auto* invariance = app.add_subcommand("invariance", "Compare inversions started from 0 and from Q*");
  add_common(invariance, args);
  std::string invariance_example = "example1";
  invariance->add_option("--example", invariance_example, "Problem to study")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(args, field_k, dump_basis);
    if (invert->parsed()) return cmd_invert(args, data_file);
    if (reconstruct->parsed()) return cmd_reconstruct(args, fields_file);
    if (certify->parsed()) return cmd_certify(args, certify_example, which);
    if (example->parsed()) return cmd_example(args, name);
    if (invariance->parsed()) return cmd_invariance(args, invariance_example);
  } catch (const cvxscat::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
