#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "commands.hpp"
#include "precess/scenario.hpp"
#include "precess/timestepper.hpp"

using namespace precess::cli;

int main(int argc, char** argv) {
  CLI::App app{"precess: Galerkin Navier-Stokes in precessing ellipsoids"};
  app.require_subcommand(1);

  std::string config, export_path, output;
  auto* basis = app.add_subcommand("basis", "build the tangent solenoidal basis and check it symbolically");
  basis->add_option("--config", config, "scenario file")->required();
  basis->add_option("--export", export_path, "write the exact basis to this file");

  auto* eig = app.add_subcommand("eig", "viscous kernels and the coercivity constant K_N");
  eig->add_option("--config", config, "scenario file")->required();

  auto* steady = app.add_subcommand("steady", "residuals of u_P and u_P + w e_z x x");
  steady->add_option("--config", config, "scenario file")->required();

  auto* run = app.add_subcommand("run", "time integration with CSV diagnostics");
  run->add_option("--config", config, "scenario file")->required();
  run->add_option("--output", output, "override output.path");

  VerifyOptions vopt;
  auto* verify = app.add_subcommand("verify", "invariant battery on sphere, spheroid and triaxial domains");
  verify->add_option("--config", config, "accepted for uniformity; unused");
  verify->add_option("--basis", vopt.basis_file, "also check an exported basis file");
  verify->add_option("--degrees", vopt.degrees, "basis degrees")->delimiter(',');
  verify->add_flag("--perturb-advection", vopt.perturb_advection,
                   "test hook: add 1e-6 to one advection entry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage_error;
  }

  try {
    if (*basis) return cmd_basis(config, export_path, std::cout);
    if (*eig) return cmd_eig(config, std::cout);
    if (*steady) return cmd_steady(config, std::cout);
    if (*run) return cmd_run(config, output, std::cout);
    if (*verify) return cmd_verify(vopt, std::cout);
  } catch (const precess::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return usage_error;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage_error;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return invariant_failure;
  }
  return usage_error;
}
