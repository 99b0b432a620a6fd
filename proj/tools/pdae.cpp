#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pdae/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Constraint-eliminating solver for semi-explicit PDAEs"};
  app.require_subcommand(1);

  std::string config;
  std::string output_dir = ".";
  app.add_option("--output-dir", output_dir, "Directory for output files")->capture_default_str();

  auto* solve = app.add_subcommand("solve", "Integrate from the configured initial data");
  solve->add_option("config", config, "JSON config file")->required();
  auto* verify = app.add_subcommand("verify", "Run the operator-property harness");
  verify->add_option("config", config, "JSON config file")->required();
  auto* converge = app.add_subcommand("converge", "Spatial and temporal self-convergence studies");
  converge->add_option("config", config, "JSON config file")->required();
  for (auto* sub : {solve, verify, converge}) {
    sub->add_option("--output-dir", output_dir, "Directory for output files");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, std::cerr, std::cerr);
    return code == 0 ? 0 : pdae::kExitConfigError;
  }

  if (*solve) {
    return pdae::cmd_solve(config, output_dir);
  }
  if (*verify) {
    return pdae::cmd_verify(config, output_dir);
  }
  return pdae::cmd_converge(config, output_dir);
}
