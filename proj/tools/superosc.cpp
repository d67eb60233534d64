#include <iostream>

#include <CLI11.hpp>

#include "superosc/cli/commands.hpp"
#include "superosc/version.hpp"

int main(int argc, char** argv) {
  using namespace superosc::cli;
  CLI::App app{"Superoscillation evolution under the driven harmonic oscillator"};
  app.set_version_flag("--version", superosc::kVersion);
  app.require_subcommand(1);

  std::string config;
  Overrides overrides;
  std::string chosen;
  for (const std::string& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " study");
    sub->add_option("--config", config, "JSON run configuration")->required();
    sub->add_option("--out", overrides.out, "output file (default: standard output)");
    sub->add_option("--format", overrides.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--tol", overrides.tol, "tolerance for the command's pass/fail check");
    sub->callback([&chosen, name] { chosen = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  return run_cli(chosen, config, overrides, std::cout, std::cerr);
}
