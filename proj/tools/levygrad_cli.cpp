#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo gradients for SDEs driven by subordinated Brownian motion"};
  app.require_subcommand(1);
  std::string config_path;
  for (const auto& info : levygrad::cli::commands()) {
    CLI::App* sub = app.add_subcommand(info.name, info.summary);
    sub->add_option("config", config_path, "JSON config file")->required();
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const levygrad::cli::Config config = levygrad::cli::load_config(config_path);
    const levygrad::cli::CommandOutcome outcome = levygrad::cli::run_command(name, config);
    levygrad::cli::write_report(outcome, config);
    std::cerr << name << ": " << (outcome.pass ? "pass" : "FAIL") << "\n";
    return outcome.pass ? 0 : 2;
  } catch (const levygrad::cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
  }
  return 1;
}
