#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace levygrad::cli {

struct CommandOutcome {
  nlohmann::json report;
  bool pass = false;
};

struct CommandInfo {
  std::string name;
  std::string summary;
};

const std::vector<CommandInfo>& commands();

/// Runs one subcommand. Sample CSVs are written here; the report is not.
CommandOutcome run_command(const std::string& name, const Config& config);

/// Writes the report to config "output", or to stdout when unset.
void write_report(const CommandOutcome& outcome, const Config& config);

}  // namespace levygrad::cli
