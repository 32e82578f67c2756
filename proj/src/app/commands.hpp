#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace totmom::app {

struct CommandOutput {
  std::string text;      // rendered CSV or JSON
  std::string out_path;  // empty means stdout
};

const std::vector<std::string>& command_names();

// Parses the configuration, applies overrides, runs the command and renders the
// result. Throws totmom::Error; configuration problems carry ErrorCode::Config.
CommandOutput run_command(const std::string& name, const std::string& config_json, const Overrides& ov = {});

}  // namespace totmom::app
