#pragma once

#include <vector>

#include "ttk/report.hpp"

namespace ttk {

// Dispatches one subcommand; returns the exit code and fills the report.
// Exit codes: 0 ok/inconclusive, 1 refuted/counterexample, 2 usage or error.
int run_command(const std::vector<std::string>& argv, Report& report,
                std::string& error_stream);

}  // namespace ttk
