#pragma once

#include <string>
#include <vector>

#include "qedcs_app/config.hpp"
#include "qedcs_app/results.hpp"

namespace qedcs::app {

// Each experiment reads its own section of the config and returns a table
// of checked metrics, plot-ready series and a nested JSON report.
ResultTable run_verify_identities(const ExperimentConfig& c);
ResultTable run_verify_bounds(const ExperimentConfig& c);
ResultTable run_oracle_crosscheck(const ExperimentConfig& c);
ResultTable run_dichotomy(const ExperimentConfig& c);
ResultTable run_representative(const ExperimentConfig& c);
ResultTable run_flow(const ExperimentConfig& c);

// The 20-point validation set: rows of w = re + i im.
std::vector<CFourVector> read_wset(const std::string& path);

// Subcommand names in a fixed order, and dispatch by name.
const std::vector<std::string>& command_names();
ResultTable run_command(const std::string& name, const ExperimentConfig& c);

}  // namespace qedcs::app
