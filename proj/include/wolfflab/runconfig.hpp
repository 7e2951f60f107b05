#pragma once

#include <ostream>
#include <string>

namespace wolff {

// Parse a JSON run configuration, dispatch to the engines, write the output
// files under out_dir, and return the process exit code:
//   0 success / finite / pass
//   2 invalid configuration or inputs
//   3 regime error or divergent verdict
//   4 non-convergence, failed verification, or inconclusive verdict
// subcommand is one of wolff | solve | check | verify | constants; a
// "command" key in the config, when present, must agree with it.  Every
// failure writes one machine-readable JSON object to err.
int run_config_command(const std::string& subcommand,
                       const std::string& config_text,
                       const std::string& out_dir, bool quiet,
                       std::ostream& out, std::ostream& err);

}  // namespace wolff
