#pragma once

#include <iosfwd>

namespace hmt {

enum ExitCode : int { exit_ok = 0, exit_certification_failed = 1, exit_config_error = 2 };

/// Entry point of the hmt tool: run, mms, ladder, sweep, validate-saturation.
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace hmt
