#pragma once

#include <string>
#include <vector>

namespace qwcage {

/// Runs one CLI invocation; args excludes the program name. Returns the
/// process exit code (0 on success).
int run_cli(const std::vector<std::string>& args);

int cli_main(int argc, char** argv);

}  // namespace qwcage
