#pragma once

#include <ostream>

namespace coarray {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitRuntime = 2 };

/// Entry point of the coarray-lab tool. Output goes to `out`, diagnostics
/// to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace coarray
