#pragma once

#include <iosfwd>

namespace crdu {

/// Exit codes: 0 pass, 1 property or verification failure, 2 usage or
/// parse error.
enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitUsage = 2 };

/// Entry point of the `crdu` command line tool, with injectable streams.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace crdu
