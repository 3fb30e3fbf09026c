#pragma once

#include <iosfwd>

namespace k3lab::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kUsage = 2, kIo = 3 };

/// Entry point of the k3lab command line tool.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace k3lab::cli
