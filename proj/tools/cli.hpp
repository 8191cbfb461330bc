#pragma once

#include <iosfwd>

namespace hypertree::cli {

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kValidation = 2,
    kGuard = 3,
    kIo = 4,
};

// Runs one command line. JSON results go to `out` unless --out names a file;
// diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hypertree::cli
