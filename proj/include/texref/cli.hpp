#pragma once

#include <iosfwd>

namespace texref::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kUsage = 2,         // unknown flag, bad flag value
    kMissingFile = 3,   // unreadable/unwritable path
    kBadIndex = 4,      // corrupt, truncated or incompatible index
    kBadData = 5,       // undecodable image, empty dataset, degenerate evaluation
};

/// Entry point behind the `texref` binary: index | query | evaluate | sweep.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace texref::cli
