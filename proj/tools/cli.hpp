#pragma once

#include <iosfwd>

namespace luandri::cli {

/// Entry point for `luandri index ...` and `luandri search ...`.
/// Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace luandri::cli
