#pragma once

#include <iosfwd>

namespace filco::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitUsage = 2;

// Entry point for the `filco` tool: subcommands filter, silver, eval,
// stats and compare. Returns 0 on success, 1 on data errors, 2 on usage
// errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace filco::cli
