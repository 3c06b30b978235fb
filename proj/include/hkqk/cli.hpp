#pragma once

// Batch front end: `verify`, `norm`, `sweep`, `decompose`.
//
// Exit codes: 0 success, 1 failed check or domain error, 2 configuration error.

#include <iosfwd>
#include <vector>

namespace hkqk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

/// Runs the command line; reports go to `out` unless --out is given.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload for tests.
int run(const std::vector<const char*>& args, std::ostream& out, std::ostream& err);

}  // namespace hkqk::cli
