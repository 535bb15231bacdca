#pragma once

#include <ostream>

namespace congest_light::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitAuditFailure = 2;
inline constexpr int kExitNontermination = 3;
inline constexpr int kExitUsage = 64;

/// Fixed leading CSV columns of `bench`; parameter columns k and eps follow.
inline constexpr const char* kBenchColumns = "n,seed,rounds,lightness,max_stretch,edges,k,eps";

/// Runs one command line; JSON/CSV goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace congest_light::cli
