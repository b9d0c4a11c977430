#pragma once

#include <iosfwd>

namespace mwk::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;      // numerical failure or failed verification
inline constexpr int kInvalidInput = 2;
inline constexpr int kIoError = 3;

/// Name of the environment variable holding the default quadrature rel_tol.
inline constexpr const char* kRelTolEnv = "MWK_REL_TOL";

/// Runs one `mwk` command line. Results go to out, diagnostics to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mwk::cli
