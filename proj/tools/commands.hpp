#pragma once

#include <ostream>

namespace trngsbox::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Runs the command-line interface. Returns the process exit code: 0 on
/// success, 10 + ErrorCode for library errors, CLI11's code for usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace trngsbox::cli
