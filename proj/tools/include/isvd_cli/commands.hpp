// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>

namespace isvd::cli {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyFailure = 1;
inline constexpr int kExitInputError = 2;

/// Entry point shared by the executable and the tests.
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace isvd::cli
