// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace famec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `famec` tool; returns the process exit code.
int cli_main(int argc, char** argv);

} // namespace famec::cli
