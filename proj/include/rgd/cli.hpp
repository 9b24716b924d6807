#pragma once

#include <span>
#include <string>

namespace rgd {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitRuntimeError = 2;

/// Runs one subcommand. `args` excludes the program name.
int cli_main(std::span<const std::string> args);

}  // namespace rgd
