#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pbna {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitResample = 3;
inline constexpr int kExitTooLarge = 4;

/// Runs `pbna <command> ...`; args excludes the program name. JSON goes to
/// out, diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pbna
