#pragma once

#include <iosfwd>

namespace parisian::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;    // bad scenario or flags
inline constexpr int kExitNumerical = 3;  // accuracy or singularity failure
inline constexpr int kExitVerify = 4;     // verify suite found a failing check

/// Entry point of the `parisian` tool. CSV goes to `out` unless --out names a
/// file; diagnostics and warnings go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace parisian::cli
