#pragma once

#include <iosfwd>

namespace jostlab::cli {

// Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace jostlab::cli
