#pragma once

#include <string>
#include <vector>

namespace wgame::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitEmpty = 3;

/// Entry point shared by the `wgame` binary and the tests. args[0] is the
/// program name.
int run(const std::vector<std::string>& args);

}  // namespace wgame::cli
