#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rollergrasp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitOutcome = 1;  // infeasible window, jam, failed simulation step
inline constexpr int kExitInput = 2;    // malformed arguments or files

// `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rollergrasp
