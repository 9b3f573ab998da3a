#ifndef CLUSTERDIAG_CLI_HPP
#define CLUSTERDIAG_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace clusterdiag {

inline constexpr int exit_ok = 0;
inline constexpr int exit_invalid_input = 2;
inline constexpr int exit_numeric_failure = 3;

/// Entry point behind the `clusterdiag` binary. `args[0]` is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}

#endif
