#ifndef EXK_CLI_HPP
#define EXK_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace exk {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes: 0 success, 2 bad input, 3 certified negative, 4 undetermined
// or aborted. Reports are JSON run records on `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace exk

#endif
