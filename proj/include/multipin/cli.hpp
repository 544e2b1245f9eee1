#ifndef MULTIPIN_CLI_HPP_
#define MULTIPIN_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace multipin::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitFailure = 1;  // a check or acceptance threshold failed
inline constexpr int kExitUsage = 2;

/// Entry point behind the multipin executable. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "1,2.5" style lists; accepts scientific notation.
std::vector<double> parse_real_list(const std::string& text);

/// Parses integer lists such as "1e4,1e5"; rejects non-integral values.
std::vector<long> parse_integer_list(const std::string& text);

}  // namespace multipin::cli

#endif  // MULTIPIN_CLI_HPP_
