#pragma once

#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace mchl {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolations = 1;
inline constexpr int kExitError = 2;

/// Height mix written as "h:p,h:p", e.g. "1:0.8,2:0.2".
std::map<int, double> parseHeightMix(std::string_view text);

/// Mix used by `bench` and `generate` unless --heights is given.
std::map<int, double> defaultHeightMix();

/// Runs the command line; args[0] is the program name.
int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mchl
