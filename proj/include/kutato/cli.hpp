#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kutato {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFile = 2;
inline constexpr int kExitValidation = 3;

// Runs `kutato <command> ...`; args excludes the program name.
// Commands: learn, sample, entropy, compare, describe.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Decimal product of the arities, exact for any size.
std::string joint_space_size(const std::vector<std::size_t>& arities);

}  // namespace kutato
