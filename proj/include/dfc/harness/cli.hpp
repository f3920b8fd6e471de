#ifndef DFC_HARNESS_CLI_HPP
#define DFC_HARNESS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace dfc::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `dfc` tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dfc::harness

#endif
