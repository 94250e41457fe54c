#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nwdag::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

// args excludes the program name. Results go to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Column order of every CSV the subcommands emit, keyed by subcommand (with
// "bounds-apriori" and "bounds-aposteriori" for the two bounds modes).
std::vector<std::pair<std::string, std::string>> csv_schemas();

}  // namespace nwdag::cli
