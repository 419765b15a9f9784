#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace riskbound::cli {

enum ExitCode { kOk = 0, kUsage = 2, kDomain = 3, kVerification = 4 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace riskbound::cli
