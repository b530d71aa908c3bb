#pragma once

#include <iosfwd>

namespace edltool {

enum ExitCode { kOk = 0, kCheckFailed = 1, kBudget = 2, kUsage = 3 };

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace edltool
