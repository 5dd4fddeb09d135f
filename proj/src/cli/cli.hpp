#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace omatch::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kData = 3 };

// Runs one command line (without the program name). Reports go to `out`,
// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace omatch::cli
