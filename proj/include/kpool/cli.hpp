// Command-line front end.
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kpool::cli {

/// `args` excludes the program name. Returns the process exit code:
/// 0 success / true, 1 false / no plan / suite failure, 2 usage or input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kpool::cli
