#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fracdiff::cli {

// Exit codes: 0 success, 2 validation or usage error, 3 I/O or malformed input file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fracdiff::cli
