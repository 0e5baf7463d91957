#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace condgreedy {

/// The `condgreedy` command line. args excludes the program name. Returns
/// 0 on success, 1 when a scenario fails, 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace condgreedy
