#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flowgraph {

/// Runs the command-line interface on `args` (program name excluded).
/// Returns 0 on success, 1 on domain errors (infeasible or mismatching
/// solves, invalid cases, I/O failures) and 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flowgraph
