#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "flowgraph/lp_instance.hpp"

namespace flowgraph {

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit };

std::string_view to_string(SolveStatus status) noexcept;

struct SolveResult {
  SolveStatus status = SolveStatus::Optimal;
  double objective = 0.0;
  std::vector<double> primal;  // one value per column; empty unless Optimal
  std::size_t iterations = 0;
  double wall_time_s = 0.0;
  std::vector<std::string> warnings;
};

/// Solution file: `status <optimal|infeasible|unbounded>`, `obj <real>`, then
/// one `<column name> <value>` line per column. Columns missing from the file
/// are zero. Throws ParseError or UnknownVariableName.
SolveResult read_solution(std::istream& in, const LpInstance& instance);
SolveResult read_solution(const std::filesystem::path& path, const LpInstance& instance);

void write_solution(const SolveResult& result, const LpInstance& instance, std::ostream& out);

}  // namespace flowgraph
