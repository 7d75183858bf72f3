#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flowgraph/lp_instance.hpp"
#include "flowgraph/solution.hpp"

namespace flowgraph {

enum class Pricing { Bland, DantzigWithBlandFallback };

struct SimplexOptions {
  double feas_tol = 1e-7;
  double pivot_tol = 1e-9;
  double opt_tol = 1e-9;
  std::size_t max_iterations = 0;  // 0 means 50 * (rows + columns)
  Pricing pricing = Pricing::DantzigWithBlandFallback;
  std::size_t stall_window = 1000;  // iterations without progress before Bland takes over
  std::size_t refactor_interval = 100;
};

/// Bounded-variable two-phase primal simplex on the LP as written (no
/// presolve). Integer marks are relaxed and reported in `warnings`.
/// Deterministic: equal inputs give equal iteration counts and primals.
SolveResult solve_reference(const LpInstance& instance, const SimplexOptions& options = {});

/// Names of the rows and column bounds violated by `primal` beyond `tol`
/// (absolute, scaled by max(1, |bound|)). Empty means feasible.
std::vector<std::string> check_primal(const LpInstance& instance, std::span<const double> primal, double tol);

/// How to run an external LP solver on an MPS file.
///
/// `arguments` may contain the placeholders {input}, {output}, {seed} and
/// {seed_param}; the last expands to `seed_parameter` followed by `=` and the
/// seed, or to nothing when no seed parameter is configured. The process must
/// leave a solution file (see `read_solution`) at `output`.
struct ExternalSolverSpec {
  std::string executable;
  std::vector<std::string> arguments;
  std::string seed_parameter;
  std::filesystem::path work_dir;  // empty: system temporary directory
};

/// Reads `{"executable": ..., "arguments": [...], "seed_parameter": ...}`;
/// a relative executable path is resolved against the spec file's directory.
ExternalSolverSpec load_solver_spec(const std::filesystem::path& path);

/// Writes the instance as MPS, runs the solver and parses its solution.
/// Calls are serialised process-wide. Throws SolverLaunchFailure,
/// NonzeroExit, ParseError or IoFailure.
SolveResult solve_external(const LpInstance& instance, const ExternalSolverSpec& spec, std::uint64_t seed);

}  // namespace flowgraph
