#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "flowgraph/lp_instance.hpp"

namespace flowgraph {

/// Free-format MPS: NAME, ROWS (objective row OBJ), COLUMNS with
/// INTORG/INTEND markers around integer columns, RHS, RANGES, BOUNDS, ENDATA.
/// Columns and rows keep the instance order, so the output is deterministic.
/// A column that appears in no row and has zero cost is still declared with
/// an explicit `OBJ 0` entry.
void write_mps(const LpInstance& instance, std::ostream& out);

/// Throws IoFailure when the file cannot be written.
void write_mps(const LpInstance& instance, const std::filesystem::path& path);

/// Reads free-format MPS as produced by `write_mps`. Column and row names
/// must be in the canonical `role[...][t]` / `family[...][t]` form so the
/// variable and row metadata can be restored; anything else is a ParseError.
/// Objective offsets (RHS on OBJ) are rejected.
LpInstance read_mps(std::istream& in);

/// Throws IoFailure when the file cannot be opened.
LpInstance read_mps(const std::filesystem::path& path);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace flowgraph
