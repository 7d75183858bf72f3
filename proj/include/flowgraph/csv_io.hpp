#pragma once

#include <filesystem>

#include "flowgraph/energy_system.hpp"

namespace flowgraph {

/// CSV bundle of an asset graph: assets.csv, flows.csv, hubs.csv,
/// forbidden.csv and profiles.csv in one directory.
///
/// Every file starts with a header row; columns are matched by name, so their
/// order is free. An empty cell means "absent": an unbounded forward
/// capacity, no backward direction, no DC parameters. A flow with a
/// `max_bwd_mw` cell (zero or `inf` included) is two-sided. Profile rows map
/// to the demand of consumers and the availability of producers; the horizon
/// is the largest timestep present (1 without profiles).

/// Writes the bundle, creating the directory if needed. Output is
/// byte-identical for equal systems. Throws IoFailure.
void write_case_csv(const EnergySystem& system, const std::filesystem::path& dir);

/// Reads a bundle without checking domain invariants (run `validate` on the
/// result). Throws IoFailure for missing files and ParseError for malformed
/// content, naming file and line.
EnergySystem read_case_csv(const std::filesystem::path& dir);

}  // namespace flowgraph
