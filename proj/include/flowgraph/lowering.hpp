#pragma once

#include <vector>

#include "flowgraph/approach.hpp"
#include "flowgraph/energy_system.hpp"

namespace flowgraph {

/// Rewrites an asset graph into the node-based form of `approach`.
///
/// Every hub annotation becomes a Hub asset and consumers act as balance
/// nodes. An asset-to-asset arc (s,k) is routed as entry s->A, an optional
/// link A->B between node-like vertices, and exit B->k, where A is a hub
/// holding an out-port of s and B one holding an in-port of k (a shared hub
/// is preferred). Consumer endpoints are reached through links instead of
/// plain arcs. Links take the approach's shape:
///   2BB-2F  two opposing nonnegative arcs,
///   2BB-1F  one two-sided arc,
///   3BB-4F  a Transport asset with two arcs on each side.
/// Link capacities are the summed throughput of the sources routed across
/// them, so they never bind in a solution of the original graph. A forbidden
/// route closes the source's entry into the hub.
///
/// Throws MissingHubAnnotation when an arc is hub-routed on one side only or
/// a junction is not annotated, InvariantViolation for other conditions that
/// make the rewrite inexact, and UnsupportedCombination for OneBB1F.
EnergySystem lower_to_node_form(const EnergySystem& system, Approach approach);

/// Problems that would make `lower_to_node_form` fail or change the optimum.
/// Used by `validate`.
std::vector<Diagnostic> lowering_diagnostics(const EnergySystem& system);

}  // namespace flowgraph
