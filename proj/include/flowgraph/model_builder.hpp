#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flowgraph/approach.hpp"
#include "flowgraph/energy_system.hpp"
#include "flowgraph/lp_instance.hpp"

namespace flowgraph {

struct Extensions {
  bool dc_opf = false;
  bool unit_commitment = false;
};

struct RowSpec {
  ConstraintRow row;
  std::vector<Term> terms;
};

/// Variables of one system laid out in the canonical order (role, asset or
/// arc, timestep), plus row generators for every constraint family.
///
/// The system must already be in the target form: the asset graph itself for
/// 1BB-1F, otherwise the output of `lower_to_node_form`. The `emit_*` methods
/// return the rows of one timestep for inspection; `emit_all` appends every
/// row to the instance in canonical order.
class ModelContext {
 public:
  ModelContext(const EnergySystem& system, Extensions extensions);

  const EnergySystem& system() const { return system_; }
  const LpInstance& instance() const { return lp_; }
  LpInstance take() { return std::move(lp_); }

  std::size_t flow(std::size_t arc, int t) const { return flow_base_[arc] + static_cast<std::size_t>(t - 1); }
  std::optional<std::size_t> flow(const std::string& from, const std::string& to, int t) const;
  std::optional<std::size_t> level(const std::string& asset, int t) const;
  std::optional<std::size_t> invest(const std::string& asset) const;
  std::optional<std::size_t> units_on(const std::string& asset, int t) const;
  std::optional<std::size_t> above_min(const std::string& asset, int t) const;
  std::optional<std::size_t> angle(const std::string& asset, int t) const;

  std::vector<RowSpec> emit_consumer_balance(int t) const;
  std::vector<RowSpec> emit_storage_balance(int t) const;
  std::vector<RowSpec> emit_conversion_balance(int t) const;
  /// Capacity (outflow), charging (inflow) and storage-level rows.
  std::vector<RowSpec> emit_capacity_rows(int t) const;
  std::vector<RowSpec> emit_flow_bounds(int t) const;
  std::vector<RowSpec> emit_node_balance(int t) const;
  std::vector<RowSpec> emit_dc_opf(int t) const;
  std::vector<RowSpec> emit_unit_commitment(int t) const;

  void emit_all();

 private:
  template <class Sink>
  void generate(RowFamily family, std::size_t entity, int t, Sink&& sink) const;
  std::vector<RowSpec> collect(std::initializer_list<RowFamily> families, int t) const;
  std::size_t entity_count(RowFamily family) const;

  const EnergySystem& system_;
  Extensions ext_;
  int horizon_;
  LpInstance lp_;

  std::vector<std::size_t> arc_order_;    // arcs sorted by (from, to)
  std::vector<std::size_t> asset_order_;  // assets sorted by id
  std::vector<std::vector<std::size_t>> in_arcs_, out_arcs_;
  std::vector<std::ptrdiff_t> reverse_arc_;
  std::vector<std::size_t> flow_base_;
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> level_base_, invest_, units_base_, above_base_, angle_base_;
  std::vector<std::size_t> dc_arcs_;
  std::vector<std::pair<std::size_t, std::size_t>> dc_ends_;
};

/// The asset graph itself for 1BB-1F, otherwise its node form.
EnergySystem prepare_system(const EnergySystem& system, Approach approach);

/// Builds the LP of `system` under `approach`.
///
/// Throws InvariantViolation when validation reports errors,
/// MissingHubAnnotation when the node form is undefined,
/// UnsupportedCombination for DC power flow on four-flow connections and
/// MissingAngleAsset when a DC flow touches an asset without an angle.
LpInstance build_model(const EnergySystem& system, Approach approach, Extensions extensions = {});

}  // namespace flowgraph
