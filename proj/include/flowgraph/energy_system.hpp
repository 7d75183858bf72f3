#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace flowgraph {

enum class AssetKind { Producer, Consumer, Storage, Conversion, Hub, Transport };

std::string_view to_string(AssetKind kind) noexcept;
std::optional<AssetKind> parse_asset_kind(std::string_view text) noexcept;

/// An energy asset: the single building block of the asset-graph description.
///
/// Field units follow the usual capacity-expansion conventions: capacities in
/// MW per unit, storage energy in MWh, investment in whole units. Profiles are
/// indexed by 0-based hour (timestep t maps to index t-1) and wrap cyclically
/// when shorter than the horizon; `scale_horizon` produces exact-length ones.
struct Asset {
  std::string id;
  AssetKind kind = AssetKind::Producer;
  double capacity_mw = 0.0;
  double min_capacity_mw = 0.0;
  int initial_units = 1;
  bool investable = false;
  int invest_limit = 0;
  double invest_cost = 0.0;
  std::optional<double> storage_capacity_mwh;
  std::optional<double> initial_storage_mwh;
  double eta_in = 1.0;
  double eta_out = 1.0;
  std::vector<double> demand_profile;        // consumers only
  std::vector<double> availability_profile;  // producers only; empty = 1.0
  bool uc_enabled = false;
  bool voltage_angle_enabled = false;

  double demand(int t) const;
  double availability(int t) const;
  double max_availability() const;
};

struct DcFlowParams {
  double reactance_pu = 1.0;
  double s_base_mva = 100.0;

  /// Flow per radian of angle difference.
  double susceptance_mw() const { return s_base_mva / reactance_pu; }
};

/// Directed flow between two assets.
///
/// A one-sided arc carries a nonnegative flow bounded by `max_fwd_mw` (absent
/// means unbounded). A two-sided arc carries a single free flow bounded by
/// [-max_bwd_mw, max_fwd_mw]; `max_bwd_mw` may be zero when the backward
/// direction exists structurally but is closed, or infinite.
struct FlowArc {
  std::string from;
  std::string to;
  std::optional<double> max_fwd_mw;
  double max_bwd_mw = 0.0;
  bool two_sided = false;
  double op_cost = 0.0;
  std::optional<DcFlowParams> dc;
};

enum class PortDirection { In, Out };

struct HubPort {
  std::string asset;
  PortDirection direction = PortDirection::In;

  friend bool operator==(const HubPort&, const HubPort&) = default;
};

struct ForbiddenRoute {
  std::string source;
  std::string sink;

  friend bool operator==(const ForbiddenRoute&, const ForbiddenRoute&) = default;
};

/// Marks a junction of assets that node-based formulations route through a
/// shared balance node.
struct HubAnnotation {
  std::string id;
  std::vector<HubPort> member_ports;
  std::vector<ForbiddenRoute> forbidden_routes;

  bool has_port(std::string_view asset, PortDirection direction) const;
  bool has_member(std::string_view asset) const;
  bool forbids(std::string_view source, std::string_view sink) const;
};

/// Directed graph of assets and flows plus hub annotations.
///
/// Assets keep insertion order; lookups go through an id index. A system is
/// `lowered` when it was produced by `lower_to_node_form` and may therefore
/// contain Hub and Transport assets.
class EnergySystem {
 public:
  EnergySystem() = default;
  explicit EnergySystem(int horizon) : horizon_(horizon) {}

  int horizon() const { return horizon_; }
  void set_horizon(int horizon) { horizon_ = horizon; }

  bool lowered() const { return lowered_; }
  void set_lowered(bool lowered) { lowered_ = lowered; }

  const std::vector<Asset>& assets() const { return assets_; }
  const std::vector<FlowArc>& arcs() const { return arcs_; }
  const std::vector<HubAnnotation>& hubs() const { return hubs_; }

  const Asset* find_asset(std::string_view id) const;
  Asset* find_asset(std::string_view id);
  const FlowArc* find_arc(std::string_view from, std::string_view to) const;
  const HubAnnotation* find_hub(std::string_view id) const;

  std::vector<const FlowArc*> arcs_into(std::string_view id) const;
  std::vector<const FlowArc*> arcs_out_of(std::string_view id) const;

  // Unchecked mutation; the checked entry points are the free functions below.
  void push_asset(Asset asset);
  void push_arc(FlowArc arc);
  void push_hub(HubAnnotation hub);
  void erase_asset(std::string_view id);
  std::vector<Asset>& mutable_assets() { return assets_; }

 private:
  void reindex();

  int horizon_ = 1;
  bool lowered_ = false;
  std::vector<Asset> assets_;
  std::vector<FlowArc> arcs_;
  std::vector<HubAnnotation> hubs_;
  std::map<std::string, std::size_t, std::less<>> asset_index_;
};

/// Returns the invariant violations of a single asset (empty when valid).
std::vector<std::string> asset_violations(const Asset& asset);

EnergySystem add_asset(EnergySystem system, Asset asset);
EnergySystem add_flow(EnergySystem system, FlowArc arc);
EnergySystem add_hub(EnergySystem system, HubAnnotation hub);

/// Removes the asset, its incident arcs and every hub port or forbidden route
/// naming it.
EnergySystem remove_asset(EnergySystem system, std::string_view id);

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string entity;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Checks every asset, arc and hub invariant plus the conditions under which
/// the node-based lowerings are defined. Systems with no Error diagnostics can
/// be lowered by every approach.
std::vector<Diagnostic> validate(const EnergySystem& system);

/// `validate` without the node-form conditions; enough for 1BB-1F builds.
std::vector<Diagnostic> validate_structure(const EnergySystem& system);

std::size_t error_count(const std::vector<Diagnostic>& diagnostics);

}  // namespace flowgraph
