#include "flowgraph/energy_system.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "flowgraph/error.hpp"
#include "flowgraph/lowering.hpp"

namespace flowgraph {

std::string_view to_string(AssetKind kind) noexcept {
  switch (kind) {
    case AssetKind::Producer: return "producer";
    case AssetKind::Consumer: return "consumer";
    case AssetKind::Storage: return "storage";
    case AssetKind::Conversion: return "conversion";
    case AssetKind::Hub: return "hub";
    case AssetKind::Transport: return "transport";
  }
  return "unknown";
}

std::optional<AssetKind> parse_asset_kind(std::string_view text) noexcept {
  for (auto kind : {AssetKind::Producer, AssetKind::Consumer, AssetKind::Storage,
                    AssetKind::Conversion, AssetKind::Hub, AssetKind::Transport}) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

namespace {

double cyclic(const std::vector<double>& profile, int t, double fallback) {
  if (profile.empty()) return fallback;
  const auto n = static_cast<long>(profile.size());
  return profile[static_cast<std::size_t>(((t - 1) % n + n) % n)];
}

bool valid_id(std::string_view id) {
  if (id.empty() || id.size() > 64) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-' || c == '.';
  });
}

bool node_like(AssetKind kind) {
  return kind == AssetKind::Hub || kind == AssetKind::Transport || kind == AssetKind::Consumer;
}

std::vector<std::string> arc_violations(const FlowArc& arc, const EnergySystem& system) {
  std::vector<std::string> out;
  if (arc.max_fwd_mw && !(std::isfinite(*arc.max_fwd_mw) && *arc.max_fwd_mw >= 0.0))
    out.push_back("max_fwd_mw must be a nonnegative finite number");
  if (!(arc.max_bwd_mw >= 0.0)) out.push_back("max_bwd_mw must be nonnegative");
  if (!std::isfinite(arc.op_cost)) out.push_back("op_cost must be finite");
  if (arc.max_bwd_mw > 0.0 && !arc.two_sided)
    out.push_back("max_bwd_mw > 0 requires a two-sided arc");
  if (arc.dc) {
    if (!(arc.dc->reactance_pu > 0.0 && std::isfinite(arc.dc->reactance_pu)))
      out.push_back("reactance_pu must be positive");
    if (!(arc.dc->s_base_mva > 0.0 && std::isfinite(arc.dc->s_base_mva)))
      out.push_back("s_base_mva must be positive");
  }
  if (arc.two_sided) {
    const Asset* from = system.find_asset(arc.from);
    const Asset* to = system.find_asset(arc.to);
    const bool endpoints_ok = from && to && node_like(from->kind) && node_like(to->kind);
    if (!arc.dc && !endpoints_ok)
      out.push_back("two-sided flows need node-like endpoints or DC parameters");
    if (arc.op_cost != 0.0) out.push_back("two-sided flows cannot carry an operating cost");
  }
  return out;
}

std::string arc_name(const FlowArc& arc) { return "(" + arc.from + "," + arc.to + ")"; }

}  // namespace

double Asset::demand(int t) const { return cyclic(demand_profile, t, 0.0); }

double Asset::availability(int t) const { return cyclic(availability_profile, t, 1.0); }

double Asset::max_availability() const {
  if (availability_profile.empty()) return 1.0;
  return *std::max_element(availability_profile.begin(), availability_profile.end());
}

bool HubAnnotation::has_port(std::string_view asset, PortDirection direction) const {
  return std::any_of(member_ports.begin(), member_ports.end(), [&](const HubPort& p) {
    return p.asset == asset && p.direction == direction;
  });
}

bool HubAnnotation::has_member(std::string_view asset) const {
  return std::any_of(member_ports.begin(), member_ports.end(),
                     [&](const HubPort& p) { return p.asset == asset; });
}

bool HubAnnotation::forbids(std::string_view source, std::string_view sink) const {
  return std::any_of(forbidden_routes.begin(), forbidden_routes.end(),
                     [&](const ForbiddenRoute& r) { return r.source == source && r.sink == sink; });
}

const Asset* EnergySystem::find_asset(std::string_view id) const {
  auto it = asset_index_.find(id);
  return it == asset_index_.end() ? nullptr : &assets_[it->second];
}

Asset* EnergySystem::find_asset(std::string_view id) {
  auto it = asset_index_.find(id);
  return it == asset_index_.end() ? nullptr : &assets_[it->second];
}

const FlowArc* EnergySystem::find_arc(std::string_view from, std::string_view to) const {
  for (const auto& arc : arcs_)
    if (arc.from == from && arc.to == to) return &arc;
  return nullptr;
}

const HubAnnotation* EnergySystem::find_hub(std::string_view id) const {
  for (const auto& hub : hubs_)
    if (hub.id == id) return &hub;
  return nullptr;
}

std::vector<const FlowArc*> EnergySystem::arcs_into(std::string_view id) const {
  std::vector<const FlowArc*> out;
  for (const auto& arc : arcs_)
    if (arc.to == id) out.push_back(&arc);
  return out;
}

std::vector<const FlowArc*> EnergySystem::arcs_out_of(std::string_view id) const {
  std::vector<const FlowArc*> out;
  for (const auto& arc : arcs_)
    if (arc.from == id) out.push_back(&arc);
  return out;
}

void EnergySystem::push_asset(Asset asset) {
  asset_index_.emplace(asset.id, assets_.size());
  assets_.push_back(std::move(asset));
}

void EnergySystem::push_arc(FlowArc arc) { arcs_.push_back(std::move(arc)); }

void EnergySystem::push_hub(HubAnnotation hub) { hubs_.push_back(std::move(hub)); }

void EnergySystem::erase_asset(std::string_view id) {
  std::erase_if(assets_, [&](const Asset& a) { return a.id == id; });
  std::erase_if(arcs_, [&](const FlowArc& a) { return a.from == id || a.to == id; });
  for (auto& hub : hubs_) {
    std::erase_if(hub.member_ports, [&](const HubPort& p) { return p.asset == id; });
    std::erase_if(hub.forbidden_routes,
                  [&](const ForbiddenRoute& r) { return r.source == id || r.sink == id; });
  }
  reindex();
}

void EnergySystem::reindex() {
  asset_index_.clear();
  for (std::size_t i = 0; i < assets_.size(); ++i) asset_index_.emplace(assets_[i].id, i);
}

std::vector<std::string> asset_violations(const Asset& a) {
  std::vector<std::string> out;
  auto nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (!valid_id(a.id)) out.push_back("id must be 1-64 characters from [A-Za-z0-9_.-]");
  if (!nonneg(a.capacity_mw)) out.push_back("capacity_mw must be nonnegative");
  if (!nonneg(a.min_capacity_mw)) out.push_back("min_capacity_mw must be nonnegative");
  if (a.min_capacity_mw > a.capacity_mw) out.push_back("min_capacity_mw exceeds capacity_mw");
  if (a.initial_units < 0) out.push_back("initial_units must be nonnegative");
  if (a.invest_limit < 0) out.push_back("invest_limit must be nonnegative");
  if (!nonneg(a.invest_cost)) out.push_back("invest_cost must be nonnegative");
  if (!(a.eta_in > 0.0 && a.eta_in <= 1.0)) out.push_back("eta_in must lie in (0,1]");
  if (!(a.eta_out > 0.0 && a.eta_out <= 1.0)) out.push_back("eta_out must lie in (0,1]");

  const bool storage = a.kind == AssetKind::Storage;
  if (storage && !a.storage_capacity_mwh) out.push_back("storage asset needs storage_capacity_mwh");
  if (!storage && (a.storage_capacity_mwh || a.initial_storage_mwh))
    out.push_back("storage fields are only allowed on storage assets");
  if (a.storage_capacity_mwh && !nonneg(*a.storage_capacity_mwh))
    out.push_back("storage_capacity_mwh must be nonnegative");
  if (a.initial_storage_mwh) {
    if (!nonneg(*a.initial_storage_mwh)) out.push_back("initial_storage_mwh must be nonnegative");
    if (a.storage_capacity_mwh && *a.initial_storage_mwh > *a.storage_capacity_mwh)
      out.push_back("initial_storage_mwh exceeds storage_capacity_mwh");
  }

  const bool consumer = a.kind == AssetKind::Consumer;
  if (consumer && a.demand_profile.empty()) out.push_back("consumer needs a demand profile");
  if (!consumer && !a.demand_profile.empty())
    out.push_back("demand profile is only allowed on consumers");
  if (!std::all_of(a.demand_profile.begin(), a.demand_profile.end(), nonneg))
    out.push_back("demand values must be nonnegative");

  if (a.kind != AssetKind::Producer && !a.availability_profile.empty())
    out.push_back("availability profile is only allowed on producers");
  if (!std::all_of(a.availability_profile.begin(), a.availability_profile.end(),
                   [](double v) { return v >= 0.0 && v <= 1.0; }))
    out.push_back("availability values must lie in [0,1]");
  return out;
}

EnergySystem add_asset(EnergySystem system, Asset asset) {
  if (system.find_asset(asset.id)) throw Error(ErrorCode::DuplicateId, "asset '" + asset.id + "' already exists");
  auto violations = asset_violations(asset);
  if (!violations.empty()) throw Error(ErrorCode::InvariantViolation, asset.id + ": " + violations.front());
  system.push_asset(std::move(asset));
  return system;
}

EnergySystem add_flow(EnergySystem system, FlowArc arc) {
  if (arc.from == arc.to) throw Error(ErrorCode::SelfLoop, arc_name(arc));
  for (const auto* id : {&arc.from, &arc.to})
    if (!system.find_asset(*id)) throw Error(ErrorCode::UnknownAsset, "'" + *id + "' in " + arc_name(arc));
  if (system.find_arc(arc.from, arc.to)) throw Error(ErrorCode::DuplicateArc, arc_name(arc));
  auto violations = arc_violations(arc, system);
  if (!violations.empty()) throw Error(ErrorCode::InvariantViolation, arc_name(arc) + ": " + violations.front());
  system.push_arc(std::move(arc));
  return system;
}

EnergySystem add_hub(EnergySystem system, HubAnnotation hub) {
  if (system.find_hub(hub.id)) throw Error(ErrorCode::DuplicateId, "hub '" + hub.id + "' already exists");
  for (const auto& port : hub.member_ports)
    if (!system.find_asset(port.asset))
      throw Error(ErrorCode::UnknownAsset, "'" + port.asset + "' in hub " + hub.id);
  for (const auto& route : hub.forbidden_routes)
    if (!hub.has_member(route.source) || !hub.has_member(route.sink))
      throw Error(ErrorCode::InvariantViolation,
                  "forbidden route (" + route.source + "," + route.sink + ") in hub " + hub.id +
                      " names a non-member");
  system.push_hub(std::move(hub));
  return system;
}

EnergySystem remove_asset(EnergySystem system, std::string_view id) {
  if (!system.find_asset(id)) throw Error(ErrorCode::UnknownAsset, std::string(id));
  system.erase_asset(id);
  return system;
}

namespace {

std::vector<Diagnostic> check(const EnergySystem& system, bool with_lowering) {
  std::vector<Diagnostic> out;
  auto error = [&](std::string entity, std::string message) {
    out.push_back({Severity::Error, std::move(entity), std::move(message)});
  };
  auto warning = [&](std::string entity, std::string message) {
    out.push_back({Severity::Warning, std::move(entity), std::move(message)});
  };

  if (system.horizon() < 1) error("system", "horizon must be a positive number of timesteps");

  std::set<std::string, std::less<>> seen;
  for (const auto& asset : system.assets()) {
    if (!seen.insert(asset.id).second) error(asset.id, "duplicate asset id");
    for (auto& message : asset_violations(asset)) error(asset.id, std::move(message));
    if (!system.lowered() && (asset.kind == AssetKind::Hub || asset.kind == AssetKind::Transport))
      error(asset.id, "hub and transport assets only appear in lowered systems");
    auto check_length = [&](const std::vector<double>& profile, const char* what) {
      if (!profile.empty() && static_cast<int>(profile.size()) != system.horizon())
        warning(asset.id, std::string(what) + " profile length " + std::to_string(profile.size()) +
                              " differs from horizon " + std::to_string(system.horizon()) +
                              "; values repeat cyclically");
    };
    check_length(asset.demand_profile, "demand");
    check_length(asset.availability_profile, "availability");
  }

  std::set<std::pair<std::string, std::string>> pairs;
  bool arcs_ok = true;
  for (const auto& arc : system.arcs()) {
    const auto name = arc_name(arc);
    if (arc.from == arc.to) {
      error(name, "self-loop");
      arcs_ok = false;
    }
    for (const auto* id : {&arc.from, &arc.to}) {
      if (!system.find_asset(*id)) {
        error(name, "unknown asset '" + *id + "'");
        arcs_ok = false;
      }
    }
    if (!pairs.emplace(arc.from, arc.to).second) {
      error(name, "parallel arc");
      arcs_ok = false;
    }
    for (auto& message : arc_violations(arc, system)) error(name, std::move(message));
  }

  for (const auto& asset : system.assets()) {
    if (asset.kind == AssetKind::Consumer && system.arcs_into(asset.id).empty())
      error(asset.id, "consumer has no incoming arc");
    if (asset.kind == AssetKind::Producer && system.arcs_out_of(asset.id).empty())
      error(asset.id, "producer has no outgoing arc");
  }

  bool hubs_ok = true;
  std::set<std::string, std::less<>> hub_ids;
  for (const auto& hub : system.hubs()) {
    if (!hub_ids.insert(hub.id).second || system.find_asset(hub.id)) {
      error(hub.id, "hub id collides with another hub or asset");
      hubs_ok = false;
    }
    for (const auto& port : hub.member_ports) {
      if (!system.find_asset(port.asset)) {
        error(hub.id, "member port references missing asset '" + port.asset + "'");
        hubs_ok = false;
      }
    }
    for (const auto& route : hub.forbidden_routes) {
      if (!hub.has_member(route.source) || !hub.has_member(route.sink)) {
        error(hub.id, "forbidden route (" + route.source + "," + route.sink + ") names a non-member");
        hubs_ok = false;
      }
    }
  }

  if (with_lowering && !system.lowered() && arcs_ok && hubs_ok) {
    for (auto& d : lowering_diagnostics(system)) out.push_back(std::move(d));
  }
  return out;
}

}  // namespace

std::vector<Diagnostic> validate(const EnergySystem& system) { return check(system, true); }

std::vector<Diagnostic> validate_structure(const EnergySystem& system) { return check(system, false); }

std::size_t error_count(const std::vector<Diagnostic>& diagnostics) {
  return static_cast<std::size_t>(std::count_if(diagnostics.begin(), diagnostics.end(),
                                                [](const Diagnostic& d) { return d.severity == Severity::Error; }));
}

}  // namespace flowgraph
