#include "flowgraph/model_builder.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "flowgraph/error.hpp"
#include "flowgraph/lowering.hpp"

namespace flowgraph {

namespace {

bool has_outflow_limit(AssetKind kind) {
  return kind == AssetKind::Producer || kind == AssetKind::Storage || kind == AssetKind::Conversion;
}

std::string arc_entity(const FlowArc& arc) { return arc.from + "," + arc.to; }

}  // namespace

ModelContext::ModelContext(const EnergySystem& system, Extensions extensions)
    : system_(system), ext_(extensions), horizon_(system.horizon()) {
  const auto& assets = system.assets();
  const auto& arcs = system.arcs();
  const std::size_t T = static_cast<std::size_t>(horizon_);

  asset_order_.resize(assets.size());
  std::iota(asset_order_.begin(), asset_order_.end(), std::size_t{0});
  std::sort(asset_order_.begin(), asset_order_.end(),
            [&](std::size_t a, std::size_t b) { return assets[a].id < assets[b].id; });
  arc_order_.resize(arcs.size());
  std::iota(arc_order_.begin(), arc_order_.end(), std::size_t{0});
  std::sort(arc_order_.begin(), arc_order_.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(arcs[a].from, arcs[a].to) < std::tie(arcs[b].from, arcs[b].to);
  });

  std::map<std::string_view, std::size_t> asset_pos;
  for (std::size_t i = 0; i < assets.size(); ++i) asset_pos.emplace(assets[i].id, i);
  std::map<std::pair<std::string_view, std::string_view>, std::size_t> arc_pos;
  in_arcs_.assign(assets.size(), {});
  out_arcs_.assign(assets.size(), {});
  for (std::size_t k : arc_order_) {
    auto from = asset_pos.find(arcs[k].from);
    auto to = asset_pos.find(arcs[k].to);
    if (from == asset_pos.end() || to == asset_pos.end())
      throw Error(ErrorCode::UnknownAsset, "arc (" + arcs[k].from + "," + arcs[k].to + ")");
    out_arcs_[from->second].push_back(k);
    in_arcs_[to->second].push_back(k);
    arc_pos.emplace(std::pair<std::string_view, std::string_view>(arcs[k].from, arcs[k].to), k);
  }
  reverse_arc_.assign(arcs.size(), -1);
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    auto it = arc_pos.find({arcs[k].to, arcs[k].from});
    if (it != arc_pos.end()) reverse_arc_[k] = static_cast<std::ptrdiff_t>(it->second);
  }

  // Variables, role-major.
  flow_base_.assign(arcs.size(), kNone);
  for (std::size_t k : arc_order_) {
    const FlowArc& arc = arcs[k];
    flow_base_[k] = lp_.num_vars();
    for (std::size_t t = 1; t <= T; ++t) {
      VariableRef v{VarRole::Flow, arc.from, arc.to, static_cast<int>(t), arc.two_sided ? -kInfinity : 0.0,
                    kInfinity, false};
      lp_.add_variable(std::move(v), arc.op_cost);
    }
  }
  level_base_.assign(assets.size(), kNone);
  for (std::size_t a : asset_order_) {
    const Asset& asset = assets[a];
    if (asset.kind != AssetKind::Storage) continue;
    level_base_[a] = lp_.num_vars();
    const double cap = asset.storage_capacity_mwh.value_or(0.0);
    for (std::size_t t = 1; t <= T; ++t)
      lp_.add_variable(VariableRef{VarRole::StorageLevel, asset.id, {}, static_cast<int>(t), 0.0, cap, false});
  }
  invest_.assign(assets.size(), kNone);
  for (std::size_t a : asset_order_) {
    const Asset& asset = assets[a];
    if (!asset.investable) continue;
    invest_[a] = lp_.add_variable(
        VariableRef{VarRole::Invest, asset.id, {}, 0, 0.0, static_cast<double>(asset.invest_limit), false},
        asset.invest_cost);
  }
  units_base_.assign(assets.size(), kNone);
  above_base_.assign(assets.size(), kNone);
  if (ext_.unit_commitment) {
    for (std::size_t a : asset_order_) {
      if (!assets[a].uc_enabled) continue;
      units_base_[a] = lp_.num_vars();
      for (std::size_t t = 1; t <= T; ++t)
        lp_.add_variable(VariableRef{VarRole::UnitsOn, assets[a].id, {}, static_cast<int>(t), 0.0, kInfinity, true});
    }
    for (std::size_t a : asset_order_) {
      if (!assets[a].uc_enabled) continue;
      above_base_[a] = lp_.num_vars();
      for (std::size_t t = 1; t <= T; ++t)
        lp_.add_variable(
            VariableRef{VarRole::FlowAboveMin, assets[a].id, {}, static_cast<int>(t), 0.0, kInfinity, false});
    }
  }
  angle_base_.assign(assets.size(), kNone);
  if (ext_.dc_opf) {
    for (std::size_t k : arc_order_)
      if (arcs[k].dc) dc_arcs_.push_back(k);

    // One reference angle per connected component of the DC network.
    std::vector<std::size_t> parent(assets.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::size_t k : dc_arcs_) {
      const std::size_t u = find(asset_pos.at(arcs[k].from));
      const std::size_t w = find(asset_pos.at(arcs[k].to));
      if (u != w) parent[std::max(u, w)] = std::min(u, w);
    }
    std::map<std::size_t, std::size_t> reference;  // component root -> asset
    for (std::size_t a : asset_order_)
      if (assets[a].voltage_angle_enabled) reference.try_emplace(find(a), a);

    for (std::size_t a : asset_order_) {
      if (!assets[a].voltage_angle_enabled) continue;
      angle_base_[a] = lp_.num_vars();
      const bool fixed = reference.at(find(a)) == a;
      for (std::size_t t = 1; t <= T; ++t)
        lp_.add_variable(VariableRef{VarRole::VoltageAngle, assets[a].id, {}, static_cast<int>(t),
                                     fixed ? 0.0 : -kInfinity, fixed ? 0.0 : kInfinity, false});
    }
    for (std::size_t k : dc_arcs_) {
      dc_ends_.emplace_back(asset_pos.at(arcs[k].from), asset_pos.at(arcs[k].to));
      for (const auto* id : {&arcs[k].from, &arcs[k].to})
        if (angle_base_[asset_pos.at(*id)] == kNone)
          throw Error(ErrorCode::MissingAngleAsset,
                      "DC flow (" + arcs[k].from + "," + arcs[k].to + ") needs a voltage angle on '" + *id + "'");
    }
  }
}

std::optional<std::size_t> ModelContext::flow(const std::string& from, const std::string& to, int t) const {
  const auto& arcs = system_.arcs();
  for (std::size_t k = 0; k < arcs.size(); ++k)
    if (arcs[k].from == from && arcs[k].to == to) return flow(k, t);
  return std::nullopt;
}

namespace {
std::optional<std::size_t> lookup(const EnergySystem& s, const std::vector<std::size_t>& base,
                                  const std::string& id, int t) {
  const auto& assets = s.assets();
  for (std::size_t a = 0; a < assets.size(); ++a) {
    if (assets[a].id != id) continue;
    if (base[a] == static_cast<std::size_t>(-1)) return std::nullopt;
    return base[a] + static_cast<std::size_t>(t > 0 ? t - 1 : 0);
  }
  return std::nullopt;
}
}  // namespace

std::optional<std::size_t> ModelContext::level(const std::string& asset, int t) const {
  return lookup(system_, level_base_, asset, t);
}
std::optional<std::size_t> ModelContext::invest(const std::string& asset) const {
  return lookup(system_, invest_, asset, 0);
}
std::optional<std::size_t> ModelContext::units_on(const std::string& asset, int t) const {
  return lookup(system_, units_base_, asset, t);
}
std::optional<std::size_t> ModelContext::above_min(const std::string& asset, int t) const {
  return lookup(system_, above_base_, asset, t);
}
std::optional<std::size_t> ModelContext::angle(const std::string& asset, int t) const {
  return lookup(system_, angle_base_, asset, t);
}

std::size_t ModelContext::entity_count(RowFamily family) const {
  switch (family) {
    case RowFamily::FlowBound: return arc_order_.size();
    case RowFamily::DcAngle: return dc_arcs_.size();
    case RowFamily::InvestLimit: return 0;
    default: return asset_order_.size();
  }
}

template <class Sink>
void ModelContext::generate(RowFamily family, std::size_t entity, int t, Sink&& sink) const {
  const auto& assets = system_.assets();
  const auto& arcs = system_.arcs();
  Term buffer[64];
  std::vector<Term> spill;
  std::size_t n = 0;
  auto push = [&](std::size_t var, double coef) {
    if (n < 64) {
      buffer[n++] = {var, coef};
    } else {
      if (spill.empty()) spill.assign(buffer, buffer + 64);
      spill.push_back({var, coef});
      ++n;
    }
  };
  auto emit = [&](std::string entity_name, Sense sense, double rhs, double range_lo = 0.0) {
    ConstraintRow row;
    row.family = family;
    row.entity = std::move(entity_name);
    row.timestep = t;
    row.sense = sense;
    row.rhs = rhs;
    row.range_lo = range_lo;
    sink(std::move(row), n <= 64 ? std::span<const Term>(buffer, n) : std::span<const Term>(spill));
  };

  if (family == RowFamily::FlowBound) {
    const std::size_t k = arc_order_[entity];
    const FlowArc& arc = arcs[k];
    const bool fwd = arc.max_fwd_mw.has_value();
    if (!arc.two_sided) {
      if (!fwd) return;
      push(flow(k, t), 1.0);
      emit(arc_entity(arc), Sense::Le, *arc.max_fwd_mw);
      return;
    }
    const bool bwd = std::isfinite(arc.max_bwd_mw);
    if (!fwd && !bwd) return;
    push(flow(k, t), 1.0);
    if (fwd && bwd) {
      emit(arc_entity(arc), Sense::Range, *arc.max_fwd_mw, 0.0 - arc.max_bwd_mw);
    } else if (fwd) {
      emit(arc_entity(arc), Sense::Le, *arc.max_fwd_mw);
    } else {
      emit(arc_entity(arc), Sense::Ge, 0.0 - arc.max_bwd_mw);
    }
    return;
  }

  if (family == RowFamily::DcAngle) {
    const std::size_t k = dc_arcs_[entity];
    const FlowArc& arc = arcs[k];
    const double b = arc.dc->susceptance_mw();
    push(flow(k, t), 1.0);
    const auto rev = reverse_arc_[k];
    if (rev >= 0 && !arcs[static_cast<std::size_t>(rev)].dc && !arc.two_sided)
      push(flow(static_cast<std::size_t>(rev), t), -1.0);
    push(angle_base_[dc_ends_[entity].first] + static_cast<std::size_t>(t - 1), -b);
    push(angle_base_[dc_ends_[entity].second] + static_cast<std::size_t>(t - 1), b);
    emit(arc_entity(arc), Sense::Eq, 0.0);
    return;
  }

  const std::size_t a = asset_order_[entity];
  const Asset& asset = assets[a];
  const auto& ins = in_arcs_[a];
  const auto& outs = out_arcs_[a];
  const std::size_t inv = invest_[a];
  const double avail = asset.kind == AssetKind::Producer ? asset.availability(t) : 1.0;

  switch (family) {
    case RowFamily::ConsumerBalance:
    case RowFamily::NodeBalance: {
      const bool node = asset.kind == AssetKind::Hub || asset.kind == AssetKind::Transport;
      if (family == RowFamily::ConsumerBalance ? asset.kind != AssetKind::Consumer : !node) return;
      for (std::size_t k : ins) push(flow(k, t), 1.0);
      for (std::size_t k : outs) push(flow(k, t), -1.0);
      emit(asset.id, Sense::Eq, family == RowFamily::ConsumerBalance ? asset.demand(t) : 0.0);
      return;
    }
    case RowFamily::StorageBalance: {
      if (asset.kind != AssetKind::Storage) return;
      push(level_base_[a] + static_cast<std::size_t>(t - 1), 1.0);
      if (t > 1) push(level_base_[a] + static_cast<std::size_t>(t - 2), -1.0);
      for (std::size_t k : ins) push(flow(k, t), -asset.eta_in);
      for (std::size_t k : outs) push(flow(k, t), 1.0 / asset.eta_out);
      emit(asset.id, Sense::Eq, t == 1 ? asset.initial_storage_mwh.value_or(0.0) : 0.0);
      return;
    }
    case RowFamily::ConversionBalance: {
      if (asset.kind != AssetKind::Conversion) return;
      for (std::size_t k : ins) push(flow(k, t), asset.eta_in);
      for (std::size_t k : outs) push(flow(k, t), -1.0);
      emit(asset.id, Sense::Eq, 0.0);
      return;
    }
    case RowFamily::CapacityLimit: {
      if (!has_outflow_limit(asset.kind) || outs.empty()) return;
      const double cap = asset.capacity_mw * avail;
      for (std::size_t k : outs) push(flow(k, t), 1.0);
      if (inv != kNone) push(inv, -cap);
      emit(asset.id, Sense::Le, cap * asset.initial_units);
      return;
    }
    case RowFamily::ChargingLimit: {
      if (asset.kind != AssetKind::Storage || ins.empty()) return;
      for (std::size_t k : ins) push(flow(k, t), 1.0);
      if (inv != kNone) push(inv, -asset.capacity_mw);
      emit(asset.id, Sense::Le, asset.capacity_mw * asset.initial_units);
      return;
    }
    case RowFamily::StorageCapacity: {
      if (asset.kind != AssetKind::Storage) return;
      push(level_base_[a] + static_cast<std::size_t>(t - 1), 1.0);
      emit(asset.id, Sense::Le, asset.storage_capacity_mwh.value_or(0.0));
      return;
    }
    case RowFamily::UcMinOper: {
      if (units_base_[a] == kNone) return;
      push(above_base_[a] + static_cast<std::size_t>(t - 1), 1.0);
      for (std::size_t k : outs) push(flow(k, t), -1.0);
      push(units_base_[a] + static_cast<std::size_t>(t - 1), asset.min_capacity_mw);
      emit(asset.id, Sense::Eq, 0.0);
      return;
    }
    case RowFamily::UcLimit: {
      if (units_base_[a] == kNone) return;
      push(units_base_[a] + static_cast<std::size_t>(t - 1), 1.0);
      if (inv != kNone) push(inv, -1.0);
      emit(asset.id, Sense::Le, static_cast<double>(asset.initial_units));
      return;
    }
    case RowFamily::UcMaxAbove: {
      if (units_base_[a] == kNone) return;
      push(above_base_[a] + static_cast<std::size_t>(t - 1), 1.0);
      push(units_base_[a] + static_cast<std::size_t>(t - 1), -(asset.capacity_mw - asset.min_capacity_mw));
      emit(asset.id, Sense::Le, 0.0);
      return;
    }
    default: return;
  }
}

std::vector<RowSpec> ModelContext::collect(std::initializer_list<RowFamily> families, int t) const {
  std::vector<RowSpec> out;
  for (RowFamily family : families) {
    const std::size_t n = entity_count(family);
    for (std::size_t e = 0; e < n; ++e) {
      generate(family, e, t, [&](ConstraintRow&& row, std::span<const Term> terms) {
        out.push_back({std::move(row), std::vector<Term>(terms.begin(), terms.end())});
      });
    }
  }
  return out;
}

std::vector<RowSpec> ModelContext::emit_consumer_balance(int t) const {
  return collect({RowFamily::ConsumerBalance}, t);
}
std::vector<RowSpec> ModelContext::emit_storage_balance(int t) const {
  return collect({RowFamily::StorageBalance}, t);
}
std::vector<RowSpec> ModelContext::emit_conversion_balance(int t) const {
  return collect({RowFamily::ConversionBalance}, t);
}
std::vector<RowSpec> ModelContext::emit_capacity_rows(int t) const {
  return collect({RowFamily::CapacityLimit, RowFamily::ChargingLimit, RowFamily::StorageCapacity}, t);
}
std::vector<RowSpec> ModelContext::emit_flow_bounds(int t) const { return collect({RowFamily::FlowBound}, t); }
std::vector<RowSpec> ModelContext::emit_node_balance(int t) const { return collect({RowFamily::NodeBalance}, t); }
std::vector<RowSpec> ModelContext::emit_dc_opf(int t) const { return collect({RowFamily::DcAngle}, t); }
std::vector<RowSpec> ModelContext::emit_unit_commitment(int t) const {
  return collect({RowFamily::UcMinOper, RowFamily::UcLimit, RowFamily::UcMaxAbove}, t);
}

void ModelContext::emit_all() {
  constexpr RowFamily kOrder[] = {
      RowFamily::ConsumerBalance, RowFamily::StorageBalance, RowFamily::ConversionBalance,
      RowFamily::CapacityLimit,   RowFamily::ChargingLimit,  RowFamily::StorageCapacity,
      RowFamily::FlowBound,       RowFamily::InvestLimit,    RowFamily::NodeBalance,
      RowFamily::DcAngle,         RowFamily::UcMinOper,      RowFamily::UcLimit,
      RowFamily::UcMaxAbove};
  for (RowFamily family : kOrder) {
    const std::size_t n = entity_count(family);
    for (std::size_t e = 0; e < n; ++e)
      for (int t = 1; t <= horizon_; ++t)
        generate(family, e, t, [&](ConstraintRow&& row, std::span<const Term> terms) {
          lp_.add_row(std::move(row), terms);
        });
  }
}

EnergySystem prepare_system(const EnergySystem& system, Approach approach) {
  if (approach == Approach::OneBB1F) return system;
  return lower_to_node_form(system, approach);
}

LpInstance build_model(const EnergySystem& system, Approach approach, Extensions extensions) {
  for (const auto& d : validate_structure(system))
    if (d.severity == Severity::Error) throw Error(ErrorCode::InvariantViolation, d.entity + ": " + d.message);
  if (extensions.dc_opf && approach == Approach::ThreeBB4F) {
    for (const auto& arc : system.arcs())
      if (arc.dc)
        throw Error(ErrorCode::UnsupportedCombination,
                    "DC power flow on four-flow connections is not defined (arc " + arc.from + "," + arc.to + ")");
  }
  const EnergySystem prepared = prepare_system(system, approach);
  ModelContext context(prepared, extensions);
  context.emit_all();
  LpInstance lp = context.take();
  lp.name = std::string("flowgraph_") + std::string(to_string(approach));
  return lp;
}

}  // namespace flowgraph
