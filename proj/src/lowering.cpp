#include "flowgraph/lowering.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "flowgraph/error.hpp"

namespace flowgraph {

std::string_view to_string(Approach approach) noexcept {
  switch (approach) {
    case Approach::ThreeBB4F: return "3BB-4F";
    case Approach::TwoBB2F: return "2BB-2F";
    case Approach::TwoBB1F: return "2BB-1F";
    case Approach::OneBB1F: return "1BB-1F";
  }
  return "unknown";
}

std::optional<Approach> parse_approach(std::string_view text) noexcept {
  std::string upper(text);
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (auto approach : kAllApproaches)
    if (to_string(approach) == upper) return approach;
  return std::nullopt;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Key = std::pair<std::string, std::string>;

struct Issue {
  ErrorCode code;
  Diagnostic diagnostic;
};

struct Link {
  std::string x, y;  // orientation: forward is x -> y
  std::set<std::string> fwd_sources, bwd_sources;
  std::optional<double> fixed_fwd;  // set for consumer-to-consumer links
  std::optional<double> fixed_bwd;
  bool fixed = false;
  bool closed_bwd = false;
  bool closed_fwd = false;
  std::optional<DcFlowParams> dc;
};

struct Entry {
  std::optional<double> cost;
  bool closed = false;
};

struct Plan {
  std::vector<Issue> issues;
  std::vector<Diagnostic> warnings;
  std::vector<FlowArc> direct;
  std::map<Key, Entry> entries;  // (source, hub)
  std::set<Key> exits;           // (hub, sink)
  std::map<Key, Link> links;     // unordered pair, stored with min first
};

bool is_consumer(const EnergySystem& s, std::string_view id) {
  const Asset* a = s.find_asset(id);
  return a && a->kind == AssetKind::Consumer;
}

Key unordered(const std::string& a, const std::string& b) { return a < b ? Key{a, b} : Key{b, a}; }

Link& link_between(Plan& plan, const std::string& x, const std::string& y) {
  auto [it, inserted] = plan.links.try_emplace(unordered(x, y));
  if (inserted) {
    it->second.x = x;
    it->second.y = y;
  }
  return it->second;
}

// Marks `source` as travelling x -> y across the link between them.
void traverse(Plan& plan, const std::string& x, const std::string& y, const std::string& source) {
  Link& link = link_between(plan, x, y);
  (link.x == x ? link.fwd_sources : link.bwd_sources).insert(source);
}

std::vector<const HubAnnotation*> hubs_with(const EnergySystem& s, const std::string& asset,
                                            PortDirection direction) {
  std::vector<const HubAnnotation*> out;
  for (const auto& hub : s.hubs())
    if (hub.has_port(asset, direction)) out.push_back(&hub);
  return out;
}

// Upper bound on what an asset can push into the network in one timestep.
double throughput(const EnergySystem& s, const std::string& id, std::set<std::string>& visiting) {
  const Asset* a = s.find_asset(id);
  if (!a) return kInf;
  const double units = a->initial_units + (a->investable ? a->invest_limit : 0);
  switch (a->kind) {
    case AssetKind::Producer: return a->capacity_mw * a->max_availability() * units;
    case AssetKind::Storage:
    case AssetKind::Conversion: return a->capacity_mw * units;
    case AssetKind::Consumer: {
      if (!visiting.insert(id).second) return kInf;
      double total = 0.0;
      for (const auto* arc : s.arcs_into(id))
        total += arc->max_fwd_mw ? *arc->max_fwd_mw : throughput(s, arc->from, visiting);
      for (const auto* arc : s.arcs_out_of(id))
        if (arc->two_sided) total += arc->max_bwd_mw;
      visiting.erase(id);
      return total;
    }
    default: return kInf;
  }
}

std::optional<double> capacity(const EnergySystem& s, const std::set<std::string>& sources) {
  double total = 0.0;
  for (const auto& src : sources) {
    std::set<std::string> visiting;
    total += throughput(s, src, visiting);
  }
  if (!std::isfinite(total)) return std::nullopt;
  return total;
}

Plan make_plan(const EnergySystem& s) {
  Plan plan;
  auto issue = [&](ErrorCode code, std::string entity, std::string message) {
    plan.issues.push_back({code, {Severity::Error, std::move(entity), std::move(message)}});
  };
  auto name = [](const FlowArc& a) { return "(" + a.from + "," + a.to + ")"; };

  // Arcs that bypass hubs between two non-consumer assets must not sit on a
  // junction, otherwise the node form has no balance point for them.
  std::map<std::string, int> direct_out, direct_in;
  std::vector<const FlowArc*> direct_candidates;

  for (const auto& arc : s.arcs()) {
    const bool src_consumer = is_consumer(s, arc.from);
    const bool dst_consumer = is_consumer(s, arc.to);
    if (src_consumer && dst_consumer) {
      if (arc.op_cost != 0.0)
        issue(ErrorCode::InvariantViolation, name(arc), "flows between consumers cannot carry a cost when lowered");
      Link& link = link_between(plan, arc.from, arc.to);
      const bool forward = link.x == arc.from;
      std::optional<double>& fwd = forward ? link.fixed_fwd : link.fixed_bwd;
      std::optional<double>& bwd = forward ? link.fixed_bwd : link.fixed_fwd;
      if (link.fixed && fwd) issue(ErrorCode::DuplicateArc, name(arc), "link already defined in this direction");
      link.fixed = true;
      fwd = arc.max_fwd_mw ? arc.max_fwd_mw : std::optional<double>(kInf);
      if (arc.two_sided) bwd = arc.max_bwd_mw;
      if (arc.dc) link.dc = arc.dc;
      continue;
    }

    // A consumer acts as its own node; it joins a hub through any port.
    auto out_hubs = src_consumer ? std::vector<const HubAnnotation*>{} : hubs_with(s, arc.from, PortDirection::Out);
    if (src_consumer) {
      for (const auto& hub : s.hubs())
        if (hub.has_member(arc.from)) out_hubs.push_back(&hub);
    }
    auto in_hubs = hubs_with(s, arc.to, PortDirection::In);

    if (out_hubs.empty() && in_hubs.empty()) {
      if (!src_consumer && !dst_consumer) {
        ++direct_out[arc.from];
        ++direct_in[arc.to];
        direct_candidates.push_back(&arc);
      }
      plan.direct.push_back(arc);
      continue;
    }
    if (out_hubs.empty() || in_hubs.empty()) {
      issue(ErrorCode::MissingHubAnnotation, name(arc),
            std::string("arc is hub-routed on one side only; add a hub port for '") +
                (out_hubs.empty() ? arc.from : arc.to) + "'");
      continue;
    }
    if (arc.dc) {
      issue(ErrorCode::InvariantViolation, name(arc), "DC flows cannot be routed through a hub");
      continue;
    }
    if (arc.two_sided || arc.max_fwd_mw) {
      issue(ErrorCode::InvariantViolation, name(arc),
            "hub-routed arcs must be one-directional and unbounded; limit the asset instead");
      continue;
    }

    const HubAnnotation* entry_hub = out_hubs.front();
    const HubAnnotation* exit_hub = in_hubs.front();
    for (const auto* h : out_hubs) {
      if (std::find(in_hubs.begin(), in_hubs.end(), h) != in_hubs.end()) {
        entry_hub = exit_hub = h;
        break;
      }
    }

    if (src_consumer) {
      if (arc.op_cost != 0.0)
        issue(ErrorCode::InvariantViolation, name(arc), "hub-routed flows out of a consumer cannot carry a cost");
      traverse(plan, arc.from, entry_hub->id, arc.from);
    } else {
      Entry& entry = plan.entries[{arc.from, entry_hub->id}];
      if (entry.cost && *entry.cost != arc.op_cost)
        issue(ErrorCode::InvariantViolation, name(arc),
              "flows of '" + arc.from + "' through hub " + entry_hub->id + " need a common cost");
      entry.cost = arc.op_cost;
    }
    if (entry_hub != exit_hub) traverse(plan, entry_hub->id, exit_hub->id, arc.from);
    if (dst_consumer) {
      traverse(plan, exit_hub->id, arc.to, arc.from);
    } else {
      plan.exits.insert({exit_hub->id, arc.to});
    }
  }

  for (const auto* arc : direct_candidates) {
    if (direct_out[arc->from] > 1 || direct_in[arc->to] > 1)
      issue(ErrorCode::MissingHubAnnotation, name(*arc),
            "arc joins a multi-asset junction that no hub annotation covers");
  }

  // Consumers with an in-port get a link even when nothing is routed to them.
  for (const auto& hub : s.hubs())
    for (const auto& port : hub.member_ports)
      if (is_consumer(s, port.asset) && port.direction == PortDirection::In) link_between(plan, hub.id, port.asset);

  for (const auto& hub : s.hubs()) {
    for (const auto& route : hub.forbidden_routes) {
      const std::string entity = hub.id + ":(" + route.source + "," + route.sink + ")";
      if (is_consumer(s, route.source)) {
        auto it = plan.links.find(unordered(hub.id, route.source));
        if (it == plan.links.end()) continue;
        Link& link = it->second;
        auto& carried = link.x == route.source ? link.fwd_sources : link.bwd_sources;
        if (!carried.empty())
          issue(ErrorCode::InvariantViolation, entity, "forbidden route blocks flows the asset graph routes here");
        (link.x == route.source ? link.closed_fwd : link.closed_bwd) = true;
      } else {
        auto it = plan.entries.find({route.source, hub.id});
        if (it == plan.entries.end()) continue;
        issue(ErrorCode::InvariantViolation, entity, "forbidden route blocks flows the asset graph routes here");
        it->second.closed = true;
      }
    }
  }

  // Within a hub every open source reaches every sink; flag pairs the asset
  // graph does not connect.
  for (const auto& hub : s.hubs()) {
    std::vector<std::string> sources, sinks;
    for (const auto& [key, entry] : plan.entries)
      if (key.second == hub.id && !entry.closed) sources.push_back(key.first);
    for (const auto& port : hub.member_ports) {
      if (!is_consumer(s, port.asset)) continue;
      auto it = plan.links.find(unordered(hub.id, port.asset));
      if (it == plan.links.end()) continue;
      const Link& link = it->second;
      const auto& carried = link.x == port.asset ? link.fwd_sources : link.bwd_sources;
      const bool closed = link.x == port.asset ? link.closed_fwd : link.closed_bwd;
      if (!carried.empty() && !closed) sources.push_back(port.asset);
    }
    for (const auto& port : hub.member_ports)
      if (port.direction == PortDirection::In) sinks.push_back(port.asset);
    std::sort(sources.begin(), sources.end());
    sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
    for (const auto& src : sources) {
      for (const auto& dst : sinks) {
        if (src == dst || s.find_arc(src, dst) || hub.forbids(src, dst)) continue;
        plan.warnings.push_back({Severity::Warning, hub.id,
                                 "lowering admits route (" + src + "," + dst +
                                     ") absent from the asset graph; forbid it or add the arc"});
      }
    }
  }
  return plan;
}

}  // namespace

std::vector<Diagnostic> lowering_diagnostics(const EnergySystem& system) {
  Plan plan = make_plan(system);
  std::vector<Diagnostic> out;
  for (auto& issue : plan.issues) out.push_back(std::move(issue.diagnostic));
  for (auto& warning : plan.warnings) out.push_back(std::move(warning));
  return out;
}

EnergySystem lower_to_node_form(const EnergySystem& system, Approach approach) {
  if (approach == Approach::OneBB1F)
    throw Error(ErrorCode::UnsupportedCombination, "1BB-1F has no node form");
  if (system.lowered()) throw Error(ErrorCode::InvariantViolation, "system is already lowered");

  Plan plan = make_plan(system);
  if (!plan.issues.empty()) {
    const auto& first = plan.issues.front();
    throw Error(first.code, first.diagnostic.entity + ": " + first.diagnostic.message);
  }

  EnergySystem out(system.horizon());
  out.set_lowered(true);
  for (const auto& asset : system.assets()) out.push_asset(asset);
  for (const auto& hub : system.hubs()) {
    Asset node;
    node.id = hub.id;
    node.kind = AssetKind::Hub;
    node.initial_units = 0;
    out.push_asset(std::move(node));
  }

  for (auto arc : plan.direct) out.push_arc(std::move(arc));
  for (const auto& [key, entry] : plan.entries) {
    FlowArc arc;
    arc.from = key.first;
    arc.to = key.second;
    arc.op_cost = entry.cost.value_or(0.0);
    if (entry.closed) arc.max_fwd_mw = 0.0;
    out.push_arc(std::move(arc));
  }
  for (const auto& [hub, sink] : plan.exits) {
    FlowArc arc;
    arc.from = hub;
    arc.to = sink;
    out.push_arc(std::move(arc));
  }

  for (const auto& [key, link] : plan.links) {
    auto limit = [&](const std::set<std::string>& sources, const std::optional<double>& fixed, bool closed) {
      if (closed) return std::optional<double>(0.0);
      if (link.fixed) {
        if (!fixed || !std::isfinite(*fixed)) return fixed ? std::optional<double>() : std::optional<double>(0.0);
        return fixed;
      }
      return capacity(system, sources);
    };
    const std::optional<double> fwd = limit(link.fwd_sources, link.fixed_fwd, link.closed_fwd);
    const std::optional<double> bwd = limit(link.bwd_sources, link.fixed_bwd, link.closed_bwd);

    switch (approach) {
      case Approach::TwoBB2F: {
        FlowArc ahead{link.x, link.y, fwd, 0.0, false, 0.0, link.dc};
        FlowArc back{link.y, link.x, bwd, 0.0, false, 0.0, std::nullopt};
        out.push_arc(std::move(ahead));
        out.push_arc(std::move(back));
        break;
      }
      case Approach::TwoBB1F: {
        FlowArc both{link.x, link.y, fwd, bwd.value_or(kInf), true, 0.0, link.dc};
        out.push_arc(std::move(both));
        break;
      }
      case Approach::ThreeBB4F: {
        Asset connection;
        connection.id = "cl_" + link.x + "_" + link.y;
        connection.kind = AssetKind::Transport;
        connection.initial_units = 0;
        out.push_asset(connection);
        const auto& c = connection.id;
        out.push_arc(FlowArc{link.x, c, fwd, 0.0, false, 0.0, std::nullopt});
        out.push_arc(FlowArc{c, link.y, fwd, 0.0, false, 0.0, std::nullopt});
        out.push_arc(FlowArc{link.y, c, bwd, 0.0, false, 0.0, std::nullopt});
        out.push_arc(FlowArc{c, link.x, bwd, 0.0, false, 0.0, std::nullopt});
        break;
      }
      case Approach::OneBB1F: break;
    }
  }
  return out;
}

}  // namespace flowgraph
