#include <algorithm>

#include "flowgraph/casegen.hpp"
#include "flowgraph/energy_system.hpp"
#include "helpers.hpp"

using namespace flowgraph;

namespace {

Asset pv() {
  Asset a;
  a.id = "pv";
  a.kind = AssetKind::Producer;
  a.capacity_mw = 100;
  return a;
}

Asset demand(const std::string& id, std::vector<double> profile) {
  Asset a;
  a.id = id;
  a.kind = AssetKind::Consumer;
  a.initial_units = 0;
  a.demand_profile = std::move(profile);
  return a;
}

Asset battery() {
  Asset a;
  a.id = "bt";
  a.kind = AssetKind::Storage;
  a.capacity_mw = 50;
  a.storage_capacity_mwh = 100;
  a.initial_storage_mwh = 40;
  return a;
}

std::size_t errors_for(const std::vector<Diagnostic>& ds, const std::string& entity) {
  return static_cast<std::size_t>(std::count_if(ds.begin(), ds.end(), [&](const Diagnostic& d) {
    return d.severity == Severity::Error && d.entity == entity;
  }));
}

}  // namespace

TEST_CASE("asset kinds round-trip through their names", "[core]") {
  for (auto kind : {AssetKind::Producer, AssetKind::Consumer, AssetKind::Storage, AssetKind::Conversion,
                    AssetKind::Hub, AssetKind::Transport})
    CHECK(parse_asset_kind(to_string(kind)) == kind);
  CHECK_FALSE(parse_asset_kind("reactor").has_value());
}

TEST_CASE("add_asset", "[core]") {
  const auto one = add_asset(EnergySystem{}, pv());
  CHECK(one.assets().size() == 1);
  REQUIRE_THROWS_CODE(add_asset(one, pv()), ErrorCode::DuplicateId);
  REQUIRE_THROWS_CODE(add_asset(one, demand("ed", {})), ErrorCode::InvariantViolation);

  Asset stored = pv();
  stored.id = "pv2";
  stored.storage_capacity_mwh = 10;
  REQUIRE_THROWS_CODE(add_asset(one, stored), ErrorCode::InvariantViolation);

  Asset low = pv();
  low.id = "pv3";
  low.min_capacity_mw = 120;
  REQUIRE_THROWS_CODE(add_asset(one, low), ErrorCode::InvariantViolation);

  Asset over = battery();
  over.initial_storage_mwh = 150;
  REQUIRE_THROWS_CODE(add_asset(one, over), ErrorCode::InvariantViolation);

  Asset eta = battery();
  eta.eta_in = 0.0;
  REQUIRE_THROWS_CODE(add_asset(one, eta), ErrorCode::InvariantViolation);
}

TEST_CASE("add_flow", "[core]") {
  auto s = add_asset(add_asset(EnergySystem{}, pv()), battery());
  s = add_flow(s, {"pv", "bt"});
  CHECK(s.find_arc("pv", "bt") != nullptr);
  REQUIRE_THROWS_CODE(add_flow(s, {"pv", "pv"}), ErrorCode::SelfLoop);
  REQUIRE_THROWS_CODE(add_flow(s, {"pv", "ghost"}), ErrorCode::UnknownAsset);
  REQUIRE_THROWS_CODE(add_flow(s, {"pv", "bt"}), ErrorCode::DuplicateArc);

  FlowArc two_sided{"bt", "pv"};
  two_sided.two_sided = true;
  two_sided.max_bwd_mw = 10;
  REQUIRE_THROWS_CODE(add_flow(s, two_sided), ErrorCode::InvariantViolation);
}

TEST_CASE("add_hub checks members", "[core]") {
  auto s = add_asset(add_asset(EnergySystem{}, pv()), battery());
  HubAnnotation hub{"cp", {{"pv", PortDirection::Out}, {"ghost", PortDirection::In}}, {}};
  REQUIRE_THROWS_CODE(add_hub(s, hub), ErrorCode::UnknownAsset);
  HubAnnotation bad_route{"cp", {{"pv", PortDirection::Out}}, {{"pv", "bt"}}};
  REQUIRE_THROWS_CODE(add_hub(s, bad_route), ErrorCode::InvariantViolation);
}

TEST_CASE("validate", "[core]") {
  SECTION("hybrid fixture is clean") { CHECK(validate(hybrid_fixture()).empty()); }

  SECTION("consumer without incoming arc") {
    auto s = hybrid_fixture();
    s = remove_asset(s, "ed");
    s = add_asset(s, demand("ed", std::vector<double>(24, 10.0)));
    const auto ds = validate_structure(s);
    CHECK(errors_for(ds, "ed") == 1);
  }

  SECTION("hub referencing a missing asset") {
    auto s = hybrid_fixture();
    HubAnnotation hub{"h2", {{"ghost", PortDirection::In}}, {}};
    s.push_hub(hub);
    const auto ds = validate(s);
    CHECK(errors_for(ds, "h2") == 1);
  }

  SECTION("pure") {
    auto s = hybrid_fixture();
    s.push_arc({"pv", "pv"});
    CHECK(validate(s) == validate(s));
    CHECK(error_count(validate(s)) >= 1);
  }

  SECTION("hub assets are rejected in unlowered systems") {
    auto s = hybrid_fixture();
    Asset h;
    h.id = "node";
    h.kind = AssetKind::Hub;
    s.push_asset(h);
    CHECK(errors_for(validate_structure(s), "node") == 1);
  }
}

TEST_CASE("add then remove restores the graph", "[core][property]") {
  for (const auto& base : {hybrid_fixture(), tri_area_case({3, 1})}) {
    auto grown = add_asset(base, demand("extra", {1.0}));
    grown = add_flow(grown, {base.assets().front().id, "extra"});
    const auto back = remove_asset(grown, "extra");
    REQUIRE(back.assets().size() == base.assets().size());
    REQUIRE(back.arcs().size() == base.arcs().size());
    for (std::size_t i = 0; i < base.arcs().size(); ++i) {
      CHECK(back.arcs()[i].from == base.arcs()[i].from);
      CHECK(back.arcs()[i].to == base.arcs()[i].to);
    }
    for (std::size_t i = 0; i < base.hubs().size(); ++i) {
      CHECK(back.hubs()[i].member_ports == base.hubs()[i].member_ports);
      CHECK(back.hubs()[i].forbidden_routes == base.hubs()[i].forbidden_routes);
    }
  }
}

TEST_CASE("remove_asset drops incident arcs and hub references", "[core]") {
  const auto s = remove_asset(hybrid_fixture(), "bt");
  CHECK(s.find_asset("bt") == nullptr);
  CHECK(s.arcs().size() == 1);
  CHECK_FALSE(s.hubs().front().has_member("bt"));
  CHECK(s.hubs().front().forbidden_routes.empty());
  REQUIRE_THROWS_CODE(remove_asset(s, "bt"), ErrorCode::UnknownAsset);
}

TEST_CASE("profiles wrap cyclically", "[core]") {
  Asset a = demand("ed", {1, 2, 3});
  CHECK(a.demand(1) == 1);
  CHECK(a.demand(4) == 1);
  CHECK(a.demand(6) == 3);
  Asset p = pv();
  CHECK(p.availability(5) == 1.0);
  p.availability_profile = {0.5, 0.25};
  CHECK(p.availability(3) == 0.5);
  CHECK(p.max_availability() == 0.5);
}
