#include "flowgraph/casegen.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "flowgraph/error.hpp"

namespace flowgraph {

int instance_horizon(int instance) {
  if (instance < 1 || instance > static_cast<int>(kInstanceHorizons.size()))
    throw Error(ErrorCode::InvariantViolation, "instance must be in 1..6, got " + std::to_string(instance));
  return kInstanceHorizons[static_cast<std::size_t>(instance - 1)];
}

double Lcg::next() {
  state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
  return static_cast<double>(state_ >> 11) * 0x1.0p-53;
}

namespace {

Asset producer(std::string id, double capacity, std::vector<double> availability = {}) {
  Asset a;
  a.id = std::move(id);
  a.kind = AssetKind::Producer;
  a.capacity_mw = capacity;
  a.availability_profile = std::move(availability);
  return a;
}

Asset consumer(std::string id, std::vector<double> demand) {
  Asset a;
  a.id = std::move(id);
  a.kind = AssetKind::Consumer;
  a.initial_units = 0;
  a.demand_profile = std::move(demand);
  return a;
}

Asset storage(std::string id, double power, double energy, double initial, double eta_in, double eta_out) {
  Asset a;
  a.id = std::move(id);
  a.kind = AssetKind::Storage;
  a.capacity_mw = power;
  a.storage_capacity_mwh = energy;
  a.initial_storage_mwh = initial;
  a.eta_in = eta_in;
  a.eta_out = eta_out;
  return a;
}

Asset conversion(std::string id, double capacity, double eta_in) {
  Asset a;
  a.id = std::move(id);
  a.kind = AssetKind::Conversion;
  a.capacity_mw = capacity;
  a.eta_in = eta_in;
  return a;
}

Asset& investable(Asset& a, int initial_units, int limit, double cost) {
  a.investable = true;
  a.initial_units = initial_units;
  a.invest_limit = limit;
  a.invest_cost = cost;
  return a;
}

FlowArc arc(std::string from, std::string to, double cost = 0.0) {
  FlowArc f;
  f.from = std::move(from);
  f.to = std::move(to);
  f.op_cost = cost;
  return f;
}

FlowArc capped(std::string from, std::string to, double capacity, double cost = 0.0) {
  FlowArc f = arc(std::move(from), std::move(to), cost);
  f.max_fwd_mw = capacity;
  return f;
}

FlowArc line(std::string from, std::string to, double capacity, double reactance) {
  FlowArc f = arc(std::move(from), std::move(to));
  f.max_fwd_mw = capacity;
  f.max_bwd_mw = capacity;
  f.two_sided = true;
  f.dc = DcFlowParams{reactance, 100.0};
  return f;
}

HubAnnotation hub(std::string id, std::vector<std::pair<std::string, PortDirection>> ports,
                  std::vector<ForbiddenRoute> forbidden = {}) {
  HubAnnotation h;
  h.id = std::move(id);
  for (auto& [asset, direction] : ports) h.member_ports.push_back({asset, direction});
  h.forbidden_routes = std::move(forbidden);
  return h;
}

constexpr auto In = PortDirection::In;
constexpr auto Out = PortDirection::Out;

double daylight(int hour) {
  const int h = hour % 24;
  if (h < 6 || h >= 18) return 0.0;
  return std::sin(std::numbers::pi * (h - 6) / 12.0);
}

EnergySystem hybrid(double pv_cost, double bt_cost) {
  std::vector<double> availability(24), demand(24);
  for (int h = 0; h < 24; ++h) {
    availability[static_cast<std::size_t>(h)] = daylight(h);
    demand[static_cast<std::size_t>(h)] = (h >= 6 && h < 18) ? 30.0 : 15.0;
  }
  EnergySystem s(24);
  s = add_asset(std::move(s), producer("pv", 100.0, availability));
  s = add_asset(std::move(s), storage("bt", 60.0, 400.0, 200.0, 0.95, 0.95));
  s = add_asset(std::move(s), consumer("ed", demand));
  s = add_flow(std::move(s), arc("pv", "bt", pv_cost));
  s = add_flow(std::move(s), arc("pv", "ed", pv_cost));
  s = add_flow(std::move(s), arc("bt", "ed", bt_cost));
  s = add_hub(std::move(s), hub("cp", {{"pv", Out}, {"bt", In}, {"bt", Out}, {"ed", In}}, {{"ed", "bt"}}));
  return s;
}

}  // namespace

EnergySystem hybrid_fixture() { return hybrid(0.0, 0.0); }

EnergySystem hybrid_costed() { return hybrid(1.0, 2.0); }

EnergySystem hybrid_two_step() {
  EnergySystem s(2);
  s = add_asset(std::move(s), producer("pv", 100.0, {1.0, 0.2}));
  s = add_asset(std::move(s), storage("bt", 50.0, 100.0, 40.0, 1.0, 1.0));
  s = add_asset(std::move(s), consumer("ed", {50.0, 60.0}));
  s = add_flow(std::move(s), arc("pv", "bt", 1.0));
  s = add_flow(std::move(s), arc("pv", "ed", 1.0));
  s = add_flow(std::move(s), arc("bt", "ed", 2.0));
  s = add_hub(std::move(s), hub("cp", {{"pv", Out}, {"bt", In}, {"bt", Out}, {"ed", In}}, {{"ed", "bt"}}));
  return s;
}

EnergySystem tri_area_case(const CaseSpec& spec) {
  const int T = instance_horizon(spec.instance);
  Lcg rng(spec.seed);

  std::vector<double> solar(static_cast<std::size_t>(T)), wind(solar), d_a(solar), d_m(solar), d_v(solar),
      heat(solar), industry(solar), h2(solar);
  double wind_state = 0.5;
  for (int t = 0; t < T; ++t) {
    const auto i = static_cast<std::size_t>(t);
    const double day = std::sin(2.0 * std::numbers::pi * ((t % 24) - 8) / 24.0);
    const double season = std::cos(2.0 * std::numbers::pi * t / 8760.0);
    solar[i] = daylight(t) * (0.55 + 0.45 * rng.next());
    wind_state = 0.8 * wind_state + 0.2 * rng.next();
    wind[i] = std::min(1.0, 0.15 + wind_state);
    d_a[i] = 320.0 + 90.0 * day + 30.0 * season + 20.0 * rng.next();
    d_m[i] = 260.0 + 70.0 * day + 40.0 * season + 20.0 * rng.next();
    d_v[i] = 150.0 + 40.0 * day + 10.0 * rng.next();
    heat[i] = 110.0 + 50.0 * season + 10.0 * rng.next();
    industry[i] = 60.0 + 10.0 * rng.next();
    h2[i] = 40.0 + 10.0 * rng.next();
  }

  EnergySystem s(T);
  auto add = [&](Asset a) { s = add_asset(std::move(s), std::move(a)); };
  auto flow = [&](FlowArc f) { s = add_flow(std::move(s), std::move(f)); };

  // Gas supply chain.
  add(producer("gas", 2000.0));

  // Asgard: gas-fired plant, solar and battery.
  Asset solar_pv = producer("solar", 150.0, solar);
  add(investable(solar_pv, 1, 6, 4.0e4));
  Asset ccgt = conversion("ccgt", 450.0, 0.55);
  add(investable(ccgt, 1, 2, 6.0e4));
  Asset battery = storage("battery", 60.0, 240.0, 120.0, 0.95, 0.95);
  add(investable(battery, 1, 4, 2.0e4));
  add(consumer("dA", d_a));

  // Midgard: wind, pumped hydro, nuclear CHP and a gas boiler.
  Asset wind_farm = producer("wind", 200.0, wind);
  add(investable(wind_farm, 1, 6, 5.0e4));
  Asset hydro = storage("hydro", 120.0, 2400.0, 1200.0, 0.9, 0.9);
  add(investable(hydro, 1, 1, 8.0e4));
  add(producer("smr", 260.0));
  Asset chp = conversion("smr_chp", 240.0, 0.9);
  add(investable(chp, 1, 1, 9.0e4));
  Asset boiler = conversion("boiler", 250.0, 0.92);
  add(investable(boiler, 1, 1, 1.0e4));
  Asset heat_store = storage("heat_store", 40.0, 400.0, 200.0, 0.98, 0.98);
  add(investable(heat_store, 1, 2, 5.0e3));
  add(consumer("dM", d_m));
  add(consumer("heat", heat));
  add(consumer("industry", industry));

  // Valhalla: hydrogen chain.
  Asset electrolyzer = conversion("electrolyzer", 60.0, 0.7);
  add(investable(electrolyzer, 1, 4, 3.0e4));
  Asset h2store = storage("h2store", 50.0, 1500.0, 750.0, 0.95, 0.95);
  add(investable(h2store, 1, 3, 1.5e4));
  Asset fuelcell = conversion("fuelcell", 80.0, 0.5);
  add(investable(fuelcell, 1, 1, 2.5e4));
  add(consumer("dV", d_v));
  // Interconnector to a neighbouring grid.
  Asset import_link = producer("import", 150.0);
  add(investable(import_link, 1, 2, 7.0e4));
  add(consumer("h2dem", h2));

  for (auto& a : s.mutable_assets())
    if (a.id == "dM" || a.id == "dV") a.voltage_angle_enabled = true;

  auto add_hub_to = [&](HubAnnotation h) { s = add_hub(std::move(s), std::move(h)); };

  // Asgard electricity: one bus, the battery charges from either plant.
  for (const char* src : {"solar", "ccgt"}) {
    flow(arc(src, "battery"));
    flow(arc(src, "dA"));
  }
  flow(arc("battery", "dA", 0.5));
  add_hub_to(hub("eA", {{"solar", Out}, {"ccgt", Out}, {"battery", Out}, {"battery", In}, {"dA", In}},
                 {{"dA", "battery"}}));

  // Midgard electricity: the pumped hydro plant pumps with wind power only,
  // through its own connection.
  flow(arc("wind", "hydro"));
  for (const char* src : {"wind", "smr_chp", "hydro"}) flow(arc(src, "dM", src == std::string("hydro") ? 0.5 : 0.0));
  add_hub_to(hub("eM", {{"wind", Out}, {"smr_chp", Out}, {"hydro", Out}, {"dM", In}}));
  add_hub_to(hub("eMc", {{"wind", Out}, {"hydro", In}}));
  flow(capped("smr", "smr_chp", 260.0, 8.0));

  // Midgard heat: the boiler alone charges the heat store.
  flow(arc("boiler", "heat_store"));
  for (const char* src : {"smr_chp", "boiler", "heat_store"}) {
    const double cost = src == std::string("heat_store") ? 0.2 : 0.0;
    flow(arc(src, "heat", cost));
    flow(arc(src, "industry", cost));
  }
  add_hub_to(hub("hM", {{"smr_chp", Out}, {"boiler", Out}, {"heat_store", Out}, {"heat", In}, {"industry", In}},
                 {{"heat", "industry"}, {"industry", "heat"}}));
  add_hub_to(hub("hMc", {{"boiler", Out}, {"heat_store", In}}));

  // Gas network: supply hub and one delivery hub per plant.
  flow(arc("gas", "ccgt", 20.0));
  flow(arc("gas", "boiler", 20.0));
  add_hub_to(hub("gS", {{"gas", Out}}));
  add_hub_to(hub("gA", {{"ccgt", In}}));
  add_hub_to(hub("gM", {{"boiler", In}}));

  // Valhalla hydrogen.
  flow(capped("dV", "electrolyzer", 300.0));
  for (const char* src : {"electrolyzer", "h2store"}) {
    flow(arc(src, "fuelcell"));
    flow(arc(src, "h2dem"));
  }
  flow(arc("electrolyzer", "h2store"));
  flow(capped("fuelcell", "dV", 80.0, 1.0));
  flow(capped("import", "dV", 150.0, 90.0));
  add_hub_to(hub("H2", {{"electrolyzer", Out}, {"h2store", Out}, {"h2store", In}, {"fuelcell", In}, {"h2dem", In}},
                 {{"h2dem", "h2store"}, {"h2dem", "fuelcell"}}));

  // Inter-area line; Asgard is self-supplied.
  flow(line("dM", "dV", 350.0, 0.12));
  return s;
}

EnergySystem scale_horizon(const EnergySystem& system, int horizon) {
  if (horizon < 1) throw Error(ErrorCode::InvariantViolation, "horizon must be positive");
  EnergySystem out = system;
  out.set_horizon(horizon);
  auto tile = [horizon](std::vector<double>& profile) {
    if (profile.empty()) return;
    std::vector<double> next(static_cast<std::size_t>(horizon));
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = profile[i % profile.size()];
    profile = std::move(next);
  };
  for (auto& asset : out.mutable_assets()) {
    tile(asset.demand_profile);
    tile(asset.availability_profile);
  }
  return out;
}

}  // namespace flowgraph
