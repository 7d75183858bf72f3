#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "flowgraph/casegen.hpp"
#include "flowgraph/csv_io.hpp"
#include "flowgraph/lowering.hpp"
#include "flowgraph/model_builder.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace flowgraph;

TEST_CASE("instance horizons", "[casegen]") {
  CHECK(instance_horizon(1) == 672);
  CHECK(instance_horizon(2) == 4032);
  CHECK(instance_horizon(6) == 35040);
  REQUIRE_THROWS_CODE(instance_horizon(0), ErrorCode::InvariantViolation);
  REQUIRE_THROWS_CODE(instance_horizon(7), ErrorCode::InvariantViolation);
}

TEST_CASE("hybrid fixture", "[casegen]") {
  const auto s = hybrid_fixture();
  CHECK(validate(s).empty());
  CHECK(s.assets().size() == 3);
  CHECK(s.find_asset("pv")->kind == AssetKind::Producer);
  CHECK(s.find_asset("bt")->kind == AssetKind::Storage);
  CHECK(s.find_asset("ed")->kind == AssetKind::Consumer);
  CHECK(s.arcs().size() == 3);
  for (auto [f, t] : {std::pair{"pv", "bt"}, {"pv", "ed"}, {"bt", "ed"}}) CHECK(s.find_arc(f, t) != nullptr);
  REQUIRE(s.hubs().size() == 1);
  CHECK(s.hubs()[0].id == "cp");
  CHECK(s.hubs()[0].forbids("ed", "bt"));

  const auto lowered = lower_to_node_form(s, Approach::TwoBB2F);
  const auto* into_bt = lowered.find_arc("ed", "cp");
  REQUIRE(into_bt != nullptr);
  CHECK(into_bt->max_fwd_mw.value_or(1.0) == 0.0);
}

TEST_CASE("tri-area roster", "[casegen]") {
  const auto s = tri_area_case({1, 1});
  CHECK(validate(s).empty());
  CHECK(s.horizon() == 672);
  auto kind_of = [&](const char* id) { return s.find_asset(id)->kind; };
  CHECK(kind_of("ccgt") == AssetKind::Conversion);
  CHECK(kind_of("solar") == AssetKind::Producer);
  CHECK(kind_of("battery") == AssetKind::Storage);
  CHECK(kind_of("wind") == AssetKind::Producer);
  CHECK(kind_of("hydro") == AssetKind::Storage);
  CHECK(kind_of("smr") == AssetKind::Producer);
  CHECK(kind_of("electrolyzer") == AssetKind::Conversion);
  CHECK(kind_of("h2store") == AssetKind::Storage);
  CHECK(kind_of("fuelcell") == AssetKind::Conversion);
  CHECK(kind_of("heat") == AssetKind::Consumer);
  for (const char* id : {"battery", "electrolyzer", "h2store", "solar", "wind"}) CHECK(s.find_asset(id)->investable);

  const auto lp = build_model(scale_horizon(s, 2), Approach::TwoBB2F);
  const auto invest = std::count_if(lp.variables().begin(), lp.variables().end(),
                                    [](const VariableRef& v) { return v.role == VarRole::Invest; });
  CHECK(invest == 12);
}

TEST_CASE("generator determinism", "[casegen][property]") {
  const auto a = oracle::scratch_dir("gen_a");
  const auto b = oracle::scratch_dir("gen_b");
  write_case_csv(tri_area_case({9, 2}), a);
  write_case_csv(tri_area_case({9, 2}), b);
  for (const char* f : {"assets.csv", "flows.csv", "hubs.csv", "forbidden.csv", "profiles.csv"}) {
    std::ifstream x(a / f), y(b / f);
    const std::string sx((std::istreambuf_iterator<char>(x)), {}), sy((std::istreambuf_iterator<char>(y)), {});
    CHECK(sx == sy);
  }
  CHECK(canonical_dump(build_model(scale_horizon(tri_area_case({3, 1}), 5), Approach::TwoBB2F)) ==
        canonical_dump(build_model(scale_horizon(tri_area_case({3, 1}), 5), Approach::TwoBB2F)));
  // Different seeds change the profiles.
  CHECK(tri_area_case({1, 1}).find_asset("dA")->demand_profile !=
        tri_area_case({2, 1}).find_asset("dA")->demand_profile);
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
}

TEST_CASE("profile ranges", "[casegen]") {
  const auto s = tri_area_case({5, 1});
  for (const auto& a : s.assets()) {
    for (double v : a.availability_profile) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    for (double v : a.demand_profile) CHECK(v >= 0.0);
    if (!a.demand_profile.empty()) CHECK(static_cast<int>(a.demand_profile.size()) == s.horizon());
  }
}

TEST_CASE("scale_horizon", "[casegen]") {
  const auto one = scale_horizon(hybrid_fixture(), 1);
  CHECK(one.horizon() == 1);
  CHECK(one.find_asset("ed")->demand_profile.size() == 1);

  const auto base = hybrid_fixture();
  const auto there_and_back = scale_horizon(scale_horizon(base, 48), 24);
  CHECK(there_and_back.find_asset("ed")->demand_profile == base.find_asset("ed")->demand_profile);
  CHECK(there_and_back.find_asset("pv")->availability_profile == base.find_asset("pv")->availability_profile);
  const auto tiled = scale_horizon(base, 50);
  CHECK(tiled.find_asset("ed")->demand_profile[49] == base.find_asset("ed")->demand_profile[1]);
}

TEST_CASE("sizes grow affinely in the horizon", "[casegen][property]") {
  const auto s = tri_area_case({1, 1});
  const auto producers = static_cast<double>(std::count_if(
      s.assets().begin(), s.assets().end(), [](const Asset& x) { return x.kind == AssetKind::Producer; }));
  for (Approach a : kAllApproaches) {
    const auto s1 = size_report(build_model(scale_horizon(s, 10), a));
    const auto s2 = size_report(build_model(scale_horizon(s, 20), a));
    const auto s3 = size_report(build_model(scale_horizon(s, 45), a));
    auto slope = [](std::size_t x, std::size_t y, int dt) { return (static_cast<double>(y) - static_cast<double>(x)) / dt; };
    CHECK(slope(s1.n_vars, s2.n_vars, 10) == slope(s2.n_vars, s3.n_vars, 25));
    CHECK(slope(s1.n_constraints, s2.n_constraints, 10) == slope(s2.n_constraints, s3.n_constraints, 25));
    // A zero-availability hour drops one invest coefficient per producer, so
    // nonzeros are affine only up to that.
    CHECK(std::abs(slope(s1.n_nonzeros, s2.n_nonzeros, 10) - slope(s2.n_nonzeros, s3.n_nonzeros, 25)) <= producers);
  }
}

TEST_CASE("per-timestep size of the node form", "[casegen]") {
  // Topology tuned to 43 +- 2 variables and 68 +- 3 constraints per timestep.
  const auto s = tri_area_case({1, 1});
  const auto a = size_report(build_model(scale_horizon(s, 100), Approach::TwoBB2F));
  const auto b = size_report(build_model(scale_horizon(s, 200), Approach::TwoBB2F));
  const double vars = static_cast<double>(b.n_vars - a.n_vars) / 100.0;
  const double cons = static_cast<double>(b.n_constraints - a.n_constraints) / 100.0;
  CHECK(std::abs(vars - 43.0) <= 2.0);
  CHECK(std::abs(cons - 68.0) <= 3.0);
  // The only time-independent columns are the invest variables.
  CHECK(static_cast<double>(a.n_vars) - 100.0 * vars == 12.0);
}

TEST_CASE("all approaches are feasible on the tri-area case", "[casegen]") {
  const auto s = scale_horizon(tri_area_case({1, 1}), 3);
  for (Approach a : kAllApproaches) CHECK_NOTHROW(build_model(s, a));
}
