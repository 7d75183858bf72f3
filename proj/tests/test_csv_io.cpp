#include <fstream>
#include <sstream>

#include "flowgraph/casegen.hpp"
#include "flowgraph/csv_io.hpp"
#include "flowgraph/model_builder.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace flowgraph;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kFiles[] = {"assets.csv", "flows.csv", "hubs.csv", "forbidden.csv", "profiles.csv"};

void write_bundle(const std::filesystem::path& dir, const std::string& assets, const std::string& flows,
                  const std::string& profiles) {
  std::ofstream(dir / "assets.csv") << assets;
  std::ofstream(dir / "flows.csv") << flows;
  std::ofstream(dir / "hubs.csv") << "hub_id,asset_id,direction\n";
  std::ofstream(dir / "forbidden.csv") << "hub_id,source,sink\n";
  std::ofstream(dir / "profiles.csv") << profiles;
}

}  // namespace

TEST_CASE("checked-in fixtures re-export byte for byte", "[csv]") {
  for (const char* name : {"tri_area", "hybrid"}) {
    const auto src = oracle::data_dir() / name;
    const auto out = oracle::scratch_dir(std::string("reexport_") + name);
    write_case_csv(read_case_csv(src), out);
    for (const char* f : kFiles) {
      INFO(name << "/" << f);
      CHECK(slurp(src / f) == slurp(out / f));
    }
    std::filesystem::remove_all(out);
  }
}

TEST_CASE("checked-in fixtures match the generators", "[csv]") {
  const auto out = oracle::scratch_dir("fresh");
  write_case_csv(tri_area_case({1, 1}), out / "tri_area");
  write_case_csv(hybrid_costed(), out / "hybrid");
  for (const char* name : {"tri_area", "hybrid"})
    for (const char* f : kFiles) {
      INFO(name << "/" << f);
      CHECK(slurp(oracle::data_dir() / name / f) == slurp(out / name / f));
    }
  std::filesystem::remove_all(out);
}

TEST_CASE("a loaded bundle builds the same LP", "[csv]") {
  const auto loaded = read_case_csv(oracle::data_dir() / "tri_area");
  CHECK(validate(loaded).empty());
  CHECK(loaded.horizon() == 672);
  for (Approach a : kAllApproaches)
    CHECK(canonical_dump(build_model(scale_horizon(loaded, 24), a)) ==
          canonical_dump(build_model(scale_horizon(tri_area_case({1, 1}), 24), a)));
}

TEST_CASE("reader conventions", "[csv]") {
  const auto dir = oracle::scratch_dir("conventions");
  write_bundle(dir,
               "kind,id,capacity_mw,uc,dc\n"
               "producer,g,100,1,0\n"
               "consumer,d,,,\n"
               "consumer,e,,false,true\n",
               "from,to,max_fwd_mw,max_bwd_mw,op_cost,reactance_pu,s_base_mva\n"
               "g,d,,,2.5,,\n"
               "d,e,50,0,,0.1,\n",
               "asset_id,timestep,value\n"
               "d,1,10\nd,2,20\ne,1,1\ne,2,1\ne,3,1\n");
  const auto s = read_case_csv(dir);
  CHECK(s.horizon() == 3);
  CHECK(s.find_asset("g")->uc_enabled);
  CHECK(s.find_asset("e")->voltage_angle_enabled);
  CHECK(s.find_asset("d")->demand_profile == std::vector<double>{10, 20});
  const auto* gd = s.find_arc("g", "d");
  CHECK_FALSE(gd->max_fwd_mw.has_value());
  CHECK_FALSE(gd->two_sided);
  CHECK(gd->op_cost == 2.5);
  const auto* de = s.find_arc("d", "e");
  CHECK(de->two_sided);
  CHECK(de->max_bwd_mw == 0.0);
  REQUIRE(de->dc.has_value());
  CHECK(de->dc->s_base_mva == 100.0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("malformed bundles", "[csv]") {
  const auto dir = oracle::scratch_dir("malformed");
  const std::string flows = "from,to\n";
  const std::string profiles = "asset_id,timestep,value\n";

  REQUIRE_THROWS_CODE(read_case_csv(dir / "missing"), ErrorCode::IoFailure);

  write_bundle(dir, "id,kind,capacity_mw\ng,producer,lots\n", flows, profiles);
  REQUIRE_THROWS_CODE(read_case_csv(dir), ErrorCode::ParseError);

  write_bundle(dir, "id,kind\ng,reactor\n", flows, profiles);
  REQUIRE_THROWS_CODE(read_case_csv(dir), ErrorCode::ParseError);

  write_bundle(dir, "id\ng\n", flows, profiles);
  REQUIRE_THROWS_CODE(read_case_csv(dir), ErrorCode::ParseError);

  write_bundle(dir, "id,kind,uc\ng,producer,maybe\n", flows, profiles);
  REQUIRE_THROWS_CODE(read_case_csv(dir), ErrorCode::ParseError);

  write_bundle(dir, "id,kind\nd,consumer\n", flows, "asset_id,timestep,value\nd,1,1\nd,3,1\n");
  REQUIRE_THROWS_CODE(read_case_csv(dir), ErrorCode::ParseError);

  write_bundle(dir, "id,kind\nd,consumer\n", flows, "asset_id,timestep,value\nghost,1,1\n");
  REQUIRE_THROWS_CODE(read_case_csv(dir), ErrorCode::ParseError);

  // Domain problems are left to validate.
  write_bundle(dir, "id,kind\nd,consumer\n", flows, profiles);
  const auto s = read_case_csv(dir);
  CHECK(error_count(validate(s)) >= 1);
  std::filesystem::remove_all(dir);
}
