#include <cstdlib>
#include <fstream>
#include <sstream>

#include "flowgraph/cli.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace flowgraph;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& text, const std::string& part) { return text.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("compare prints the per-timestep table", "[cli]") {
  const auto r = run({"compare", "--case", "hybrid", "--T", "1"});
  CHECK(r.code == 0);
  for (const char* approach : {"3BB-4F", "2BB-2F", "2BB-1F", "1BB-1F"}) CHECK(contains(r.out, approach));
  CHECK(contains(r.out, "2BB-2F             6            9          16"));
  CHECK(contains(r.out, "2BB-1F             5            9          13"));
}

TEST_CASE("compare with solves reports the verdict", "[cli]") {
  const auto r = run({"compare", "--case", "tri-area", "--instance", "1", "--approaches", "1BB-1F,2BB-2F", "--T", "24",
                      "--solve"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "objectives equal (1e-6 relative): yes"));
  CHECK(contains(r.out, "%"));
}

TEST_CASE("usage errors exit with 2", "[cli]") {
  CHECK(run({"build", "--bogus"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"build", "--approach", "4BB-9F"}).code == 2);
  CHECK(run({"build", "--case", "mars"}).code == 2);
  CHECK(run({"export-case"}).code == 2);
  CHECK(run({"compare", "--instance", "9", "--case", "tri-area"}).code == 2);
}

TEST_CASE("domain errors exit with 1", "[cli]") {
  CHECK(run({"validate", "/nonexistent/bundle"}).code == 1);
  CHECK(run({"solve", "--mps", "/nonexistent.mps"}).code == 1);
}

TEST_CASE("build, solve and export", "[cli]") {
  const auto dir = oracle::scratch_dir("cli");
  auto r = run({"build", "--case", "hybrid", "--T", "24", "--approach", "2BB-1F", "--out", dir.string()});
  CHECK(r.code == 0);
  REQUIRE(std::filesystem::exists(dir / "2BB-1F.mps"));

  r = run({"solve", "--mps", (dir / "2BB-1F.mps").string(), "--out", (dir / "sol.txt").string()});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "optimal"));
  std::ifstream sol(dir / "sol.txt");
  std::string first;
  std::getline(sol, first);
  CHECK(first == "status optimal");

  r = run({"export-case", "--case", "tri-area", "--T", "24", "--out", (dir / "bundle").string()});
  CHECK(r.code == 0);
  r = run({"validate", (dir / "bundle").string()});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "0 error(s)"));
  r = run({"compare", "--case", "csv:" + (dir / "bundle").string(), "--approaches", "2BB-2F,1BB-1F", "--solve"});
  CHECK(r.code == 0);

  // An invalid bundle is reported by validate.
  std::ofstream(dir / "bundle" / "flows.csv") << "from,to\n";
  r = run({"validate", "--case", "csv:" + (dir / "bundle").string()});
  CHECK(r.code == 1);
  CHECK(contains(r.out, "error:"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("infeasible solves exit with 1", "[cli]") {
  const auto dir = oracle::scratch_dir("cli_infeasible");
  std::ofstream(dir / "assets.csv") << "id,kind,capacity_mw\ng,producer,10\nd,consumer,\n";
  std::ofstream(dir / "flows.csv") << "from,to\ng,d\n";
  std::ofstream(dir / "hubs.csv") << "hub_id,asset_id,direction\n";
  std::ofstream(dir / "forbidden.csv") << "hub_id,source,sink\n";
  std::ofstream(dir / "profiles.csv") << "asset_id,timestep,value\nd,1,50\n";
  const auto r = run({"solve", "--case", "csv:" + dir.string(), "--approach", "1BB-1F"});
  CHECK(r.code == 1);
  CHECK(contains(r.out, "infeasible"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("bench writes the report", "[cli]") {
  const auto dir = oracle::scratch_dir("cli_bench");
  std::ofstream(dir / "bench.json") << R"({"approaches": ["2BB-2F", "1BB-1F"], "horizons": [12], "n_seeds": 2,
      "case": "hybrid"})";
  const auto r = run({"bench", (dir / "bench.json").string(), "--out", (dir / "out").string()});
  CHECK(r.code == 0);
  for (const char* f : {"samples.csv", "speedups.csv", "ttests.csv"}) CHECK(std::filesystem::exists(dir / "out" / f));
  std::filesystem::remove_all(dir);
}

TEST_CASE("external solver from the environment", "[cli]") {
  ::unsetenv("FLOWGRAPH_SOLVER");
  CHECK(run({"solve", "--case", "hybrid", "--T", "2", "--solver", "external"}).code == 2);
  if (!oracle::highs_available()) SKIP("python3 with scipy is not available");
  ::setenv("FLOWGRAPH_SOLVER", oracle::highs_spec().c_str(), 1);
  const auto r = run({"solve", "--case", "hybrid", "--T", "24", "--solver", "external"});
  ::unsetenv("FLOWGRAPH_SOLVER");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "optimal"));
}
