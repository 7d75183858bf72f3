#include <chrono>
#include <fstream>
#include <sstream>

#include "flowgraph/bench.hpp"
#include "flowgraph/casegen.hpp"
#include "flowgraph/model_builder.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace flowgraph;

namespace {

BenchConfig small_config() {
  BenchConfig c;
  c.approaches = {Approach::TwoBB2F, Approach::OneBB1F};
  c.instances = {{1, 24}};
  c.n_seeds = 3;
  c.case_kind = BenchCase::Hybrid;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

ExternalSolverSpec stub(const std::filesystem::path& dir, const std::string& body) {
  const auto path = dir / "stub.sh";
  std::ofstream(path) << "#!/bin/sh\n" << body;
  std::filesystem::permissions(path, std::filesystem::perms::owner_all);
  return {path.string(), {"{input}", "{output}"}, "", dir};
}

}  // namespace

TEST_CASE("bench bookkeeping", "[bench]") {
  const auto report = run_benchmark(small_config());
  CHECK(report.samples.size() == 6);
  REQUIRE(report.speedups.size() == 2);
  CHECK(report.ttests.size() == 1);
  for (const auto& s : report.samples) {
    CHECK(s.build_time_s >= 0.0);
    CHECK(s.solve_time_s >= 0.0);
    CHECK(s.instance == "T24");
  }
  for (const auto& s : report.speedups)
    if (s.approach == Approach::TwoBB2F) {
      CHECK(s.median_build_speedup == 1.0);
      CHECK(s.median_solve_speedup == 1.0);
    }
  const auto& t = report.ttests[0].result;
  CHECK(t.reject_null == (t.p_value < 0.05));
  CHECK(t.df == 4);
}

TEST_CASE("reference benchmarked against itself", "[bench]") {
  auto c = small_config();
  c.approaches = {Approach::TwoBB2F};
  const auto report = run_benchmark(c);
  REQUIRE(report.speedups.size() == 1);
  CHECK(report.speedups[0].median_solve_speedup == 1.0);
  CHECK(report.ttests.empty());
}

TEST_CASE("write_report", "[bench]") {
  const auto report = run_benchmark(small_config());
  const auto a = oracle::scratch_dir("report_a");
  const auto b = oracle::scratch_dir("report_b");
  write_report(report, a);
  write_report(report, b);
  for (const char* f : {"samples.csv", "speedups.csv", "ttests.csv"}) CHECK(slurp(a / f) == slurp(b / f));
  CHECK(slurp(a / "samples.csv").starts_with("approach,instance,seed,build_time_s,solve_time_s,objective\n"));
  CHECK(slurp(a / "speedups.csv").starts_with("approach,instance,median_build_speedup,median_solve_speedup\n"));
  CHECK(slurp(a / "ttests.csv").starts_with("approach,instance,t,p,reject\n"));
  CHECK(slurp(a / "ttests.csv").find("1BB-1F,T24,") != std::string::npos);
  REQUIRE_THROWS_CODE(write_report(BenchReport{}, a), ErrorCode::InvariantViolation);
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
}

TEST_CASE("fidelity guard", "[bench]") {
  const auto dir = oracle::scratch_dir("guard");
  auto c = small_config();
  c.external = stub(dir,
                    "if grep -q 'NAME flowgraph_2BB-2F' \"$1\"; then o=1; else o=2; fi\n"
                    "printf 'status optimal\\nobj %s\\n' $o > \"$2\"\n");
  REQUIRE_THROWS_CODE(run_benchmark(c), ErrorCode::ObjectiveMismatch);

  c.external = stub(dir, "printf 'status infeasible\\nobj 0\\n' > \"$2\"\n");
  REQUIRE_THROWS_CODE(run_benchmark(c), ErrorCode::SolverFailure);
  std::filesystem::remove_all(dir);
}

TEST_CASE("bench config", "[bench]") {
  const auto c = parse_bench_config(R"({"approaches": ["1BB-1F", "2BB-2F"], "instances": [1, {"instance": 2, "T": 48}],
      "horizons": [100], "n_seeds": 5, "reference": "2BB-2F", "solver": {"kind": "reference"}, "alpha": 0.01})");
  CHECK(c.approaches == std::vector<Approach>{Approach::OneBB1F, Approach::TwoBB2F});
  REQUIRE(c.instances.size() == 3);
  CHECK(c.instances[0].label() == "1");
  CHECK(c.instances[0].effective_horizon() == 672);
  CHECK(c.instances[1].label() == "T48");
  CHECK(c.instances[2].effective_horizon() == 100);
  CHECK(c.n_seeds == 5);
  CHECK(c.alpha == 0.01);
  CHECK_FALSE(c.external.has_value());
  CHECK_NOTHROW(c.check());

  const auto defaults = parse_bench_config(R"({"approaches": ["2BB-2F"], "instances": [1]})");
  CHECK(defaults.n_seeds == 30);
  CHECK(defaults.reference == Approach::TwoBB2F);
  CHECK(defaults.alpha == 0.05);

  REQUIRE_THROWS_CODE(parse_bench_config("{"), ErrorCode::ParseError);
  REQUIRE_THROWS_CODE(parse_bench_config(R"({"approaches": ["4BB"]})"), ErrorCode::ParseError);
  REQUIRE_THROWS_CODE(parse_bench_config(R"({"approaches": ["2BB-2F"], "solver": {"kind": "magic"}})"),
                      ErrorCode::ParseError);
  auto bad = parse_bench_config(R"({"approaches": ["1BB-1F"], "instances": [1]})");
  REQUIRE_THROWS_CODE(bad.check(), ErrorCode::InvariantViolation);
  bad = parse_bench_config(R"({"approaches": ["2BB-2F"], "instances": [1], "n_seeds": 1})");
  REQUIRE_THROWS_CODE(run_benchmark(bad), ErrorCode::InvariantViolation);

  const auto ext = parse_bench_config(R"({"approaches": ["2BB-2F"], "instances": [1],
      "solver": {"kind": "external", "spec": "highs.json"}})", oracle::tools_dir());
  REQUIRE(ext.external.has_value());
  CHECK(ext.external->seed_parameter == "random_seed");
}

TEST_CASE("the compact form builds faster at desk scale", "[bench][property]") {
  const auto s = scale_horizon(tri_area_case({1, 1}), 1000);
  auto median_build = [&](Approach a) {
    (void)build_model(s, a);
    std::vector<double> times;
    for (int k = 0; k < 7; ++k) {
      const auto start = std::chrono::steady_clock::now();
      (void)build_model(s, a);
      times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    return median(times);
  };
  CHECK(median_build(Approach::OneBB1F) <= median_build(Approach::TwoBB2F));
}
