#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "flowgraph/casegen.hpp"
#include "flowgraph/model_builder.hpp"
#include "flowgraph/mps.hpp"
#include "flowgraph/solution.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace flowgraph;

namespace {

LpInstance single_var() {
  LpInstance lp;
  lp.add_variable({VarRole::Invest, "x", {}, 0, 0.0, 5.0, false}, -1.0);
  return lp;
}

oracle::MpsShape shape_of(const LpInstance& lp) {
  std::stringstream mps;
  write_mps(lp, mps);
  return oracle::read_mps_shape(mps);
}

std::vector<LpInstance> fixtures() {
  std::vector<LpInstance> out;
  for (Approach a : kAllApproaches) {
    out.push_back(build_model(scale_horizon(hybrid_fixture(), 1), a));
    out.push_back(build_model(scale_horizon(hybrid_costed(), 24), a));
    out.push_back(build_model(scale_horizon(tri_area_case({1, 1}), 24), a));
  }
  out.push_back(build_model(scale_horizon(tri_area_case({1, 1}), 6), Approach::TwoBB1F, {true, true}));
  return out;
}

}  // namespace

TEST_CASE("add_row drops zeros and merges duplicates", "[lp]") {
  LpInstance lp;
  const auto x = lp.add_variable({VarRole::Invest, "x"});
  const auto y = lp.add_variable({VarRole::Invest, "y"});
  const Term terms[] = {{x, 1.0}, {y, 0.0}, {x, 2.0}};
  lp.add_row({RowFamily::InvestLimit, "x", 0, Sense::Le, 1.0}, terms);
  REQUIRE(lp.terms(0).size() == 1);
  CHECK(lp.terms(0)[0].coef == 3.0);

  const Term bad[] = {{7, 1.0}};
  REQUIRE_THROWS_CODE(lp.add_row({}, bad), ErrorCode::InvariantViolation);
  const Term inf[] = {{x, kInfinity}};
  REQUIRE_THROWS_CODE(lp.add_row({}, inf), ErrorCode::InvariantViolation);
}

TEST_CASE("size_report", "[lp]") {
  CHECK(size_report(LpInstance{}) == ModelSize{0, 0, 0});
  const auto s = scale_horizon(hybrid_fixture(), 1);
  CHECK(size_report(build_model(s, Approach::TwoBB1F)) == ModelSize{5, 9, 13});
  CHECK(size_report(build_model(s, Approach::TwoBB2F)) == ModelSize{6, 9, 16});

  LpInstance lp;
  const auto x = lp.add_variable({VarRole::Flow, "a", "b", 1, -kInfinity, kInfinity});
  const Term t[] = {{x, 1.0}};
  lp.add_row({RowFamily::FlowBound, "a,b", 1, Sense::Range, 5.0, -5.0}, t);
  CHECK(size_report(lp) == ModelSize{1, 2, 1});
}

TEST_CASE("size_report is invariant under column permutations", "[lp][property]") {
  std::mt19937_64 rng(11);
  for (const auto& lp : fixtures()) {
    std::vector<std::size_t> perm(lp.num_vars());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto shuffled = lp.permuted_columns(perm);
    CHECK(size_report(shuffled) == size_report(lp));
    for (std::size_t j = 0; j < perm.size(); ++j) CHECK(shuffled.variables()[j].name() == lp.variables()[perm[j]].name());
  }
}

TEST_CASE("percent_change", "[lp]") {
  CHECK(percent_change(100, 74) == -26.0);
  CHECK(percent_change(0, 5) == 0.0);
}

TEST_CASE("MPS of a single bounded variable", "[lp][mps]") {
  const auto shape = shape_of(single_var());
  CHECK(shape.columns == 1);
  CHECK(shape.rows == 0);
  CHECK(shape.bounds == 1);
  CHECK(shape.has_endata);
}

TEST_CASE("MPS marks integer columns", "[lp][mps]") {
  LpInstance lp = single_var();
  lp.add_variable({VarRole::UnitsOn, "g", {}, 1, 0.0, kInfinity, true});
  std::stringstream mps;
  write_mps(lp, mps);
  const std::string text = mps.str();
  CHECK(text.find("'INTORG'") != std::string::npos);
  CHECK(text.find("'INTEND'") != std::string::npos);
}

TEST_CASE("MPS dimensions match the instance under an independent reader", "[lp][mps][property]") {
  for (const auto& lp : fixtures()) {
    const auto shape = shape_of(lp);
    std::size_t ranges = 0;
    for (const auto& r : lp.rows()) ranges += r.sense == Sense::Range;
    CHECK(shape.columns == lp.num_vars());
    CHECK(shape.rows == lp.num_rows());
    CHECK(shape.nonzeros == size_report(lp).n_nonzeros);
    CHECK(shape.ranges == ranges);
  }
}

TEST_CASE("MPS output is deterministic", "[lp][mps]") {
  const auto lp = build_model(scale_horizon(tri_area_case({1, 1}), 4), Approach::TwoBB2F);
  std::stringstream a, b;
  write_mps(lp, a);
  write_mps(lp, b);
  CHECK(a.str() == b.str());
}

TEST_CASE("read_mps restores what write_mps wrote", "[lp][mps]") {
  for (const auto& lp : fixtures()) {
    std::stringstream mps;
    write_mps(lp, mps);
    const auto back = read_mps(mps);
    CHECK(canonical_dump(back) == canonical_dump(lp));
  }
  std::stringstream foreign("NAME x\nROWS\n N OBJ\n L c1\nCOLUMNS\n x1 c1 1\nRHS\nENDATA\n");
  REQUIRE_THROWS_CODE(read_mps(foreign), ErrorCode::ParseError);
  std::stringstream truncated("NAME x\nROWS\n N OBJ\n");
  REQUIRE_THROWS_CODE(read_mps(truncated), ErrorCode::ParseError);
}

TEST_CASE("write_mps to an unwritable path", "[lp][mps]") {
  REQUIRE_THROWS_CODE(write_mps(single_var(), std::filesystem::path("/nonexistent/dir/x.mps")), ErrorCode::IoFailure);
}

TEST_CASE("read_solution", "[lp][solution]") {
  const auto lp = single_var();
  {
    std::stringstream in("status optimal\nobj 42.0\n");
    const auto r = read_solution(in, lp);
    CHECK(r.status == SolveStatus::Optimal);
    CHECK(r.objective == 42.0);
    CHECK(r.primal == std::vector<double>{0.0});
  }
  {
    std::stringstream in("status optimal\nobj -5\ninvest[x] 5\n");
    CHECK(read_solution(in, lp).primal == std::vector<double>{5.0});
  }
  {
    std::stringstream in("");
    REQUIRE_THROWS_CODE(read_solution(in, lp), ErrorCode::ParseError);
  }
  {
    std::stringstream in("status optimal\nobj 1\nghost 3\n");
    REQUIRE_THROWS_CODE(read_solution(in, lp), ErrorCode::UnknownVariableName);
  }
  {
    std::stringstream in("status infeasible\nobj 0\n");
    CHECK(read_solution(in, lp).status == SolveStatus::Infeasible);
  }
}

TEST_CASE("solution files round-trip", "[lp][solution]") {
  const auto lp = build_model(scale_horizon(hybrid_costed(), 2), Approach::OneBB1F);
  SolveResult r;
  r.objective = 12.5;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) r.primal.push_back(0.1 * static_cast<double>(j));
  std::stringstream io;
  write_solution(r, lp, io);
  const auto back = read_solution(io, lp);
  CHECK(back.objective == r.objective);
  CHECK(back.primal == r.primal);
}
