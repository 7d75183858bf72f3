// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "flowgraph/bench.hpp"
#include "flowgraph/casegen.hpp"
#include "flowgraph/error.hpp"
#include "flowgraph/model_builder.hpp"
#include "flowgraph/mps.hpp"
#include "flowgraph/solver.hpp"
#include "flowgraph/stats.hpp"
#include "oracles.hpp"

using namespace flowgraph;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("failed: " + what);
    }
  }
  void note(const std::string& text) { notes.push_back(text); }
};

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double relative_gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

struct PerStep {
  double vars, constraints, nonzeros;
};

PerStep per_step(const LpInstance& lp, int horizon) {
  const auto s = size_report(lp);
  return {static_cast<double>(s.n_vars) / horizon, static_cast<double>(s.n_constraints) / horizon,
          static_cast<double>(s.n_nonzeros) / horizon};
}

void table1(Outcome& o) {
  const auto hybrid = scale_horizon(hybrid_costed(), 1);
  const std::map<Approach, std::array<std::size_t, 3>> expected = {
      {Approach::ThreeBB4F, {8, 11, 18}}, {Approach::TwoBB2F, {6, 9, 16}}, {Approach::TwoBB1F, {5, 9, 13}}};
  for (Approach a : kAllApproaches) {
    const auto s = size_report(build_model(hybrid, a));
    o.note(fmt("%s (%zu, %zu, %zu)", std::string(to_string(a)).c_str(), s.n_vars, s.n_constraints, s.n_nonzeros));
    if (a == Approach::OneBB1F) {
      o.require(s.n_vars == 4 && s.n_constraints == 6 && s.n_nonzeros >= 8 && s.n_nonzeros <= 10,
                "1BB-1F expected (4, 6, 9+-1)");
    } else {
      const auto& e = expected.at(a);
      o.require(s.n_vars == e[0] && s.n_constraints == e[1] && s.n_nonzeros == e[2],
                fmt("%s expected (%zu, %zu, %zu)", std::string(to_string(a)).c_str(), e[0], e[1], e[2]));
    }
  }
}

void fidelity(Outcome& o) {
  std::vector<std::pair<std::string, EnergySystem>> systems;
  for (int T : {1, 24, 168}) systems.emplace_back(fmt("hybrid T=%d", T), scale_horizon(hybrid_costed(), T));
  for (int T : {24, 168}) systems.emplace_back(fmt("tri-area T=%d", T), scale_horizon(tri_area_case({1, 1}), T));
  for (const auto& [label, system] : systems) {
    std::vector<double> objectives;
    for (Approach a : kAllApproaches) {
      const auto r = solve_reference(build_model(system, a));
      o.require(r.status == SolveStatus::Optimal,
                label + " " + std::string(to_string(a)) + " " + std::string(to_string(r.status)));
      objectives.push_back(r.objective);
    }
    double worst = 0.0;
    for (double v : objectives) worst = std::max(worst, relative_gap(v, objectives[1]));
    o.require(worst <= 1e-6, label + fmt(" max relative gap %.3g", worst));
    o.note(label + fmt(" obj %.6f", objectives[1]));
  }
}

void reductions(Outcome& o) {
  const double paper_one[3] = {26, 35, 29}, paper_two[3] = {14, 18, 17};
  const char* names[3] = {"vars", "constraints", "nonzeros"};
  std::vector<std::array<double, 6>> by_horizon;
  for (int instance : {1, 2, 3}) {
    const auto system = tri_area_case({1, instance});
    const auto ref = size_report(build_model(system, Approach::TwoBB2F));
    const auto one = size_report(build_model(system, Approach::OneBB1F));
    const auto two = size_report(build_model(system, Approach::TwoBB1F));
    std::array<double, 6> red = {
        -percent_change(ref.n_vars, one.n_vars),        -percent_change(ref.n_constraints, one.n_constraints),
        -percent_change(ref.n_nonzeros, one.n_nonzeros), -percent_change(ref.n_vars, two.n_vars),
        -percent_change(ref.n_constraints, two.n_constraints), -percent_change(ref.n_nonzeros, two.n_nonzeros)};
    by_horizon.push_back(red);
    o.note(fmt("T=%d 1BB-1F %.1f/%.1f/%.1f%% 2BB-1F %.1f/%.1f/%.1f%%", instance_horizon(instance), red[0], red[1],
               red[2], red[3], red[4], red[5]));
  }
  const auto& r = by_horizon.front();
  for (int k = 0; k < 3; ++k) {
    o.require(std::abs(r[k] - paper_one[k]) <= 3.0, fmt("1BB-1F %s reduction %.1f%% vs %.0f%%", names[k], r[k], paper_one[k]));
    o.require(std::abs(r[k + 3] - paper_two[k]) <= 3.0,
              fmt("2BB-1F %s reduction %.1f%% vs %.0f%%", names[k], r[k + 3], paper_two[k]));
  }
  for (const auto& other : by_horizon)
    for (int k = 0; k < 6; ++k)
      o.require(std::abs(other[k] - r[k]) <= 0.5, fmt("reduction %d drifts with T (%.2f vs %.2f)", k, other[k], r[k]));
}

void scaling(Outcome& o) {
  const auto c1 = size_report(build_model(tri_area_case({1, 1}), Approach::TwoBB2F)).n_constraints;
  const auto c2 = size_report(build_model(tri_area_case({1, 2}), Approach::TwoBB2F)).n_constraints;
  o.note(fmt("instance 1: %zu, instance 2: %zu", c1, c2));
  o.require(c2 == 6 * c1, "count(instance 2) == 6 * count(instance 1)");
  std::vector<double> per;
  for (int T : {1, 24, 168, 672}) {
    const auto lp = build_model(scale_horizon(tri_area_case({1, 1}), T), Approach::TwoBB2F);
    per.push_back(per_step(lp, T).constraints);
  }
  for (double p : per) o.require(p == per.front(), fmt("per-timestep constraints %.3f vs %.3f", p, per.front()));
  o.note(fmt("%.0f constraints per timestep", per.front()));
}

void statistics(Outcome& o) {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> size(2, 12);
  std::normal_distribution<double> noise(0.0, 1.0);
  double worst_t = 0.0, worst_p = 0.0;
  const int samples = 200;
  for (int k = 0; k < samples; ++k) {
    std::vector<double> a(size(rng)), b(size(rng));
    const double shift = 0.5 * (k % 5);
    for (auto& v : a) v = 10.0 + noise(rng);
    for (auto& v : b) v = 10.0 + shift + 2.0 * noise(rng);
    const auto r = two_sample_t_test(a, b);
    const double t = oracle::pooled_t(a, b);
    const double p = oracle::t_two_sided_p(t, static_cast<double>(a.size() + b.size() - 2));
    worst_t = std::max(worst_t, std::abs(r.t_statistic - t));
    worst_p = std::max(worst_p, std::abs(r.p_value - p));
  }
  o.note(fmt("%d samples, max |dt| %.2g, max |dp| %.2g", samples, worst_t, worst_p));
  o.require(worst_t <= 1e-10, "t within 1e-10");
  o.require(worst_p <= 1e-8, "p within 1e-8");
  const std::vector<double> same = {1.5, 2.5, 4.0, 3.25};
  const auto r = two_sample_t_test(same, same);
  o.require(r.t_statistic == 0.0 && r.p_value == 1.0, "identical samples give t=0, p=1");
}

void solver_oracle(Outcome& o) {
  if (!oracle::highs_available()) {
    o.require(false, "external solver (python3 + scipy HiGHS) unavailable");
    return;
  }
  const auto spec = load_solver_spec(oracle::highs_spec());
  double worst = 0.0;
  std::size_t violations = 0;
  for (int k = 0; k < 20; ++k) {
    const auto system = scale_horizon(tri_area_case({static_cast<std::uint64_t>(k + 1), 1}), 24);
    const Approach a = kAllApproaches[static_cast<std::size_t>(k) % 4];
    const auto lp = build_model(system, a);
    const auto ours = solve_reference(lp);
    const auto theirs = solve_external(lp, spec, static_cast<std::uint64_t>(k + 1));
    if (ours.status != SolveStatus::Optimal || theirs.status != SolveStatus::Optimal) {
      o.require(false, fmt("variant %d not optimal in both solvers", k + 1));
      continue;
    }
    worst = std::max(worst, relative_gap(ours.objective, theirs.objective));
    violations += check_primal(lp, ours.primal, 1e-7).size();
  }
  o.note(fmt("20 variants, max relative gap %.3g, %zu primal violations", worst, violations));
  o.require(worst <= 1e-6, "objectives within 1e-6");
  o.require(violations == 0, "check_primal clean at 1e-7");
}

void speedup(Outcome& o) {
  BenchConfig c;
  c.approaches = {Approach::TwoBB2F, Approach::OneBB1F};
  c.instances = {{1, 1000}};
  c.n_seeds = 10;
  c.case_kind = BenchCase::TriArea;
  try {
    const auto report = run_benchmark(c);
    for (const auto& row : report.speedups)
      if (row.approach == Approach::OneBB1F) {
        o.note(fmt("median build speedup %.3f, solve speedup %.3f", row.median_build_speedup,
                   row.median_solve_speedup));
        o.require(row.median_build_speedup >= 1.0, "build speedup >= 1");
        o.require(row.median_solve_speedup >= 1.0, "solve speedup >= 1");
      }
    for (const auto& t : report.ttests) o.note(fmt("t=%.3f p=%.3g", t.result.t_statistic, t.result.p_value));
  } catch (const Error& e) {
    o.require(e.code() != ErrorCode::ObjectiveMismatch, "ObjectiveMismatch guard fired");
    throw;
  }
}

EnergySystem dc_ring() {
  EnergySystem s(1);
  Asset g;
  g.id = "g";
  g.kind = AssetKind::Producer;
  g.capacity_mw = 500;
  s = add_asset(s, g);
  for (auto [id, d] : {std::pair{"a", 0.0}, {"b", 60.0}, {"c", 30.0}}) {
    Asset n;
    n.id = id;
    n.kind = AssetKind::Consumer;
    n.initial_units = 0;
    n.demand_profile = {d};
    n.voltage_angle_enabled = true;
    s = add_asset(s, n);
  }
  FlowArc feed{"g", "a"};
  feed.op_cost = 1;
  s = add_flow(s, feed);
  for (auto [from, to] : {std::pair{"a", "b"}, {"b", "c"}, {"c", "a"}}) {
    FlowArc l{from, to};
    l.two_sided = true;
    l.max_fwd_mw = 1000;
    l.max_bwd_mw = 1000;
    l.dc = DcFlowParams{0.2, 100};
    s = add_flow(s, l);
  }
  return s;
}

EnergySystem uc_case() {
  EnergySystem s(2);
  Asset g;
  g.id = "g";
  g.kind = AssetKind::Producer;
  g.capacity_mw = 100;
  g.min_capacity_mw = 30;
  g.uc_enabled = true;
  s = add_asset(s, g);
  Asset peaker;
  peaker.id = "peaker";
  peaker.kind = AssetKind::Producer;
  peaker.capacity_mw = 200;
  s = add_asset(s, peaker);
  Asset d;
  d.id = "d";
  d.kind = AssetKind::Consumer;
  d.initial_units = 0;
  d.demand_profile = {80, 20};
  s = add_asset(s, d);
  FlowArc cheap{"g", "d"};
  cheap.op_cost = 1;
  FlowArc dear{"peaker", "d"};
  dear.op_cost = 5;
  s = add_flow(s, cheap);
  return add_flow(s, dear);
}

void annex(Outcome& o) {
  const auto ring = dc_ring();
  const auto r = solve_reference(build_model(ring, Approach::OneBB1F, {true, false}));
  o.require(r.status == SolveStatus::Optimal, "DC ring optimal");
  if (r.status == SolveStatus::Optimal) {
    ModelContext ctx(ring, {true, false});
    const double b = 100 / 0.2;
    const auto theta = oracle::dense_solve({2 * b, -b, -b, 2 * b}, {-60.0, -30.0}, 2);
    const double th[3] = {0.0, theta[0], theta[1]};
    const double expected[3] = {b * (th[0] - th[1]), b * (th[1] - th[2]), b * (th[2] - th[0])};
    const std::pair<const char*, const char*> lines[3] = {{"a", "b"}, {"b", "c"}, {"c", "a"}};
    double worst = 0.0;
    for (int k = 0; k < 3; ++k)
      worst = std::max(worst, std::abs(r.primal[*ctx.flow(lines[k].first, lines[k].second, 1)] - expected[k]));
    o.note(fmt("DC ring max flow error %.2g", worst));
    o.require(worst <= 1e-9, "DC flows within 1e-9 of the dense solve");
  }

  const auto uc = uc_case();
  const auto lp = build_model(uc, Approach::OneBB1F, {false, true});
  ModelContext ctx(uc, {false, true});
  const auto relaxed = solve_reference(lp);
  o.require(relaxed.status == SolveStatus::Optimal, "UC relaxation optimal");
  if (relaxed.status == SolveStatus::Optimal)
    for (int t = 1; t <= 2; ++t) {
      const double u = relaxed.primal[*ctx.units_on("g", t)];
      const double out = relaxed.primal[*ctx.flow("g", "d", t)];
      o.require(out >= -1e-9 && out <= 100 * u + 1e-7, fmt("0 <= out <= P*u at t=%d", t));
    }
  auto off = lp;
  for (int t = 1; t <= 2; ++t) {
    auto& v = off.mutable_variables()[*ctx.units_on("g", t)];
    v.lower = v.upper = 0.0;
  }
  const auto forced = solve_reference(off);
  o.require(forced.status == SolveStatus::Optimal, "UC with u=0 optimal");
  if (forced.status == SolveStatus::Optimal)
    for (int t = 1; t <= 2; ++t)
      o.require(std::abs(forced.primal[*ctx.flow("g", "d", t)]) <= 1e-9, fmt("u=0 forces zero flow at t=%d", t));
}

void round_trip(Outcome& o) {
  const auto system = scale_horizon(tri_area_case({1, 1}), 24);
  for (Approach a : kAllApproaches) {
    const auto lp = build_model(system, a);
    std::stringstream buffer;
    write_mps(lp, buffer);
    const auto shape = oracle::read_mps_shape(buffer);
    std::size_t nonzeros = 0;
    for (const auto& row : lp.rows()) nonzeros += row.size();
    const std::string name(to_string(a));
    o.require(shape.columns == lp.num_vars(), name + " column count");
    o.require(shape.rows == lp.num_rows(), name + " row count");
    o.require(shape.nonzeros == nonzeros, name + " nonzero count");
    o.require(shape.has_endata, name + " ENDATA");
    o.note(fmt("%s %zu/%zu/%zu", name.c_str(), shape.columns, shape.rows, shape.nonzeros));
  }
}

struct Criterion {
  int id;
  const char* title;
  double budget_s;  // 0: no runtime budget
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "per-timestep sizes of the hybrid plant", 1.0, table1},
      {2, "fidelity equivalence", 120.0, fidelity},
      {3, "tri-area reduction structure", 60.0, reductions},
      {4, "scaling arithmetic", 0.0, scaling},
      {5, "statistics oracle", 0.0, statistics},
      {6, "solver oracle", 0.0, solver_oracle},
      {7, "directional speedup", 600.0, speedup},
      {8, "DC power flow and unit commitment", 0.0, annex},
      {9, "MPS round-trip", 0.0, round_trip},
  };
  std::vector<int> selected;
  for (int k = 1; k < argc; ++k) selected.push_back(std::atoi(argv[k]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0) o.require(elapsed < c.budget_s, fmt("runtime %.2f s over budget %.0f s", elapsed, c.budget_s));
    if (!o.pass) ++failures;
    std::cout << "criterion " << c.id << ": " << (o.pass ? "PASS" : "FAIL") << " " << c.title
              << fmt(" (%.2f s)", elapsed) << "\n";
    for (const auto& n : o.notes) std::cout << "    " << n << "\n";
    std::cout.flush();
  }
  return failures == 0 ? 0 : 1;
}
