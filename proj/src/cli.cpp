#include "flowgraph/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "flowgraph/bench.hpp"
#include "flowgraph/casegen.hpp"
#include "flowgraph/csv_io.hpp"
#include "flowgraph/error.hpp"
#include "flowgraph/model_builder.hpp"
#include "flowgraph/mps.hpp"
#include "flowgraph/solver.hpp"

namespace flowgraph {

namespace {

// Bad flag values detected after CLI11 parsing; reported like parse errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string case_name = "hybrid";
  std::string approach = "2BB-2F";
  std::string approaches = "3BB-4F,2BB-2F,2BB-1F,1BB-1F";
  int instance = 1;
  int horizon = 0;  // 0: keep the case's own horizon
  std::string solver = "reference";
  std::uint64_t seed = 1;
  std::string out;
  std::string mps;
  std::string config;
  std::string bundle;
  bool uc = false;
  bool dc_opf = false;
  bool solve = false;
};

Approach approach_of(const std::string& text) {
  const auto a = parse_approach(text);
  if (!a) throw UsageError("unknown approach '" + text + "' (expected 3BB-4F, 2BB-2F, 2BB-1F or 1BB-1F)");
  return *a;
}

std::vector<Approach> approach_list(const std::string& text) {
  std::vector<Approach> list;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) list.push_back(approach_of(item));
  if (list.empty()) throw UsageError("--approaches needs at least one approach");
  return list;
}

EnergySystem load_case(const Options& o) {
  EnergySystem system;
  if (o.case_name == "hybrid") {
    system = hybrid_costed();
  } else if (o.case_name == "tri-area") {
    if (o.instance < 1 || o.instance > 6) throw UsageError("--instance must be between 1 and 6");
    system = tri_area_case({o.seed, o.instance});
  } else if (o.case_name.starts_with("csv:")) {
    system = read_case_csv(o.case_name.substr(4));
    const auto diagnostics = validate_structure(system);
    if (error_count(diagnostics) > 0)
      throw Error(ErrorCode::InvariantViolation, "case bundle has errors; run 'validate' for details");
  } else {
    throw UsageError("unknown case '" + o.case_name + "' (expected hybrid, tri-area or csv:<dir>)");
  }
  if (o.horizon < 0) throw UsageError("--T must be positive");
  if (o.horizon > 0) system = scale_horizon(system, o.horizon);
  return system;
}

Extensions extensions_of(const Options& o) { return {o.dc_opf, o.uc}; }

// Resolves the --solver flag; std::nullopt selects the reference simplex.
std::optional<ExternalSolverSpec> solver_of(const Options& o) {
  if (o.solver == "reference") return std::nullopt;
  if (o.solver == "external" || o.solver.starts_with("external:")) {
    std::string path = o.solver.size() > 9 ? o.solver.substr(9) : std::string{};
    if (path.empty()) {
      const char* env = std::getenv("FLOWGRAPH_SOLVER");
      if (!env || !*env) throw UsageError("--solver external needs a spec path or FLOWGRAPH_SOLVER");
      path = env;
    }
    return load_solver_spec(path);
  }
  throw UsageError("unknown solver '" + o.solver + "' (expected reference or external:<spec.json>)");
}

SolveResult solve_with(const std::optional<ExternalSolverSpec>& external, const LpInstance& lp, std::uint64_t seed) {
  return external ? solve_external(lp, *external, seed) : solve_reference(lp);
}

std::string percent(std::size_t reference, std::size_t candidate) {
  std::ostringstream s;
  s << std::showpos << std::fixed << std::setprecision(1) << percent_change(reference, candidate) << '%';
  return s.str();
}

void print_size(std::ostream& out, const std::string& label, const ModelSize& size) {
  out << label << ": vars " << size.n_vars << ", constraints " << size.n_constraints << ", nonzeros "
      << size.n_nonzeros << '\n';
}

int cmd_build(const Options& o, std::ostream& out) {
  const Approach approach = approach_of(o.approach);
  const EnergySystem system = load_case(o);
  const LpInstance lp = build_model(system, approach, extensions_of(o));
  print_size(out, std::string(to_string(approach)), size_report(lp));
  if (!o.out.empty()) {
    std::filesystem::path path = o.out;
    if (path.extension() != ".mps") {
      std::filesystem::create_directories(path);
      path /= std::string(to_string(approach)) + ".mps";
    }
    write_mps(lp, path);
    out << "wrote " << path.string() << '\n';
  }
  return 0;
}

int cmd_solve(const Options& o, std::ostream& out, std::ostream& err) {
  const auto external = solver_of(o);
  LpInstance lp;
  std::string label;
  if (!o.mps.empty()) {
    lp = read_mps(std::filesystem::path(o.mps));
    label = o.mps;
  } else {
    const Approach approach = approach_of(o.approach);
    lp = build_model(load_case(o), approach, extensions_of(o));
    label = std::string(to_string(approach));
  }
  const SolveResult result = solve_with(external, lp, o.seed);
  out << label << ": " << to_string(result.status);
  if (result.status == SolveStatus::Optimal) out << ", objective " << format_double(result.objective);
  out << ", iterations " << result.iterations << ", time " << std::fixed << std::setprecision(3)
      << result.wall_time_s << " s" << std::defaultfloat << '\n';
  for (const auto& w : result.warnings) err << "warning: " << w << '\n';
  if (!o.out.empty()) {
    std::ofstream file(o.out);
    if (!file) throw Error(ErrorCode::IoFailure, "cannot write " + o.out);
    write_solution(result, lp, file);
  }
  return result.status == SolveStatus::Optimal ? 0 : 1;
}

int cmd_compare(const Options& o, std::ostream& out) {
  const auto approaches = approach_list(o.approaches);
  const auto external = o.solve ? solver_of(o) : std::nullopt;
  const EnergySystem system = load_case(o);
  const Approach reference =
      std::find(approaches.begin(), approaches.end(), Approach::TwoBB2F) != approaches.end() ? Approach::TwoBB2F
                                                                                              : approaches.front();
  std::vector<ModelSize> sizes;
  std::vector<LpInstance> instances;
  for (Approach a : approaches) {
    instances.push_back(build_model(system, a, extensions_of(o)));
    sizes.push_back(size_report(instances.back()));
  }
  const auto ref_index =
      static_cast<std::size_t>(std::find(approaches.begin(), approaches.end(), reference) - approaches.begin());
  const ModelSize& ref = sizes[ref_index];

  out << "case " << o.case_name << ", T = " << system.horizon() << ", reference " << to_string(reference) << '\n';
  out << std::left << std::setw(8) << "approach" << std::right << std::setw(12) << "vars" << std::setw(13)
      << "constraints" << std::setw(12) << "nonzeros" << std::setw(9) << "d_vars" << std::setw(9) << "d_cons"
      << std::setw(9) << "d_nnz";
  if (o.solve) out << std::setw(20) << "objective";
  out << '\n';

  std::vector<SolveResult> results;
  for (std::size_t k = 0; k < approaches.size(); ++k) {
    const ModelSize& s = sizes[k];
    out << std::left << std::setw(8) << to_string(approaches[k]) << std::right << std::setw(12) << s.n_vars
        << std::setw(13) << s.n_constraints << std::setw(12) << s.n_nonzeros << std::setw(9)
        << percent(ref.n_vars, s.n_vars) << std::setw(9) << percent(ref.n_constraints, s.n_constraints)
        << std::setw(9) << percent(ref.n_nonzeros, s.n_nonzeros);
    if (o.solve) {
      results.push_back(solve_with(external, instances[k], o.seed));
      const auto& r = results.back();
      out << std::setw(20)
          << (r.status == SolveStatus::Optimal ? format_double(r.objective) : std::string(to_string(r.status)));
    }
    out << '\n';
  }
  if (!o.solve) return 0;

  bool equal = std::all_of(results.begin(), results.end(),
                           [](const SolveResult& r) { return r.status == SolveStatus::Optimal; });
  const double ref_obj = results[ref_index].objective;
  for (const auto& r : results)
    equal = equal && std::abs(r.objective - ref_obj) <= 1e-6 * std::max(1.0, std::abs(ref_obj));
  out << "objectives equal (1e-6 relative): " << (equal ? "yes" : "NO") << '\n';
  return equal ? 0 : 1;
}

int cmd_bench(const Options& o, std::ostream& out) {
  BenchConfig config = load_bench_config(o.config);
  if (o.solver != "reference") config.external = solver_of(o);
  const std::string dir = o.out.empty() ? "bench_out" : o.out;
  const BenchReport report = run_benchmark(config, [&](const TimingSample& s) {
    out << to_string(s.approach) << " instance " << s.instance << " seed " << s.seed << ": build "
        << format_double(s.build_time_s) << " s, solve " << format_double(s.solve_time_s) << " s, objective "
        << format_double(s.objective) << '\n';
  });
  write_report(report, dir);
  out << "median speedups vs " << to_string(report.reference) << ":\n";
  for (const auto& s : report.speedups)
    out << "  " << to_string(s.approach) << " instance " << s.instance << ": build "
        << format_double(s.median_build_speedup) << ", solve " << format_double(s.median_solve_speedup) << '\n';
  for (const auto& t : report.ttests)
    out << "  t-test " << to_string(t.approach) << " instance " << t.instance << ": t "
        << format_double(t.result.t_statistic) << ", p " << format_double(t.result.p_value)
        << (t.result.reject_null ? " (reject)" : "") << '\n';
  out << "wrote " << dir << "/samples.csv, speedups.csv, ttests.csv\n";
  return 0;
}

int cmd_export(const Options& o, std::ostream& out) {
  if (o.out.empty()) throw UsageError("export-case needs --out <dir>");
  write_case_csv(load_case(o), o.out);
  out << "wrote case bundle to " << o.out << '\n';
  return 0;
}

int cmd_validate(const Options& o, std::ostream& out) {
  std::string dir = o.bundle;
  if (dir.empty() && o.case_name.starts_with("csv:")) dir = o.case_name.substr(4);
  if (dir.empty()) throw UsageError("validate needs a bundle directory (positional or --case csv:<dir>)");
  const EnergySystem system = read_case_csv(dir);
  const auto diagnostics = validate(system);
  for (const auto& d : diagnostics)
    out << (d.severity == Severity::Error ? "error" : "warning") << ": " << d.entity << ": " << d.message << '\n';
  const std::size_t errors = error_count(diagnostics);
  out << errors << " error(s), " << diagnostics.size() - errors << " warning(s)\n";
  return errors == 0 ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"flowgraph: build, compare and benchmark energy-system LP formulations"};
  app.require_subcommand(1, 1);
  Options o;

  const auto add_case = [&](CLI::App* cmd) {
    cmd->add_option("--case", o.case_name, "hybrid | tri-area | csv:<dir>")->capture_default_str();
    cmd->add_option("--instance", o.instance, "tri-area instance 1..6")->capture_default_str();
    cmd->add_option("--T", o.horizon, "override the horizon (hours)");
    cmd->add_option("--seed", o.seed, "case generator and solver seed")->capture_default_str();
    cmd->add_flag("--uc", o.uc, "unit commitment rows for uc assets");
    cmd->add_flag("--dc-opf", o.dc_opf, "DC power-flow rows for dc flows");
  };
  const auto add_solver = [&](CLI::App* cmd) {
    cmd->add_option("--solver", o.solver, "reference | external[:<spec.json>]")->capture_default_str();
  };

  auto* build = app.add_subcommand("build", "build one formulation, report its size, optionally write MPS");
  add_case(build);
  build->add_option("--approach", o.approach, "3BB-4F | 2BB-2F | 2BB-1F | 1BB-1F")->capture_default_str();
  build->add_option("--out", o.out, "MPS file or directory");

  auto* solve = app.add_subcommand("solve", "solve a case formulation or an MPS file");
  add_case(solve);
  add_solver(solve);
  solve->add_option("--approach", o.approach, "formulation to build")->capture_default_str();
  solve->add_option("--mps", o.mps, "solve this MPS file instead of a case");
  solve->add_option("--out", o.out, "solution file");

  auto* compare = app.add_subcommand("compare", "size table across formulations, optionally with solves");
  add_case(compare);
  add_solver(compare);
  compare->add_option("--approaches", o.approaches, "comma-separated list")->capture_default_str();
  compare->add_flag("--solve", o.solve, "solve every formulation and check objective equality");

  auto* bench = app.add_subcommand("bench", "timing benchmark from a JSON config");
  bench->add_option("config", o.config, "bench config JSON")->required();
  add_solver(bench);
  bench->add_option("--out", o.out, "report directory (default bench_out)");

  auto* export_case = app.add_subcommand("export-case", "write a generated case as a CSV bundle");
  add_case(export_case);
  export_case->add_option("--out", o.out, "bundle directory");

  auto* validate_cmd = app.add_subcommand("validate", "check a CSV bundle and list diagnostics");
  validate_cmd->add_option("bundle", o.bundle, "bundle directory");
  validate_cmd->add_option("--case", o.case_name, "csv:<dir>");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return 2;
  }

  try {
    if (build->parsed()) return cmd_build(o, out);
    if (solve->parsed()) return cmd_solve(o, out, err);
    if (compare->parsed()) return cmd_compare(o, out);
    if (bench->parsed()) return cmd_bench(o, out);
    if (export_case->parsed()) return cmd_export(o, out);
    if (validate_cmd->parsed()) return cmd_validate(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace flowgraph
