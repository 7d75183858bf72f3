#include "flowgraph/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <map>
#include <numeric>
#include <random>

#include "flowgraph/casegen.hpp"
#include "flowgraph/error.hpp"
#include "flowgraph/model_builder.hpp"
#include "flowgraph/mps.hpp"

namespace flowgraph {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Approach approach_from(const nlohmann::json& value) {
  const auto text = value.get<std::string>();
  const auto approach = parse_approach(text);
  if (!approach) throw Error(ErrorCode::ParseError, "unknown approach '" + text + "'");
  return *approach;
}

EnergySystem bench_system(const BenchConfig& config, const BenchInstance& instance) {
  if (config.case_kind == BenchCase::Hybrid) return scale_horizon(hybrid_costed(), instance.effective_horizon());
  EnergySystem system = tri_area_case({config.case_seed, instance.instance});
  if (instance.horizon) system = scale_horizon(system, *instance.horizon);
  return system;
}

SolveResult timed_solve(const BenchConfig& config, const LpInstance& lp, std::uint64_t seed, double& seconds) {
  if (config.external) {
    const auto start = Clock::now();
    SolveResult result = solve_external(lp, *config.external, seed);
    seconds = seconds_since(start);
    return result;
  }
  std::vector<std::size_t> perm(lp.num_vars());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  const LpInstance shuffled = lp.permuted_columns(perm);
  const auto start = Clock::now();
  SolveResult result = solve_reference(shuffled, config.simplex);
  seconds = seconds_since(start);
  return result;
}

bool objectives_match(double a, double b) { return std::abs(a - b) <= 1e-6 * std::max(1.0, std::abs(b)); }

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  return out;
}

}  // namespace

std::string BenchInstance::label() const {
  return horizon ? "T" + std::to_string(*horizon) : std::to_string(instance);
}

int BenchInstance::effective_horizon() const { return horizon ? *horizon : instance_horizon(instance); }

void BenchConfig::check() const {
  if (std::find(approaches.begin(), approaches.end(), reference) == approaches.end())
    throw Error(ErrorCode::InvariantViolation, "reference approach must be among the benchmarked approaches");
  if (instances.empty()) throw Error(ErrorCode::InvariantViolation, "no benchmark instances");
  if (n_seeds < 2) throw Error(ErrorCode::InvariantViolation, "n_seeds must be at least 2");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvariantViolation, "alpha must lie in (0, 1)");
  for (const auto& i : instances) {
    if (i.instance < 1 || i.instance > 6) throw Error(ErrorCode::InvariantViolation, "instance ids run from 1 to 6");
    if (i.horizon && *i.horizon < 1) throw Error(ErrorCode::InvariantViolation, "horizon must be positive");
  }
}

BenchConfig parse_bench_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  BenchConfig config;
  try {
    const auto doc = nlohmann::json::parse(json_text);
    for (const auto& a : doc.at("approaches")) config.approaches.push_back(approach_from(a));
    if (doc.contains("instances")) {
      for (const auto& i : doc.at("instances")) {
        if (i.is_number_integer()) {
          config.instances.push_back({i.get<int>(), std::nullopt});
        } else {
          BenchInstance bi{i.value("instance", 1), std::nullopt};
          if (i.contains("T")) bi.horizon = i.at("T").get<int>();
          config.instances.push_back(bi);
        }
      }
    }
    if (doc.contains("horizons"))
      for (const auto& t : doc.at("horizons")) config.instances.push_back({1, t.get<int>()});
    config.n_seeds = doc.value("n_seeds", 30);
    if (doc.contains("reference")) config.reference = approach_from(doc.at("reference"));
    config.alpha = doc.value("alpha", 0.05);
    config.case_seed = doc.value("case_seed", std::uint64_t{1});
    const std::string case_name = doc.value("case", std::string{"tri-area"});
    if (case_name == "hybrid") {
      config.case_kind = BenchCase::Hybrid;
    } else if (case_name != "tri-area") {
      throw Error(ErrorCode::ParseError, "unknown bench case '" + case_name + "'");
    }
    if (doc.contains("solver")) {
      const auto& solver = doc.at("solver");
      const std::string kind = solver.value("kind", std::string{"reference"});
      if (kind == "external") {
        std::filesystem::path spec = solver.at("spec").get<std::string>();
        if (spec.is_relative() && !base_dir.empty()) spec = base_dir / spec;
        config.external = load_solver_spec(spec);
      } else if (kind != "reference") {
        throw Error(ErrorCode::ParseError, "unknown solver kind '" + kind + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bench config: ") + e.what());
  }
  return config;
}

BenchConfig load_bench_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open bench config " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_bench_config(text, path.parent_path());
}

BenchReport run_benchmark(const BenchConfig& config, const std::function<void(const TimingSample&)>& progress) {
  config.check();
  BenchReport report;
  report.reference = config.reference;

  // Reference first so every other objective has something to be checked against.
  std::vector<Approach> order{config.reference};
  for (Approach a : config.approaches)
    if (a != config.reference && std::find(order.begin(), order.end(), a) == order.end()) order.push_back(a);

  for (const auto& instance : config.instances) {
    const EnergySystem system = bench_system(config, instance);
    const std::string label = instance.label();
    std::map<Approach, std::vector<double>> build, solve;

    for (Approach a : order) (void)build_model(system, a);  // warm-up

    for (int s = 1; s <= config.n_seeds; ++s) {
      const auto seed = static_cast<std::uint64_t>(s);
      double reference_objective = 0.0;
      for (Approach a : order) {
        TimingSample sample{a, label, seed, 0.0, 0.0, 0.0};
        const auto start = Clock::now();
        const LpInstance lp = build_model(system, a);
        sample.build_time_s = seconds_since(start);

        const SolveResult result = timed_solve(config, lp, seed, sample.solve_time_s);
        if (result.status != SolveStatus::Optimal)
          throw Error(ErrorCode::SolverFailure, std::string(to_string(a)) + " on instance " + label + ", seed " +
                                                    std::to_string(seed) + ": " +
                                                    std::string(to_string(result.status)));
        sample.objective = result.objective;
        if (a == config.reference) {
          reference_objective = result.objective;
        } else if (!objectives_match(result.objective, reference_objective)) {
          throw Error(ErrorCode::ObjectiveMismatch,
                      std::string(to_string(a)) + " objective " + format_double(result.objective) + " vs " +
                          std::string(to_string(config.reference)) + " " + format_double(reference_objective) +
                          " on instance " + label + ", seed " + std::to_string(seed));
        }
        build[a].push_back(sample.build_time_s);
        solve[a].push_back(sample.solve_time_s);
        if (progress) progress(sample);
        report.samples.push_back(std::move(sample));
      }
    }

    for (Approach a : config.approaches) {
      report.speedups.push_back({a, label, median_speedup(build[config.reference], build[a]),
                                 median_speedup(solve[config.reference], solve[a])});
      if (a == config.reference) continue;
      TTestRow row{a, label, {}};
      try {
        row.result = two_sample_t_test(solve[a], solve[config.reference], config.alpha);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateVariance) throw;
        row.result = {0.0, 1.0, solve[a].size() + solve[config.reference].size() - 2, false};
      }
      report.ttests.push_back(std::move(row));
    }
  }
  return report;
}

void write_report(const BenchReport& report, const std::filesystem::path& dir) {
  if (report.samples.empty()) throw Error(ErrorCode::InvariantViolation, "empty bench report");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string() + ": " + ec.message());

  auto samples = open_csv(dir / "samples.csv");
  samples << "approach,instance,seed,build_time_s,solve_time_s,objective\n";
  for (const auto& s : report.samples)
    samples << to_string(s.approach) << ',' << s.instance << ',' << s.seed << ',' << format_double(s.build_time_s)
            << ',' << format_double(s.solve_time_s) << ',' << format_double(s.objective) << '\n';

  auto speedups = open_csv(dir / "speedups.csv");
  speedups << "approach,instance,median_build_speedup,median_solve_speedup\n";
  for (const auto& s : report.speedups)
    speedups << to_string(s.approach) << ',' << s.instance << ',' << format_double(s.median_build_speedup) << ','
             << format_double(s.median_solve_speedup) << '\n';

  auto ttests = open_csv(dir / "ttests.csv");
  ttests << "approach,instance,t,p,reject\n";
  for (const auto& t : report.ttests)
    ttests << to_string(t.approach) << ',' << t.instance << ',' << format_double(t.result.t_statistic) << ','
           << format_double(t.result.p_value) << ',' << (t.result.reject_null ? "true" : "false") << '\n';

  for (auto* out : {&samples, &speedups, &ttests}) {
    out->flush();
    if (!*out) throw Error(ErrorCode::IoFailure, "write failed in " + dir.string());
  }
}

}  // namespace flowgraph
