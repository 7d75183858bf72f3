#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flowgraph/approach.hpp"
#include "flowgraph/solver.hpp"
#include "flowgraph/stats.hpp"

namespace flowgraph {

enum class BenchCase { TriArea, Hybrid };

/// One benchmark instance: a tri-area instance id, optionally with its
/// horizon overridden for desk-scale runs. Labels are "1".."6" for full
/// instances and "T<horizon>" otherwise.
struct BenchInstance {
  int instance = 1;
  std::optional<int> horizon;

  std::string label() const;
  int effective_horizon() const;
};

struct BenchConfig {
  std::vector<Approach> approaches;
  std::vector<BenchInstance> instances;
  int n_seeds = 30;
  Approach reference = Approach::TwoBB2F;
  std::optional<ExternalSolverSpec> external;  // empty: reference simplex
  double alpha = 0.05;
  BenchCase case_kind = BenchCase::TriArea;
  std::uint64_t case_seed = 1;  // profile seed of the generated case
  SimplexOptions simplex;

  /// Throws InvariantViolation unless the reference is benchmarked, there is
  /// at least one instance and n_seeds >= 2.
  void check() const;
};

/// Parses the JSON form
/// `{"approaches": [...], "instances": [1, {"instance": 1, "T": 1000}],
///   "n_seeds": 30, "reference": "2BB-2F", "solver": {"kind": "reference"},
///   "alpha": 0.05}`.
/// Also accepted: "horizons": [T...] (instance 1 at each T), "case":
/// "tri-area" | "hybrid", "case_seed", and "solver": {"kind": "external",
/// "spec": "<path>"} with the path resolved against `base_dir`.
/// Throws ParseError.
BenchConfig parse_bench_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
BenchConfig load_bench_config(const std::filesystem::path& path);

struct TimingSample {
  Approach approach = Approach::TwoBB2F;
  std::string instance;
  std::uint64_t seed = 0;
  double build_time_s = 0.0;
  double solve_time_s = 0.0;
  double objective = 0.0;
};

struct SpeedupRow {
  Approach approach = Approach::TwoBB2F;
  std::string instance;
  double median_build_speedup = 1.0;
  double median_solve_speedup = 1.0;
};

/// Solve-time comparison of `approach` against the reference.
struct TTestRow {
  Approach approach = Approach::TwoBB2F;
  std::string instance;
  TTestResult result;
};

struct BenchReport {
  Approach reference = Approach::TwoBB2F;
  std::vector<TimingSample> samples;
  std::vector<SpeedupRow> speedups;
  std::vector<TTestRow> ttests;
};

/// Runs every (instance, seed, approach) build and solve sequentially. Each
/// approach gets one untimed warm-up build per instance. With the reference
/// simplex the seed shuffles the column order before solving; an external
/// solver receives it as its seed parameter.
///
/// Throws ObjectiveMismatch when an approach's optimum differs from the
/// reference's by more than 1e-6 relative, and SolverFailure for non-optimal
/// solves. `progress`, when set, sees each sample as it is recorded.
BenchReport run_benchmark(const BenchConfig& config,
                          const std::function<void(const TimingSample&)>& progress = {});

/// Writes samples.csv, speedups.csv and ttests.csv into `dir`, creating it if
/// needed. Throws InvariantViolation for an empty report and IoFailure.
void write_report(const BenchReport& report, const std::filesystem::path& dir);

}  // namespace flowgraph
