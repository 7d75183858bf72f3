#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <mutex>

#include "flowgraph/error.hpp"
#include "flowgraph/mps.hpp"
#include "flowgraph/solver.hpp"

extern char** environ;

namespace flowgraph {

namespace {

std::mutex& external_mutex() {
  static std::mutex mutex;
  return mutex;
}

void replace_all(std::string& text, std::string_view key, const std::string& value) {
  for (std::size_t at = text.find(key); at != std::string::npos; at = text.find(key, at + value.size()))
    text.replace(at, key.size(), value);
}

}  // namespace

ExternalSolverSpec load_solver_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open solver spec " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, "solver spec " + path.string() + ": " + e.what());
  }
  ExternalSolverSpec spec;
  try {
    spec.executable = doc.at("executable").get<std::string>();
    spec.arguments = doc.value("arguments", std::vector<std::string>{});
    spec.seed_parameter = doc.value("seed_parameter", std::string{});
    if (doc.contains("work_dir")) spec.work_dir = doc.at("work_dir").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, "solver spec " + path.string() + ": " + e.what());
  }
  const bool has_input = std::any_of(spec.arguments.begin(), spec.arguments.end(),
                                     [](const std::string& a) { return a.find("{input}") != std::string::npos; });
  const bool has_output = std::any_of(spec.arguments.begin(), spec.arguments.end(),
                                      [](const std::string& a) { return a.find("{output}") != std::string::npos; });
  if (!has_input || !has_output)
    throw Error(ErrorCode::InvariantViolation, "solver spec arguments need {input} and {output} placeholders");
  if (spec.executable.find('/') != std::string::npos && std::filesystem::path(spec.executable).is_relative())
    spec.executable = (path.parent_path() / spec.executable).lexically_normal().string();
  return spec;
}

SolveResult solve_external(const LpInstance& instance, const ExternalSolverSpec& spec, std::uint64_t seed) {
  std::lock_guard lock(external_mutex());
  static std::atomic<unsigned> counter{0};

  const auto dir = spec.work_dir.empty() ? std::filesystem::temp_directory_path() : spec.work_dir;
  const std::string stem = "flowgraph_" + std::to_string(::getpid()) + "_" + std::to_string(counter++);
  const auto input = dir / (stem + ".mps");
  const auto output = dir / (stem + ".sol");
  std::filesystem::remove(output);
  write_mps(instance, input);

  std::vector<std::string> args{spec.executable};
  for (std::string arg : spec.arguments) {
    if (arg == "{seed_param}" && spec.seed_parameter.empty()) continue;
    replace_all(arg, "{seed_param}", spec.seed_parameter + "=" + std::to_string(seed));
    replace_all(arg, "{input}", input.string());
    replace_all(arg, "{output}", output.string());
    replace_all(arg, "{seed}", std::to_string(seed));
    args.push_back(std::move(arg));
  }
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  const bool search_path = spec.executable.find('/') == std::string::npos;
  if (!search_path && !std::filesystem::exists(spec.executable))
    throw Error(ErrorCode::SolverLaunchFailure, "solver executable " + spec.executable + " does not exist");

  const auto start = std::chrono::steady_clock::now();
  pid_t pid = 0;
  const int rc = search_path ? posix_spawnp(&pid, spec.executable.c_str(), nullptr, nullptr, argv.data(), environ)
                             : posix_spawn(&pid, spec.executable.c_str(), nullptr, nullptr, argv.data(), environ);
  if (rc != 0)
    throw Error(ErrorCode::SolverLaunchFailure, "cannot start " + spec.executable + ": " + std::strerror(rc));
  int status = 0;
  while (waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) throw Error(ErrorCode::SolverLaunchFailure, "waitpid failed: " + std::string(std::strerror(errno)));
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::filesystem::remove(input);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    // exec failures inside the child surface as exit code 127
    if (WIFEXITED(status) && WEXITSTATUS(status) == 127)
      throw Error(ErrorCode::SolverLaunchFailure, spec.executable + " could not be executed");
    throw Error(ErrorCode::NonzeroExit, spec.executable + " exited with status " +
                                            std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1));
  }
  if (!std::filesystem::exists(output))
    throw Error(ErrorCode::ParseError, "solver left no solution file at " + output.string());
  SolveResult result = read_solution(output, instance);
  std::filesystem::remove(output);
  result.wall_time_s = elapsed;
  return result;
}

}  // namespace flowgraph
