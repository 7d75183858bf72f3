#include "flowgraph/solution.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "flowgraph/error.hpp"
#include "flowgraph/mps.hpp"

namespace flowgraph {

std::string_view to_string(SolveStatus status) noexcept {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::IterationLimit: return "iteration_limit";
  }
  return "unknown";
}

namespace {

double parse_number(std::string_view text, std::size_t line) {
  double value = 0.0;
  if (text == "inf" || text == "+inf" || text == "infinity") return kInfinity;
  if (text == "-inf" || text == "-infinity") return -kInfinity;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": bad number '" + std::string(text) + "'");
  return value;
}

// Splits "key value" with any amount of blank space; returns false unless
// exactly two fields are present.
bool split_pair(const std::string& line, std::string& key, std::string& value) {
  std::istringstream fields(line);
  std::string extra;
  if (!(fields >> key >> value)) return false;
  return !(fields >> extra);
}

}  // namespace

SolveResult read_solution(std::istream& in, const LpInstance& instance) {
  SolveResult result;
  std::string line, key, value;
  std::size_t number = 0;

  auto next_line = [&]() {
    while (std::getline(in, line)) {
      ++number;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };

  if (!next_line() || !split_pair(line, key, value) || key != "status")
    throw Error(ErrorCode::ParseError, "expected 'status <value>' on the first line");
  if (value == "optimal") {
    result.status = SolveStatus::Optimal;
  } else if (value == "infeasible") {
    result.status = SolveStatus::Infeasible;
  } else if (value == "unbounded") {
    result.status = SolveStatus::Unbounded;
  } else if (value == "iteration_limit") {
    result.status = SolveStatus::IterationLimit;
  } else {
    throw Error(ErrorCode::ParseError, "unknown status '" + value + "'");
  }

  if (!next_line() || !split_pair(line, key, value) || key != "obj")
    throw Error(ErrorCode::ParseError, "expected 'obj <value>' on the second line");
  result.objective = parse_number(value, number);

  std::unordered_map<std::string, std::size_t> index;
  const auto& vars = instance.variables();
  index.reserve(vars.size());
  for (std::size_t j = 0; j < vars.size(); ++j) index.emplace(vars[j].name(), j);

  std::vector<double> primal(vars.size(), 0.0);
  while (next_line()) {
    if (!split_pair(line, key, value))
      throw Error(ErrorCode::ParseError, "line " + std::to_string(number) + ": expected '<name> <value>'");
    auto it = index.find(key);
    if (it == index.end()) throw Error(ErrorCode::UnknownVariableName, "'" + key + "' is not a column of the instance");
    primal[it->second] = parse_number(value, number);
  }
  if (result.status == SolveStatus::Optimal) result.primal = std::move(primal);
  return result;
}

SolveResult read_solution(const std::filesystem::path& path, const LpInstance& instance) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  return read_solution(in, instance);
}

void write_solution(const SolveResult& result, const LpInstance& instance, std::ostream& out) {
  out << "status " << to_string(result.status) << '\n';
  out << "obj " << format_double(result.objective) << '\n';
  const auto& vars = instance.variables();
  for (std::size_t j = 0; j < result.primal.size() && j < vars.size(); ++j)
    out << vars[j].name() << ' ' << format_double(result.primal[j]) << '\n';
}

}  // namespace flowgraph
