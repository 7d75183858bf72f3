#include "flowgraph/mps.hpp"

#include <charconv>
#include <cmath>
#include <cctype>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <ostream>
#include <vector>

#include "flowgraph/error.hpp"

namespace flowgraph {

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, end);
}

namespace {

char row_type(Sense sense) {
  switch (sense) {
    case Sense::Le: return 'L';
    case Sense::Ge: return 'G';
    case Sense::Eq: return 'E';
    case Sense::Range: return 'L';
  }
  return 'E';
}

void write_bounds(std::ostream& out, const std::string& name, const VariableRef& var) {
  const double lo = var.lower;
  const double up = var.upper;
  if (lo == up) {
    out << " FX BND " << name << ' ' << format_double(lo) << '\n';
    return;
  }
  if (std::isinf(lo) && lo < 0) {
    if (std::isinf(up)) {
      out << " FR BND " << name << '\n';
      return;
    }
    out << " MI BND " << name << '\n';
  } else if (lo != 0.0) {
    out << " LO BND " << name << ' ' << format_double(lo) << '\n';
  }
  if (!std::isinf(up)) {
    out << " UP BND " << name << ' ' << format_double(up) << '\n';
  } else if (var.integer) {
    // Some readers default unbounded integer columns to binary.
    out << " PL BND " << name << '\n';
  }
}

}  // namespace

void write_mps(const LpInstance& instance, std::ostream& out) {
  const auto& vars = instance.variables();
  const auto& rows = instance.rows();

  std::vector<std::string> row_names(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) row_names[r] = rows[r].name();

  // Column-major view of the row-wise terms.
  std::vector<std::size_t> start(vars.size() + 1, 0);
  for (const auto& term : instance.all_terms()) ++start[term.var + 1];
  for (std::size_t j = 0; j < vars.size(); ++j) start[j + 1] += start[j];
  std::vector<std::pair<std::size_t, double>> entries(start.back());
  std::vector<std::size_t> fill(start.begin(), start.end() - 1);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& term : instance.terms(r)) entries[fill[term.var]++] = {r, term.coef};

  out << "NAME " << instance.name << '\n';
  out << "ROWS\n N OBJ\n";
  for (std::size_t r = 0; r < rows.size(); ++r) out << ' ' << row_type(rows[r].sense) << ' ' << row_names[r] << '\n';

  out << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (vars[j].integer != in_int) {
      out << " MARKER" << marker++ << " 'MARKER' " << (vars[j].integer ? "'INTORG'" : "'INTEND'") << '\n';
      in_int = vars[j].integer;
    }
    const std::string name = vars[j].name();
    const double cost = instance.costs()[j];
    if (cost != 0.0 || start[j] == start[j + 1]) out << ' ' << name << " OBJ " << format_double(cost) << '\n';
    for (std::size_t k = start[j]; k < start[j + 1]; ++k)
      out << ' ' << name << ' ' << row_names[entries[k].first] << ' ' << format_double(entries[k].second) << '\n';
  }
  if (in_int) out << " MARKER" << marker << " 'MARKER' 'INTEND'\n";

  out << "RHS\n";
  for (std::size_t r = 0; r < rows.size(); ++r)
    if (rows[r].rhs != 0.0) out << " RHS " << row_names[r] << ' ' << format_double(rows[r].rhs) << '\n';

  bool any_range = false;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].sense != Sense::Range) continue;
    if (!any_range) out << "RANGES\n";
    any_range = true;
    out << " RNG " << row_names[r] << ' ' << format_double(rows[r].rhs - rows[r].range_lo) << '\n';
  }

  out << "BOUNDS\n";
  for (const auto& var : vars) write_bounds(out, var.name(), var);
  out << "ENDATA\n";
}

void write_mps(const LpInstance& instance, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  write_mps(instance, out);
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "write to " + path.string() + " failed");
}

}  // namespace flowgraph

namespace flowgraph {

namespace {

// Splits "head[a][b]" into head and bracket contents.
bool split_name(std::string_view name, std::string& head, std::vector<std::string>& parts) {
  const auto open = name.find('[');
  if (open == std::string_view::npos || open == 0) return false;
  head = std::string(name.substr(0, open));
  parts.clear();
  std::size_t at = open;
  while (at < name.size()) {
    if (name[at] != '[') return false;
    const auto close = name.find(']', at);
    if (close == std::string_view::npos) return false;
    parts.emplace_back(name.substr(at + 1, close - at - 1));
    at = close + 1;
  }
  return !parts.empty() && parts.size() <= 2;
}

std::optional<int> parse_timestep(const std::vector<std::string>& parts) {
  if (parts.size() < 2) return 0;
  int t = 0;
  const auto& text = parts[1];
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), t);
  if (ec != std::errc{} || end != text.data() + text.size() || t < 1) return std::nullopt;
  return t;
}

VariableRef parse_column_name(const std::string& name) {
  std::string head;
  std::vector<std::string> parts;
  const auto fail = [&]() { return Error(ErrorCode::ParseError, "MPS column '" + name + "' is not a canonical name"); };
  if (!split_name(name, head, parts)) throw fail();
  VariableRef var;
  bool known = false;
  for (VarRole role : {VarRole::Flow, VarRole::StorageLevel, VarRole::Invest, VarRole::UnitsOn,
                       VarRole::FlowAboveMin, VarRole::VoltageAngle})
    if (to_string(role) == head) {
      var.role = role;
      known = true;
    }
  if (!known) throw fail();
  if (var.role == VarRole::Flow) {
    const auto comma = parts[0].find(',');
    if (comma == std::string::npos) throw fail();
    var.asset = parts[0].substr(0, comma);
    var.to = parts[0].substr(comma + 1);
  } else {
    var.asset = parts[0];
  }
  const auto t = parse_timestep(parts);
  if (!t) throw fail();
  var.timestep = *t;
  return var;
}

ConstraintRow parse_row_name(const std::string& name) {
  std::string head;
  std::vector<std::string> parts;
  const auto fail = [&]() { return Error(ErrorCode::ParseError, "MPS row '" + name + "' is not a canonical name"); };
  if (!split_name(name, head, parts)) throw fail();
  ConstraintRow row;
  bool known = false;
  for (int f = 0; f <= static_cast<int>(RowFamily::UcMaxAbove); ++f)
    if (to_string(static_cast<RowFamily>(f)) == head) {
      row.family = static_cast<RowFamily>(f);
      known = true;
    }
  if (!known) throw fail();
  row.entity = parts[0];
  const auto t = parse_timestep(parts);
  if (!t) throw fail();
  row.timestep = *t;
  return row;
}

double parse_value(const std::string& text, int line) {
  if (text == "inf" || text == "+inf" || text == "Inf" || text == "Infinity") return kInfinity;
  if (text == "-inf" || text == "-Inf" || text == "-Infinity") return -kInfinity;
  double v = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size())
    throw Error(ErrorCode::ParseError, "MPS line " + std::to_string(line) + ": bad number '" + text + "'");
  return v;
}

}  // namespace

LpInstance read_mps(std::istream& in) {
  enum class Section { None, Rows, Columns, Rhs, Ranges, Bounds, End };
  Section section = Section::None;
  LpInstance lp;
  std::string objective_row;
  std::vector<ConstraintRow> rows;
  std::vector<char> row_kind;
  std::map<std::string, std::size_t> row_index, col_index;
  std::vector<std::vector<Term>> row_terms;
  std::vector<bool> explicit_lower;
  bool integer_block = false;

  std::string line;
  int number = 0;
  const auto fail = [&](const std::string& message) {
    return Error(ErrorCode::ParseError, "MPS line " + std::to_string(number) + ": " + message);
  };
  const auto find_row = [&](const std::string& name) -> std::ptrdiff_t {
    if (name == objective_row) return -1;
    auto it = row_index.find(name);
    if (it == row_index.end()) throw fail("unknown row '" + name + "'");
    return static_cast<std::ptrdiff_t>(it->second);
  };
  const auto find_col = [&](const std::string& name) -> std::size_t {
    auto it = col_index.find(name);
    if (it == col_index.end()) throw fail("unknown column '" + name + "'");
    return it->second;
  };

  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '*') continue;
    std::istringstream words(line);
    std::vector<std::string> f;
    for (std::string w; words >> w;) f.push_back(w);
    if (f.empty()) continue;
    if (line[0] != ' ' && line[0] != '\t') {
      const std::string& key = f[0];
      if (key == "NAME") {
        if (f.size() > 1) lp.name = f[1];
      } else if (key == "ROWS") {
        section = Section::Rows;
      } else if (key == "COLUMNS") {
        section = Section::Columns;
      } else if (key == "RHS") {
        section = Section::Rhs;
      } else if (key == "RANGES") {
        section = Section::Ranges;
      } else if (key == "BOUNDS") {
        section = Section::Bounds;
      } else if (key == "ENDATA") {
        section = Section::End;
        break;
      } else {
        throw fail("unknown section '" + key + "'");
      }
      continue;
    }
    switch (section) {
      case Section::Rows: {
        if (f.size() != 2) throw fail("expected '<type> <name>'");
        if (f[0] == "N") {
          if (!objective_row.empty()) throw fail("second objective row");
          objective_row = f[1];
          break;
        }
        ConstraintRow row = parse_row_name(f[1]);
        if (f[0] == "L") {
          row.sense = Sense::Le;
        } else if (f[0] == "G") {
          row.sense = Sense::Ge;
        } else if (f[0] == "E") {
          row.sense = Sense::Eq;
        } else {
          throw fail("unknown row type '" + f[0] + "'");
        }
        if (!row_index.emplace(f[1], rows.size()).second) throw fail("duplicate row '" + f[1] + "'");
        rows.push_back(std::move(row));
        row_kind.push_back(f[0][0]);
        row_terms.emplace_back();
        break;
      }
      case Section::Columns: {
        if (f.size() >= 3 && f[1] == "'MARKER'") {
          if (f[2] == "'INTORG'") {
            integer_block = true;
          } else if (f[2] == "'INTEND'") {
            integer_block = false;
          } else {
            throw fail("unknown marker " + f[2]);
          }
          break;
        }
        if (f.size() != 3 && f.size() != 5) throw fail("expected '<column> <row> <value> [<row> <value>]'");
        auto [it, fresh] = col_index.try_emplace(f[0], lp.num_vars());
        if (fresh) {
          VariableRef var = parse_column_name(f[0]);
          var.integer = integer_block;
          lp.add_variable(std::move(var));
          explicit_lower.push_back(false);
        }
        for (std::size_t k = 1; k + 1 < f.size(); k += 2) {
          const double value = parse_value(f[k + 1], number);
          const auto r = find_row(f[k]);
          if (r < 0) {
            lp.mutable_costs()[it->second] = value;
          } else {
            row_terms[static_cast<std::size_t>(r)].push_back({it->second, value});
          }
        }
        break;
      }
      case Section::Rhs: {
        if (f.size() != 3 && f.size() != 5) throw fail("expected '<set> <row> <value> [<row> <value>]'");
        for (std::size_t k = 1; k + 1 < f.size(); k += 2) {
          const auto r = find_row(f[k]);
          if (r < 0) throw fail("objective offsets are not supported");
          rows[static_cast<std::size_t>(r)].rhs = parse_value(f[k + 1], number);
        }
        break;
      }
      case Section::Ranges: {
        if (f.size() != 3 && f.size() != 5) throw fail("expected '<set> <row> <value> [<row> <value>]'");
        for (std::size_t k = 1; k + 1 < f.size(); k += 2) {
          const auto r = find_row(f[k]);
          if (r < 0) throw fail("range on the objective row");
          const double range = parse_value(f[k + 1], number);
          auto& row = rows[static_cast<std::size_t>(r)];
          // Bounds are resolved against the final rhs after all sections are read.
          row.range_lo = range;
          row.sense = Sense::Range;
          row_kind[static_cast<std::size_t>(r)] = static_cast<char>(std::tolower(row_kind[static_cast<std::size_t>(r)]));
        }
        break;
      }
      case Section::Bounds: {
        if (f.size() < 3) throw fail("expected '<type> <set> <column> [<value>]'");
        const std::size_t j = find_col(f[2]);
        auto& var = lp.mutable_variables()[j];
        const std::string& type = f[0];
        const bool needs_value = type == "UP" || type == "LO" || type == "FX" || type == "LI" || type == "UI";
        if (needs_value && f.size() != 4) throw fail(type + " bound needs a value");
        const double value = needs_value ? parse_value(f[3], number) : 0.0;
        if (type == "UP" || type == "UI") {
          var.upper = value;
          if (value < 0.0 && !explicit_lower[j]) var.lower = -kInfinity;
          if (type == "UI") var.integer = true;
        } else if (type == "LO" || type == "LI") {
          var.lower = value;
          explicit_lower[j] = true;
          if (type == "LI") var.integer = true;
        } else if (type == "FX") {
          var.lower = var.upper = value;
          explicit_lower[j] = true;
        } else if (type == "FR") {
          var.lower = -kInfinity;
          var.upper = kInfinity;
        } else if (type == "MI") {
          var.lower = -kInfinity;
          explicit_lower[j] = true;
        } else if (type == "PL") {
          var.upper = kInfinity;
        } else if (type == "BV") {
          var.lower = 0.0;
          var.upper = 1.0;
          var.integer = true;
        } else {
          throw fail("unknown bound type '" + type + "'");
        }
        break;
      }
      default:
        throw fail("data outside a section");
    }
  }
  if (section != Section::End) throw Error(ErrorCode::ParseError, "MPS input ends without ENDATA");

  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto& row = rows[r];
    if (row.sense == Sense::Range) {
      const double range = std::abs(row.range_lo);
      const double rhs = row.rhs;
      switch (row_kind[r]) {
        case 'l': row.range_lo = rhs - range; row.rhs = rhs; break;
        case 'g': row.range_lo = rhs; row.rhs = rhs + range; break;
        default:
          if (row.range_lo >= 0) {
            row.range_lo = rhs;
            row.rhs = rhs + range;
          } else {
            row.range_lo = rhs - range;
            row.rhs = rhs;
          }
      }
    }
    lp.add_row(std::move(row), row_terms[r]);
  }
  return lp;
}

LpInstance read_mps(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  return read_mps(in);
}

}  // namespace flowgraph
