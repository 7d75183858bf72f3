#include "flowgraph/lp_instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "flowgraph/error.hpp"

namespace flowgraph {

std::string_view to_string(VarRole role) noexcept {
  switch (role) {
    case VarRole::Flow: return "flow";
    case VarRole::StorageLevel: return "level";
    case VarRole::Invest: return "invest";
    case VarRole::UnitsOn: return "units_on";
    case VarRole::FlowAboveMin: return "above_min";
    case VarRole::VoltageAngle: return "angle";
  }
  return "var";
}

std::string_view to_string(RowFamily family) noexcept {
  switch (family) {
    case RowFamily::ConsumerBalance: return "consumer_balance";
    case RowFamily::StorageBalance: return "storage_balance";
    case RowFamily::ConversionBalance: return "conversion_balance";
    case RowFamily::CapacityLimit: return "capacity_limit";
    case RowFamily::ChargingLimit: return "charging_limit";
    case RowFamily::StorageCapacity: return "storage_capacity";
    case RowFamily::FlowBound: return "flow_bound";
    case RowFamily::InvestLimit: return "invest_limit";
    case RowFamily::NodeBalance: return "node_balance";
    case RowFamily::DcAngle: return "dc_angle";
    case RowFamily::UcMinOper: return "min_oper_point";
    case RowFamily::UcLimit: return "uc_limit";
    case RowFamily::UcMaxAbove: return "max_flow_above_min";
  }
  return "row";
}

std::string_view equation_of(RowFamily family) noexcept {
  switch (family) {
    case RowFamily::ConsumerBalance: return "eq2";
    case RowFamily::StorageBalance: return "eq3";
    case RowFamily::ConversionBalance: return "eq4";
    case RowFamily::CapacityLimit: return "eq5";
    case RowFamily::ChargingLimit: return "eq6";
    case RowFamily::StorageCapacity: return "eq7";
    case RowFamily::FlowBound: return "eq8";
    case RowFamily::InvestLimit: return "eq9";
    case RowFamily::NodeBalance: return "eq2:node";
    case RowFamily::DcAngle: return "annex:dc_power_flow";
    case RowFamily::UcMinOper: return "annex:min_oper_point";
    case RowFamily::UcLimit: return "annex:uc_limit";
    case RowFamily::UcMaxAbove: return "annex:max_flow_above_min";
  }
  return "";
}

std::string VariableRef::name() const {
  std::string out(to_string(role));
  out += '[';
  out += asset;
  if (role == VarRole::Flow) {
    out += ',';
    out += to;
  }
  out += ']';
  if (timestep > 0) {
    out += '[';
    out += std::to_string(timestep);
    out += ']';
  }
  return out;
}

std::string ConstraintRow::name() const {
  std::string out(to_string(family));
  out += '[';
  out += entity;
  out += ']';
  if (timestep > 0) {
    out += '[';
    out += std::to_string(timestep);
    out += ']';
  }
  return out;
}

std::size_t LpInstance::add_variable(VariableRef var, double cost) {
  vars_.push_back(std::move(var));
  costs_.push_back(cost);
  return vars_.size() - 1;
}

std::size_t LpInstance::add_row(ConstraintRow row, std::span<const Term> terms) {
  row.term_begin = terms_.size();
  for (const auto& term : terms) {
    if (term.var >= vars_.size())
      throw Error(ErrorCode::InvariantViolation, "row " + row.name() + " references an unknown variable");
    if (!std::isfinite(term.coef))
      throw Error(ErrorCode::InvariantViolation, "row " + row.name() + " has a non-finite coefficient");
    auto begin = terms_.begin() + static_cast<std::ptrdiff_t>(row.term_begin);
    auto it = std::find_if(begin, terms_.end(), [&](const Term& t) { return t.var == term.var; });
    if (it != terms_.end()) {
      it->coef += term.coef;
    } else {
      terms_.push_back(term);
    }
  }
  auto begin = terms_.begin() + static_cast<std::ptrdiff_t>(row.term_begin);
  terms_.erase(std::remove_if(begin, terms_.end(), [](const Term& t) { return t.coef == 0.0; }), terms_.end());
  row.term_end = terms_.size();
  rows_.push_back(std::move(row));
  return rows_.size() - 1;
}

bool LpInstance::has_integers() const {
  return std::any_of(vars_.begin(), vars_.end(), [](const VariableRef& v) { return v.integer; });
}

std::ptrdiff_t LpInstance::find_variable(std::string_view name) const {
  for (std::size_t j = 0; j < vars_.size(); ++j)
    if (vars_[j].name() == name) return static_cast<std::ptrdiff_t>(j);
  return -1;
}

double LpInstance::objective_value(std::span<const double> x) const {
  double total = 0.0;
  for (std::size_t j = 0; j < costs_.size() && j < x.size(); ++j) total += costs_[j] * x[j];
  return total;
}

LpInstance LpInstance::permuted_columns(std::span<const std::size_t> perm) const {
  std::vector<std::size_t> new_index(vars_.size());
  for (std::size_t j = 0; j < perm.size(); ++j) new_index[perm[j]] = j;
  LpInstance out;
  out.name = name;
  for (std::size_t j = 0; j < perm.size(); ++j) out.add_variable(vars_[perm[j]], costs_[perm[j]]);
  std::vector<Term> buffer;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    buffer.clear();
    for (const auto& term : terms(r)) buffer.push_back({new_index[term.var], term.coef});
    std::sort(buffer.begin(), buffer.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
    out.add_row(rows_[r], buffer);
  }
  return out;
}

bool operator==(const LpInstance& a, const LpInstance& b) { return canonical_dump(a) == canonical_dump(b); }

std::string canonical_dump(const LpInstance& instance) {
  std::string out;
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%a ", v);
    out += buf;
  };
  out += instance.name + "\n";
  const auto& vars = instance.variables();
  for (std::size_t j = 0; j < vars.size(); ++j) {
    out += vars[j].name() + ' ';
    num(vars[j].lower);
    num(vars[j].upper);
    num(instance.costs()[j]);
    out += vars[j].integer ? "I\n" : "C\n";
  }
  const auto& rows = instance.rows();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out += rows[r].name() + ' ' + std::to_string(static_cast<int>(rows[r].sense)) + ' ';
    num(rows[r].rhs);
    num(rows[r].range_lo);
    const auto span = instance.terms(r);
    std::vector<Term> sorted(span.begin(), span.end());
    std::sort(sorted.begin(), sorted.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
    for (const auto& term : sorted) {
      out += std::to_string(term.var) + ':';
      num(term.coef);
    }
    out += '\n';
  }
  return out;
}

ModelSize size_report(const LpInstance& instance) {
  ModelSize size;
  size.n_vars = instance.num_vars();
  for (const auto& row : instance.rows()) {
    size.n_constraints += row.sense == Sense::Range ? 2 : 1;
    size.n_nonzeros += row.size();
  }
  return size;
}

double percent_change(std::size_t reference, std::size_t candidate) {
  if (reference == 0) return 0.0;
  return 100.0 * (static_cast<double>(candidate) - static_cast<double>(reference)) / static_cast<double>(reference);
}

}  // namespace flowgraph
