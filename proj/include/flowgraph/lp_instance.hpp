#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace flowgraph {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class VarRole { Flow, StorageLevel, Invest, UnitsOn, FlowAboveMin, VoltageAngle };

std::string_view to_string(VarRole role) noexcept;

/// One LP column. `asset` names the owning asset; flows also carry `to`.
/// `timestep` is 1-based and 0 for time-independent variables.
struct VariableRef {
  VarRole role = VarRole::Flow;
  std::string asset;
  std::string to;
  int timestep = 0;
  double lower = 0.0;
  double upper = kInfinity;
  bool integer = false;

  /// Column name used in MPS and solution files, e.g. `flow[pv,bt][3]`.
  std::string name() const;
};

enum class RowFamily {
  ConsumerBalance,
  StorageBalance,
  ConversionBalance,
  CapacityLimit,
  ChargingLimit,
  StorageCapacity,
  FlowBound,
  InvestLimit,
  NodeBalance,
  DcAngle,
  UcMinOper,
  UcLimit,
  UcMaxAbove,
};

std::string_view to_string(RowFamily family) noexcept;

/// Equation label each family implements, e.g. "eq2" or "annex:uc_limit".
std::string_view equation_of(RowFamily family) noexcept;

/// Le: a·x <= rhs, Ge: a·x >= rhs, Eq: a·x = rhs, Range: range_lo <= a·x <= rhs.
enum class Sense { Le, Eq, Ge, Range };

struct Term {
  std::size_t var;
  double coef;
};

struct ConstraintRow {
  RowFamily family = RowFamily::ConsumerBalance;
  std::string entity;  // asset id, or "from,to" for arc rows
  int timestep = 0;
  Sense sense = Sense::Eq;
  double rhs = 0.0;
  double range_lo = 0.0;
  std::size_t term_begin = 0;
  std::size_t term_end = 0;

  std::string name() const;
  std::size_t size() const { return term_end - term_begin; }
};

/// Minimisation LP in row-wise sparse form. Terms of all rows live in one
/// flat array; each row owns the half-open slice [term_begin, term_end).
class LpInstance {
 public:
  std::string name = "flowgraph";

  std::size_t add_variable(VariableRef var, double cost = 0.0);

  /// Appends a row. Terms with zero coefficient are dropped and duplicate
  /// variables are merged; the row is kept even if it ends up empty.
  std::size_t add_row(ConstraintRow row, std::span<const Term> terms);

  const std::vector<VariableRef>& variables() const { return vars_; }
  const std::vector<ConstraintRow>& rows() const { return rows_; }
  const std::vector<double>& costs() const { return costs_; }
  std::span<const Term> terms(std::size_t row) const {
    return {terms_.data() + rows_[row].term_begin, rows_[row].size()};
  }
  const std::vector<Term>& all_terms() const { return terms_; }

  std::vector<VariableRef>& mutable_variables() { return vars_; }
  std::vector<double>& mutable_costs() { return costs_; }

  std::size_t num_vars() const { return vars_.size(); }
  std::size_t num_rows() const { return rows_.size(); }
  bool has_integers() const;

  /// Index lookup by column name; linear in the number of variables.
  std::ptrdiff_t find_variable(std::string_view name) const;

  double objective_value(std::span<const double> x) const;

  /// Same LP with columns reordered so that new column j is old column
  /// perm[j]. Rows keep their order.
  LpInstance permuted_columns(std::span<const std::size_t> perm) const;

  friend bool operator==(const LpInstance&, const LpInstance&);

 private:
  std::vector<VariableRef> vars_;
  std::vector<double> costs_;
  std::vector<ConstraintRow> rows_;
  std::vector<Term> terms_;
};

/// Canonical byte serialisation (names, bounds, coefficients in hex-float,
/// row terms by column index),
/// used to assert that builds are reproducible.
std::string canonical_dump(const LpInstance& instance);

struct ModelSize {
  std::size_t n_vars = 0;
  std::size_t n_constraints = 0;
  std::size_t n_nonzeros = 0;

  friend bool operator==(const ModelSize&, const ModelSize&) = default;
};

/// Sizes under the reporting convention: every row counts once and each of
/// its terms is a nonzero, except that a two-sided range row counts as two
/// constraints while its terms are still counted once.
ModelSize size_report(const LpInstance& instance);

/// Relative change from `reference` to `candidate` in percent, negative for
/// a reduction.
double percent_change(std::size_t reference, std::size_t candidate);

}  // namespace flowgraph
