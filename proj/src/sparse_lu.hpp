#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace flowgraph::detail {

struct SparseEntry {
  int index;
  double value;
};

/// Sparse LU factorisation of a simplex basis with product-form updates.
///
/// Basis positions 0..m-1 name the columns of B. `ftran` maps a vector
/// indexed by row to one indexed by position (solves B x = b); `btran` maps
/// position-indexed data to row-indexed data (solves B^T y = c).
class SparseLu {
 public:
  /// Factorises the m x m matrix whose column p is `columns[p]`. Pivots are
  /// chosen by a Markowitz search with threshold partial pivoting. Returns
  /// the (position, row) pairs left unpivoted when B is numerically
  /// singular; the factorisation is then of B with those columns replaced by
  /// unit columns e_row.
  std::vector<std::pair<int, int>> factor(int m, std::span<const std::vector<SparseEntry>> columns);

  void ftran(std::vector<double>& x) const;
  void btran(std::vector<double>& y) const;

  /// Sparse variants. `pattern` lists the indices that may be nonzero, on
  /// entry for the input and on exit for the result, without duplicates.
  void ftran(std::vector<double>& x, std::vector<int>& pattern) const;
  void btran(std::vector<double>& y, std::vector<int>& pattern) const;

  /// Replaces the column at `position` by a column whose ftran image is
  /// `alpha` (position-indexed, dense, nonzeros listed in `pattern`).
  void update(int position, const std::vector<double>& alpha, std::span<const int> pattern);
  void update(int position, const std::vector<double>& alpha);

  std::size_t num_updates() const { return etas_.size(); }
  int size() const { return m_; }

 private:
  struct Eta {
    int pivot;  // row (L) or position (product form)
    double pivot_value;
    std::vector<SparseEntry> entries;
  };
  // Compressed lists: entries of line k are items[start[k]..start[k+1]).
  struct Lists {
    std::vector<int> start;
    std::vector<SparseEntry> items;
    std::span<const SparseEntry> operator[](int k) const {
      return {items.data() + start[k], items.data() + start[k + 1]};
    }
  };
  void compile(const std::vector<char>& replaced);
  bool sparse_enough(std::size_t count) const { return count * 10 < static_cast<std::size_t>(m_); }

  int m_ = 0;
  // Pivot step k eliminates row pivot_row_[k] with basis position pivot_col_[k].
  std::vector<int> pivot_row_, pivot_col_, row_step_, col_step_;
  std::vector<double> diag_;
  Lists l_by_step_;   // rows below the pivot, multipliers
  Lists l_by_row_;    // transpose: (pivot row of the step, multiplier)
  Lists u_by_step_;   // (later position, value)
  Lists u_by_col_;    // transpose: (earlier step, value)
  std::vector<Eta> etas_;
  // Factorisation scratch, kept to reuse its storage.
  std::vector<std::vector<SparseEntry>> fcols_;
  std::vector<std::vector<int>> frows_;
  std::vector<SparseEntry> stage_u_, stage_l_;
  std::vector<int> stage_u_start_, stage_l_start_, fill_;
  mutable std::vector<double> work_;
  mutable std::vector<int> heap_, next_pattern_;
  mutable std::vector<char> step_mark_, index_mark_;
};

}  // namespace flowgraph::detail
