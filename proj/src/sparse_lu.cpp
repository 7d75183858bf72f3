#include "sparse_lu.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace flowgraph::detail {

namespace {

constexpr double kThreshold = 0.01;    // relative pivot threshold
constexpr double kAbsPivotTol = 1e-11;  // below this an entry cannot be a pivot
constexpr int kSearchLines = 4;

// Doubly linked lists of lines (rows or columns) bucketed by active count.
class CountLists {
 public:
  explicit CountLists(int n) : head_(static_cast<std::size_t>(n) + 2, -1), next_(n, -1), prev_(n, -1), count_(n, 0) {}

  void insert(int line, int count) {
    count_[line] = count;
    next_[line] = head_[count];
    prev_[line] = -1;
    if (head_[count] >= 0) prev_[head_[count]] = line;
    head_[count] = line;
  }
  void remove(int line) {
    if (prev_[line] >= 0) {
      next_[prev_[line]] = next_[line];
    } else {
      head_[count_[line]] = next_[line];
    }
    if (next_[line] >= 0) prev_[next_[line]] = prev_[line];
    next_[line] = prev_[line] = -1;
  }
  void move(int line, int count) {
    remove(line);
    insert(line, count);
  }
  int head(int count) const { return head_[count]; }
  int next(int line) const { return next_[line]; }
  int count(int line) const { return count_[line]; }
  int max_count() const { return static_cast<int>(head_.size()) - 2; }

 private:
  std::vector<int> head_, next_, prev_, count_;
};

double* find_in(std::vector<SparseEntry>& col, int row) {
  for (auto& e : col)
    if (e.index == row) return &e.value;
  return nullptr;
}

void erase_index(std::vector<SparseEntry>& col, int row) {
  for (std::size_t k = 0; k < col.size(); ++k) {
    if (col[k].index == row) {
      col[k] = col.back();
      col.pop_back();
      return;
    }
  }
}

void erase_value(std::vector<int>& list, int value) {
  for (std::size_t k = 0; k < list.size(); ++k) {
    if (list[k] == value) {
      list[k] = list.back();
      list.pop_back();
      return;
    }
  }
}

double column_max(const std::vector<SparseEntry>& col) {
  double best = 0.0;
  for (const auto& e : col) best = std::max(best, std::abs(e.value));
  return best;
}

}  // namespace

std::vector<std::pair<int, int>> SparseLu::factor(int m, std::span<const std::vector<SparseEntry>> columns) {
  m_ = m;
  etas_.clear();
  pivot_row_.clear();
  pivot_col_.clear();
  diag_.clear();
  stage_u_.clear();
  stage_l_.clear();
  stage_u_start_.assign(1, 0);
  stage_l_start_.assign(1, 0);
  work_.assign(static_cast<std::size_t>(m), 0.0);
  step_mark_.assign(static_cast<std::size_t>(m), 0);
  index_mark_.assign(static_cast<std::size_t>(m), 0);

  auto& cols = fcols_;
  auto& rows = frows_;
  cols.resize(static_cast<std::size_t>(m));
  rows.resize(static_cast<std::size_t>(m));
  for (auto& r : rows) r.clear();
  for (int c = 0; c < m; ++c) {
    auto& col = cols[c];
    col.clear();
    for (const auto& e : columns[c])
      if (e.value != 0.0) col.push_back(e);
    for (const auto& e : col) rows[e.index].push_back(c);
  }

  CountLists col_lists(m), row_lists(m);
  std::vector<char> col_done(m, 0), row_done(m, 0);
  for (int c = 0; c < m; ++c) col_lists.insert(c, static_cast<int>(cols[c].size()));
  for (int r = 0; r < m; ++r) row_lists.insert(r, static_cast<int>(rows[r].size()));

  std::vector<int> singular_cols;
  // Structurally empty columns can never be pivoted.
  for (int c = col_lists.head(0); c >= 0;) {
    int next = col_lists.next(c);
    col_lists.remove(c);
    col_done[c] = 1;
    singular_cols.push_back(c);
    c = next;
  }

  int pivots = static_cast<int>(singular_cols.size());
  while (pivots < m) {
    int best_row = -1, best_col = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    double best_abs = 0.0;
    int examined = 0;
    for (int k = 1; k <= m && examined < kSearchLines; ++k) {
      for (int c = col_lists.head(k); c >= 0 && examined < kSearchLines; c = col_lists.next(c)) {
        const double cmax = column_max(cols[c]);
        for (const auto& e : cols[c]) {
          const double a = std::abs(e.value);
          if (a < kAbsPivotTol || a < kThreshold * cmax) continue;
          const double cost = static_cast<double>(row_lists.count(e.index) - 1) * (k - 1);
          if (cost < best_cost || (cost == best_cost && a > best_abs)) {
            best_cost = cost;
            best_abs = a;
            best_row = e.index;
            best_col = c;
          }
        }
        if (best_col >= 0) ++examined;
        if (best_cost <= static_cast<double>(k - 1) * (k - 1)) break;
      }
      if (best_col >= 0 && best_cost <= static_cast<double>(k - 1) * (k - 1)) break;
      for (int r = row_lists.head(k); r >= 0 && examined < kSearchLines; r = row_lists.next(r)) {
        for (int c : rows[r]) {
          const double* v = find_in(cols[c], r);
          const double a = std::abs(*v);
          if (a < kAbsPivotTol || a < kThreshold * column_max(cols[c])) continue;
          const double cost = static_cast<double>(k - 1) * (col_lists.count(c) - 1);
          if (cost < best_cost || (cost == best_cost && a > best_abs)) {
            best_cost = cost;
            best_abs = a;
            best_row = r;
            best_col = c;
          }
        }
        if (best_col >= 0) ++examined;
        if (best_cost <= static_cast<double>(k - 1) * k) break;
      }
      if (best_col >= 0 && best_cost <= static_cast<double>(k - 1) * k) break;
    }
    if (best_col < 0) break;  // remaining active block is numerically zero

    const int r = best_row, c = best_col;
    const double pivot = *find_in(cols[c], r);

    pivot_row_.push_back(r);
    pivot_col_.push_back(c);
    diag_.push_back(pivot);
    const std::size_t u_begin = stage_u_.size(), l_begin = stage_l_.size();
    for (int j : rows[r]) {
      if (j == c) continue;
      double* v = find_in(cols[j], r);
      stage_u_.push_back({j, *v});
      erase_index(cols[j], r);
    }
    for (const auto& e : cols[c]) {
      if (e.index == r) continue;
      stage_l_.push_back({e.index, e.value / pivot});
      erase_value(rows[e.index], c);
    }
    const std::span<const SparseEntry> urow(stage_u_.data() + u_begin, stage_u_.size() - u_begin);
    const std::span<const SparseEntry> leta(stage_l_.data() + l_begin, stage_l_.size() - l_begin);
    stage_u_start_.push_back(static_cast<int>(stage_u_.size()));
    stage_l_start_.push_back(static_cast<int>(stage_l_.size()));
    for (const auto& l : leta) {
      for (const auto& u : urow) {
        double* v = find_in(cols[u.index], l.index);
        if (v) {
          *v -= l.value * u.value;
        } else {
          cols[u.index].push_back({l.index, -l.value * u.value});
          rows[l.index].push_back(u.index);
        }
      }
    }

    col_lists.remove(c);
    row_lists.remove(r);
    col_done[c] = row_done[r] = 1;
    cols[c].clear();
    rows[r].clear();
    for (const auto& u : urow) col_lists.move(u.index, static_cast<int>(cols[u.index].size()));
    for (const auto& l : leta) row_lists.move(l.index, static_cast<int>(rows[l.index].size()));
    // Columns emptied by cancellation are singular.
    for (const auto& u : urow) {
      if (!col_done[u.index] && cols[u.index].empty()) {
        col_lists.remove(u.index);
        col_done[u.index] = 1;
        singular_cols.push_back(u.index);
        ++pivots;
      }
    }

    ++pivots;
  }

  for (int c = 0; c < m; ++c)
    if (!col_done[c]) singular_cols.push_back(c);
  std::vector<std::pair<int, int>> deficiency;
  if (singular_cols.empty()) {
    compile({});
    return deficiency;
  }

  std::vector<int> free_rows;
  for (int r = 0; r < m; ++r)
    if (!row_done[r]) free_rows.push_back(r);
  std::vector<char> replaced(m, 0);
  for (std::size_t k = 0; k < singular_cols.size(); ++k) {
    replaced[singular_cols[k]] = 1;
    deficiency.emplace_back(singular_cols[k], free_rows[k]);
  }
  for (const auto& [pos, row] : deficiency) {
    pivot_row_.push_back(row);
    pivot_col_.push_back(pos);
    diag_.push_back(1.0);
    stage_u_start_.push_back(static_cast<int>(stage_u_.size()));
    stage_l_start_.push_back(static_cast<int>(stage_l_.size()));
  }
  compile(replaced);
  return deficiency;
}

void SparseLu::compile(const std::vector<char>& replaced) {
  const auto m = static_cast<std::size_t>(m_);
  row_step_.resize(m);
  col_step_.resize(m);
  for (int k = 0; k < m_; ++k) {
    row_step_[pivot_row_[k]] = k;
    col_step_[pivot_col_[k]] = k;
  }
  auto stage = [](const std::vector<SparseEntry>& items, const std::vector<int>& start, int k) {
    return std::span<const SparseEntry>(items.data() + start[k], items.data() + start[k + 1]);
  };
  auto kept = [&](const SparseEntry& e) { return replaced.empty() || !replaced[e.index]; };

  // Fills `out` from (line, entry) pairs produced by `each`.
  auto build = [&](Lists& out, auto&& each) {
    out.start.assign(m + 1, 0);
    each([&](int line, SparseEntry) { ++out.start[line + 1]; });
    for (std::size_t k = 0; k < m; ++k) out.start[k + 1] += out.start[k];
    out.items.resize(static_cast<std::size_t>(out.start[m]));
    fill_.assign(out.start.begin(), out.start.end() - 1);
    each([&](int line, SparseEntry e) { out.items[fill_[line]++] = e; });
  };
  build(l_by_step_, [&](auto&& emit) {
    for (int k = 0; k < m_; ++k)
      for (const auto& e : stage(stage_l_, stage_l_start_, k)) emit(k, e);
  });
  build(l_by_row_, [&](auto&& emit) {
    for (int k = 0; k < m_; ++k)
      for (const auto& e : stage(stage_l_, stage_l_start_, k)) emit(e.index, {pivot_row_[k], e.value});
  });
  build(u_by_step_, [&](auto&& emit) {
    for (int k = 0; k < m_; ++k)
      for (const auto& e : stage(stage_u_, stage_u_start_, k))
        if (kept(e)) emit(k, e);
  });
  build(u_by_col_, [&](auto&& emit) {
    for (int k = 0; k < m_; ++k)
      for (const auto& e : stage(stage_u_, stage_u_start_, k))
        if (kept(e)) emit(e.index, {k, e.value});
  });
}

namespace {

void push_min(std::vector<int>& heap, int v) {
  heap.push_back(v);
  std::push_heap(heap.begin(), heap.end(), std::greater<>());
}
int pop_min(std::vector<int>& heap) {
  std::pop_heap(heap.begin(), heap.end(), std::greater<>());
  const int v = heap.back();
  heap.pop_back();
  return v;
}
void push_max(std::vector<int>& heap, int v) {
  heap.push_back(v);
  std::push_heap(heap.begin(), heap.end());
}
int pop_max(std::vector<int>& heap) {
  std::pop_heap(heap.begin(), heap.end());
  const int v = heap.back();
  heap.pop_back();
  return v;
}

void scan_pattern(const std::vector<double>& x, std::vector<int>& pattern) {
  pattern.clear();
  for (int i = 0; i < static_cast<int>(x.size()); ++i)
    if (x[i] != 0.0) pattern.push_back(i);
}

}  // namespace

void SparseLu::ftran(std::vector<double>& x) const {
  for (int k = 0; k < m_; ++k) {
    const double xr = x[pivot_row_[k]];
    if (xr == 0.0) continue;
    for (const auto& e : l_by_step_[k]) x[e.index] -= e.value * xr;
  }
  for (int k = m_ - 1; k >= 0; --k) {
    const int r = pivot_row_[k];
    const double z = x[r] / diag_[k];
    x[r] = 0.0;
    work_[pivot_col_[k]] = z;
    if (z == 0.0) continue;
    for (const auto& e : u_by_col_[pivot_col_[k]]) x[pivot_row_[e.index]] -= e.value * z;
  }
  x.swap(work_);
  for (const auto& eta : etas_) {
    if (x[eta.pivot] == 0.0) continue;
    const double xp = x[eta.pivot] / eta.pivot_value;
    x[eta.pivot] = xp;
    for (const auto& e : eta.entries) x[e.index] -= e.value * xp;
  }
}

void SparseLu::btran(std::vector<double>& y) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double v = y[it->pivot];
    for (const auto& e : it->entries) v -= e.value * y[e.index];
    y[it->pivot] = v / it->pivot_value;
  }
  for (int k = 0; k < m_; ++k) {
    const int c = pivot_col_[k];
    const double z = y[c] / diag_[k];
    y[c] = 0.0;
    work_[pivot_row_[k]] = z;
    if (z == 0.0) continue;
    for (const auto& e : u_by_step_[k]) y[e.index] -= e.value * z;
  }
  y.swap(work_);
  for (int k = m_ - 1; k >= 0; --k) {
    const double yi = y[pivot_row_[k]];
    if (yi == 0.0) continue;
    for (const auto& e : l_by_row_[pivot_row_[k]]) y[e.index] -= e.value * yi;
  }
}

void SparseLu::ftran(std::vector<double>& x, std::vector<int>& pattern) const {
  if (!sparse_enough(pattern.size())) {
    ftran(x);
    scan_pattern(x, pattern);
    return;
  }
  auto& heap = heap_;
  heap.clear();
  auto l_active = [&](int k) { return l_by_step_.start[k] != l_by_step_.start[k + 1]; };

  // L: forward over steps in increasing order.
  for (int r : pattern) {
    index_mark_[r] = 1;
    const int k = row_step_[r];
    if (l_active(k) && !step_mark_[k]) {
      step_mark_[k] = 1;
      push_min(heap, k);
    }
  }
  bool dense = false;
  while (!heap.empty()) {
    const int k = pop_min(heap);
    step_mark_[k] = 0;
    const double xr = x[pivot_row_[k]];
    if (xr == 0.0) continue;
    for (const auto& e : l_by_step_[k]) {
      x[e.index] -= e.value * xr;
      if (index_mark_[e.index]) continue;
      index_mark_[e.index] = 1;
      pattern.push_back(e.index);
      const int k2 = row_step_[e.index];
      if (l_active(k2) && !step_mark_[k2]) {
        step_mark_[k2] = 1;
        push_min(heap, k2);
      }
    }
    if (!sparse_enough(pattern.size())) {
      for (int s : heap) step_mark_[s] = 0;
      heap.clear();
      for (int k2 = k + 1; k2 < m_; ++k2) {
        const double v = x[pivot_row_[k2]];
        if (v == 0.0) continue;
        for (const auto& e : l_by_step_[k2]) x[e.index] -= e.value * v;
      }
      dense = true;
      break;
    }
  }
  for (int r : pattern) index_mark_[r] = 0;

  // U: backward over steps, column oriented.
  auto& out = next_pattern_;
  out.clear();
  auto solve_step = [&](int k) {
    const int r = pivot_row_[k];
    const double z = x[r] / diag_[k];
    x[r] = 0.0;
    const int c = pivot_col_[k];
    work_[c] = z;
    return z;
  };
  if (dense) {
    for (int k = m_ - 1; k >= 0; --k) {
      const double z = solve_step(k);
      if (z == 0.0) continue;
      for (const auto& e : u_by_col_[pivot_col_[k]]) x[pivot_row_[e.index]] -= e.value * z;
    }
  } else {
    for (int r : pattern) {
      const int k = row_step_[r];
      step_mark_[k] = 1;
      push_max(heap, k);
    }
    std::size_t processed = 0;
    while (!heap.empty()) {
      const int k = pop_max(heap);
      step_mark_[k] = 0;
      const double z = solve_step(k);
      if (z == 0.0) continue;
      out.push_back(pivot_col_[k]);
      for (const auto& e : u_by_col_[pivot_col_[k]]) {
        x[pivot_row_[e.index]] -= e.value * z;
        if (!step_mark_[e.index]) {
          step_mark_[e.index] = 1;
          push_max(heap, e.index);
        }
      }
      if (!sparse_enough(++processed + heap.size())) {
        for (int s : heap) {
          step_mark_[s] = 0;
        }
        heap.clear();
        for (int k2 = k - 1; k2 >= 0; --k2) {
          const double z2 = solve_step(k2);
          if (z2 == 0.0) continue;
          for (const auto& e : u_by_col_[pivot_col_[k2]]) x[pivot_row_[e.index]] -= e.value * z2;
        }
        dense = true;
        break;
      }
    }
  }
  x.swap(work_);

  // Product-form etas.
  if (dense) {
    for (const auto& eta : etas_) {
      if (x[eta.pivot] == 0.0) continue;
      const double xp = x[eta.pivot] / eta.pivot_value;
      x[eta.pivot] = xp;
      for (const auto& e : eta.entries) x[e.index] -= e.value * xp;
    }
    scan_pattern(x, pattern);
    return;
  }
  pattern.swap(out);
  for (int i : pattern) index_mark_[i] = 1;
  for (const auto& eta : etas_) {
    if (x[eta.pivot] == 0.0) continue;
    const double xp = x[eta.pivot] / eta.pivot_value;
    x[eta.pivot] = xp;
    for (const auto& e : eta.entries) {
      x[e.index] -= e.value * xp;
      if (!index_mark_[e.index]) {
        index_mark_[e.index] = 1;
        pattern.push_back(e.index);
      }
    }
  }
  for (int i : pattern) index_mark_[i] = 0;
}

void SparseLu::btran(std::vector<double>& y, std::vector<int>& pattern) const {
  if (!sparse_enough(pattern.size())) {
    btran(y);
    scan_pattern(y, pattern);
    return;
  }
  for (int i : pattern) index_mark_[i] = 1;
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double v = y[it->pivot];
    for (const auto& e : it->entries) v -= e.value * y[e.index];
    if (v == 0.0 && y[it->pivot] == 0.0) continue;
    y[it->pivot] = v / it->pivot_value;
    if (!index_mark_[it->pivot]) {
      index_mark_[it->pivot] = 1;
      pattern.push_back(it->pivot);
    }
  }
  for (int i : pattern) index_mark_[i] = 0;

  auto& heap = heap_;
  heap.clear();
  auto& out = next_pattern_;
  out.clear();
  auto solve_step = [&](int k) {
    const int c = pivot_col_[k];
    const double z = y[c] / diag_[k];
    y[c] = 0.0;
    work_[pivot_row_[k]] = z;
    return z;
  };
  bool dense = false;
  if (!sparse_enough(pattern.size())) {
    dense = true;
    for (int k = 0; k < m_; ++k) {
      const double z = solve_step(k);
      if (z == 0.0) continue;
      for (const auto& e : u_by_step_[k]) y[e.index] -= e.value * z;
    }
  } else {
    for (int c : pattern) {
      const int k = col_step_[c];
      step_mark_[k] = 1;
      push_min(heap, k);
    }
    std::size_t processed = 0;
    while (!heap.empty()) {
      const int k = pop_min(heap);
      step_mark_[k] = 0;
      const double z = solve_step(k);
      if (z == 0.0) continue;
      out.push_back(pivot_row_[k]);
      for (const auto& e : u_by_step_[k]) {
        y[e.index] -= e.value * z;
        const int k2 = col_step_[e.index];
        if (!step_mark_[k2]) {
          step_mark_[k2] = 1;
          push_min(heap, k2);
        }
      }
      if (!sparse_enough(++processed + heap.size())) {
        for (int s : heap) step_mark_[s] = 0;
        heap.clear();
        for (int k2 = k + 1; k2 < m_; ++k2) {
          const double z2 = solve_step(k2);
          if (z2 == 0.0) continue;
          for (const auto& e : u_by_step_[k2]) y[e.index] -= e.value * z2;
        }
        dense = true;
        break;
      }
    }
  }
  y.swap(work_);

  if (dense) {
    for (int k = m_ - 1; k >= 0; --k) {
      const double yi = y[pivot_row_[k]];
      if (yi == 0.0) continue;
      for (const auto& e : l_by_row_[pivot_row_[k]]) y[e.index] -= e.value * yi;
    }
    scan_pattern(y, pattern);
    return;
  }

  // L transpose: rows in decreasing step order.
  pattern.swap(out);
  auto lt_active = [&](int r) { return l_by_row_.start[r] != l_by_row_.start[r + 1]; };
  for (int r : pattern) {
    index_mark_[r] = 1;
    if (lt_active(r)) {
      step_mark_[row_step_[r]] = 1;
      push_max(heap, row_step_[r]);
    }
  }
  while (!heap.empty()) {
    const int k = pop_max(heap);
    step_mark_[k] = 0;
    const int i = pivot_row_[k];
    const double yi = y[i];
    if (yi == 0.0) continue;
    for (const auto& e : l_by_row_[i]) {
      y[e.index] -= e.value * yi;
      if (!index_mark_[e.index]) {
        index_mark_[e.index] = 1;
        pattern.push_back(e.index);
      }
      const int k2 = row_step_[e.index];
      if (lt_active(e.index) && !step_mark_[k2]) {
        step_mark_[k2] = 1;
        push_max(heap, k2);
      }
    }
  }
  for (int r : pattern) index_mark_[r] = 0;
}

void SparseLu::update(int position, const std::vector<double>& alpha, std::span<const int> pattern) {
  Eta eta{position, alpha[position], {}};
  for (int i : pattern)
    if (i != position && alpha[i] != 0.0) eta.entries.push_back({i, alpha[i]});
  etas_.push_back(std::move(eta));
}

void SparseLu::update(int position, const std::vector<double>& alpha) {
  Eta eta{position, alpha[position], {}};
  for (int i = 0; i < m_; ++i)
    if (i != position && alpha[i] != 0.0) eta.entries.push_back({i, alpha[i]});
  etas_.push_back(std::move(eta));
}

}  // namespace flowgraph::detail
