#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>

#include "flowgraph/error.hpp"
#include "flowgraph/solver.hpp"
#include "sparse_lu.hpp"

namespace flowgraph {

namespace {

using detail::SparseEntry;
using detail::SparseLu;

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class State : std::uint8_t { Basic, Lower, Upper, Free };

// Columns 0..n-1 are the structural variables; column n+i is the logical
// variable r_i of row i, defined by a_i x - r_i = 0 and bounded by the row's
// sense. The whole system is therefore [A -I] z = 0 with bounds on every z.
class Simplex {
 public:
  Simplex(const LpInstance& instance, const SimplexOptions& options);
  SolveResult run();

 private:
  void refactor();
  void compute_basics();
  double infeasibility(int var) const;
  bool in_phase_one() const;
  void price(bool phase1, const std::vector<double>& y, int& entering, double& reduced) const;
  double column_dot(int var, const std::vector<double>& y) const;
  void load_column(int var, std::vector<double>& dense) const;
  void make_nonbasic(int var);
  void compute_duals();
  SolveResult finish_result(SolveResult& result, std::chrono::steady_clock::time_point start, SolveStatus status,
                            std::size_t iterations) const;
  enum class DualOutcome { Optimal, Infeasible, IterationLimit, NeedPrimal };
  DualOutcome dual(std::size_t& iterations);

  const LpInstance& lp_;
  SimplexOptions opt_;
  int m_ = 0, n_ = 0;
  std::vector<int> col_start_, col_row_;
  std::vector<double> col_val_;
  std::vector<double> lo_, up_, cost_, x_;
  std::vector<State> state_;
  std::vector<int> head_;  // basis position -> column
  SparseLu lu_;
  std::vector<std::vector<SparseEntry>> basis_cols_;
  bool bland_ = false;
  std::vector<double> d_;  // reduced costs, kept current by the dual method
};

Simplex::Simplex(const LpInstance& instance, const SimplexOptions& options) : lp_(instance), opt_(options) {
  m_ = static_cast<int>(instance.num_rows());
  n_ = static_cast<int>(instance.num_vars());
  const int total = n_ + m_;
  if (opt_.max_iterations == 0) opt_.max_iterations = 50 * static_cast<std::size_t>(total);

  col_start_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (const auto& t : instance.all_terms()) ++col_start_[t.var + 1];
  for (int j = 0; j < n_; ++j) col_start_[j + 1] += col_start_[j];
  col_row_.resize(static_cast<std::size_t>(col_start_[n_]));
  col_val_.resize(col_row_.size());
  std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
  for (std::size_t r = 0; r < instance.num_rows(); ++r) {
    for (const auto& t : instance.terms(r)) {
      const int k = fill[t.var]++;
      col_row_[k] = static_cast<int>(r);
      col_val_[k] = t.coef;
    }
  }

  lo_.resize(total);
  up_.resize(total);
  cost_.assign(total, 0.0);
  x_.assign(total, 0.0);
  state_.assign(total, State::Lower);
  const auto& vars = instance.variables();
  for (int j = 0; j < n_; ++j) {
    lo_[j] = vars[j].lower;
    up_[j] = vars[j].upper;
    cost_[j] = instance.costs()[j];
    make_nonbasic(j);
  }
  const auto& rows = instance.rows();
  for (int i = 0; i < m_; ++i) {
    const auto& row = rows[i];
    double lo = -kInf, up = kInf;
    switch (row.sense) {
      case Sense::Le: up = row.rhs; break;
      case Sense::Ge: lo = row.rhs; break;
      case Sense::Eq: lo = up = row.rhs; break;
      case Sense::Range:
        lo = row.range_lo;
        up = row.rhs;
        break;
    }
    lo_[n_ + i] = lo;
    up_[n_ + i] = up;
    state_[n_ + i] = State::Basic;
  }
  head_.resize(m_);
  for (int i = 0; i < m_; ++i) head_[i] = n_ + i;
}

void Simplex::make_nonbasic(int var) {
  if (std::isfinite(lo_[var])) {
    state_[var] = State::Lower;
    x_[var] = lo_[var];
  } else if (std::isfinite(up_[var])) {
    state_[var] = State::Upper;
    x_[var] = up_[var];
  } else {
    state_[var] = State::Free;
    x_[var] = 0.0;
  }
}

void Simplex::refactor() {
  basis_cols_.resize(m_);
  for (int p = 0; p < m_; ++p) {
    auto& col = basis_cols_[p];
    col.clear();
    const int var = head_[p];
    if (var < n_) {
      for (int k = col_start_[var]; k < col_start_[var + 1]; ++k) col.push_back({col_row_[k], col_val_[k]});
    } else {
      col.push_back({var - n_, -1.0});
    }
  }
  auto deficiency = lu_.factor(m_, basis_cols_);
  if (deficiency.empty()) return;
  // Swap dependent columns for logicals and start over.
  for (const auto& [pos, row] : deficiency) {
    const int out = head_[pos];
    const int in = n_ + row;
    head_[pos] = in;
    state_[in] = State::Basic;
    make_nonbasic(out);
  }
  refactor();
}

void Simplex::load_column(int var, std::vector<double>& dense) const {
  std::fill(dense.begin(), dense.end(), 0.0);
  if (var < n_) {
    for (int k = col_start_[var]; k < col_start_[var + 1]; ++k) dense[col_row_[k]] = col_val_[k];
  } else {
    dense[var - n_] = -1.0;
  }
}

double Simplex::column_dot(int var, const std::vector<double>& y) const {
  if (var >= n_) return -y[var - n_];
  double s = 0.0;
  for (int k = col_start_[var]; k < col_start_[var + 1]; ++k) s += y[col_row_[k]] * col_val_[k];
  return s;
}

void Simplex::compute_basics() {
  std::vector<double> rhs(m_, 0.0);
  for (int j = 0; j < n_ + m_; ++j) {
    if (state_[j] == State::Basic || x_[j] == 0.0) continue;
    if (j < n_) {
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) rhs[col_row_[k]] -= col_val_[k] * x_[j];
    } else {
      rhs[j - n_] += x_[j];
    }
  }
  lu_.ftran(rhs);
  for (int p = 0; p < m_; ++p) x_[head_[p]] = rhs[p];
}

double Simplex::infeasibility(int var) const {
  const double v = x_[var];
  if (v < lo_[var] - opt_.feas_tol) return lo_[var] - v;
  if (v > up_[var] + opt_.feas_tol) return v - up_[var];
  return 0.0;
}

bool Simplex::in_phase_one() const {
  for (int p = 0; p < m_; ++p)
    if (infeasibility(head_[p]) > 0.0) return true;
  return false;
}

void Simplex::price(bool phase1, const std::vector<double>& y, int& entering, double& reduced) const {
  entering = -1;
  reduced = 0.0;
  double best = 0.0;
  for (int j = 0; j < n_ + m_; ++j) {
    const State s = state_[j];
    if (s == State::Basic) continue;
    if (s != State::Free && lo_[j] == up_[j]) continue;
    const double d = (phase1 ? 0.0 : cost_[j]) - column_dot(j, y);
    bool eligible = false;
    if (s == State::Lower) {
      eligible = d < -opt_.opt_tol;
    } else if (s == State::Upper) {
      eligible = d > opt_.opt_tol;
    } else {
      eligible = std::abs(d) > opt_.opt_tol;
    }
    if (!eligible) continue;
    if (bland_) {
      entering = j;
      reduced = d;
      return;
    }
    if (std::abs(d) > best) {
      best = std::abs(d);
      entering = j;
      reduced = d;
    }
  }
}

void Simplex::compute_duals() {
  std::vector<double> y(m_);
  for (int p = 0; p < m_; ++p) y[p] = cost_[head_[p]];
  lu_.btran(y);
  d_.assign(n_ + m_, 0.0);
  for (int j = 0; j < n_ + m_; ++j)
    if (state_[j] != State::Basic) d_[j] = cost_[j] - column_dot(j, y);
}

// Dual simplex with steepest-edge row choice and a bound-flipping ratio test.
// Needs a dual feasible start; returns NeedPrimal when there is none or when
// the final basis is not dual feasible after a fresh factorisation.
Simplex::DualOutcome Simplex::dual(std::size_t& iterations) {
  const int total = n_ + m_;
  const double dtol = opt_.opt_tol;
  compute_duals();
  bool moved = false;
  for (int j = 0; j < total; ++j) {
    const State s = state_[j];
    if (s == State::Basic || lo_[j] == up_[j]) continue;
    const bool has_lo = std::isfinite(lo_[j]), has_up = std::isfinite(up_[j]);
    if (has_lo && has_up) {
      const State want = d_[j] >= 0.0 ? State::Lower : State::Upper;
      if (want != s) {
        state_[j] = want;
        x_[j] = want == State::Lower ? lo_[j] : up_[j];
        moved = true;
      }
    } else if (has_lo ? d_[j] < -dtol : (has_up ? d_[j] > dtol : std::abs(d_[j]) > dtol)) {
      return DualOutcome::NeedPrimal;
    }
  }
  if (moved) compute_basics();

  std::vector<double> weight(m_, 1.0);
  std::vector<double> rho(m_, 0.0), alpha(m_, 0.0), tau(m_, 0.0), flip_col(m_, 0.0);
  std::vector<int> rho_nz, alpha_nz, tau_nz, flip_nz;
  auto clear = [](std::vector<double>& v, std::vector<int>& nz) {
    for (int i : nz) v[i] = 0.0;
    nz.clear();
  };
  std::vector<double> row(total, 0.0);
  std::vector<int> touched;
  std::vector<char> listed(m_, 0);
  std::vector<int> infeasible;
  auto primal_infeasibility = [&](int p) {
    const int var = head_[p];
    const double v = x_[var];
    if (v < lo_[var] - opt_.feas_tol) return v - lo_[var];
    if (v > up_[var] + opt_.feas_tol) return v - up_[var];
    return 0.0;
  };
  auto rebuild_list = [&] {
    infeasible.clear();
    std::fill(listed.begin(), listed.end(), 0);
    for (int p = 0; p < m_; ++p)
      if (primal_infeasibility(p) != 0.0) {
        infeasible.push_back(p);
        listed[p] = 1;
      }
  };
  auto note_change = [&](int p) {
    if (!listed[p] && primal_infeasibility(p) != 0.0) {
      infeasible.push_back(p);
      listed[p] = 1;
    }
  };
  auto refresh = [&] {
    refactor();
    compute_basics();
    compute_duals();
    rebuild_list();
  };
  rebuild_list();

  struct Candidate {
    int var;
    double ratio;
    double abs_alpha;
  };
  std::vector<Candidate> candidates;
  std::vector<int> flips;
  std::vector<char> flip_mark(m_, 0);
  auto add_flip = [&](int i, double v) {
    if (!flip_mark[i]) {
      flip_mark[i] = 1;
      flip_nz.push_back(i);
    }
    flip_col[i] += v;
  };
  bool fresh = true;

  while (true) {
    if (lu_.num_updates() >= opt_.refactor_interval) {
      refresh();
      fresh = true;
    }
    clear(rho, rho_nz);
    clear(alpha, alpha_nz);
    clear(tau, tau_nz);
    clear(flip_col, flip_nz);

    // Row choice: largest squared infeasibility over the steepest-edge weight.
    int p = -1;
    double best = 0.0, delta = 0.0;
    for (std::size_t k = 0; k < infeasible.size();) {
      const int i = infeasible[k];
      const double inf = primal_infeasibility(i);
      if (inf == 0.0) {
        listed[i] = 0;
        infeasible[k] = infeasible.back();
        infeasible.pop_back();
        continue;
      }
      const double score = inf * inf / weight[i];
      if (score > best) {
        best = score;
        p = i;
        delta = inf;
      }
      ++k;
    }
    if (p < 0) {
      if (!fresh) {
        refresh();
        fresh = true;
        continue;
      }
      for (int j = 0; j < total; ++j) {
        const State s = state_[j];
        if (s == State::Basic || lo_[j] == up_[j]) continue;
        if ((s == State::Lower && d_[j] < -dtol) || (s == State::Upper && d_[j] > dtol) ||
            (s == State::Free && std::abs(d_[j]) > dtol))
          return DualOutcome::NeedPrimal;
      }
      return DualOutcome::Optimal;
    }
    if (iterations >= opt_.max_iterations) return DualOutcome::IterationLimit;
    const double sigma = delta < 0.0 ? 1.0 : -1.0;  // +1: leaves at its lower bound

    rho[p] = 1.0;
    rho_nz.push_back(p);
    lu_.btran(rho, rho_nz);

    // Pivot row over the nonbasic columns.
    touched.clear();
    for (int i : rho_nz) {
      const double ri = rho[i];
      if (std::abs(ri) < 1e-12) continue;
      for (const auto& t : lp_.terms(static_cast<std::size_t>(i))) {
        if (state_[t.var] == State::Basic) continue;
        if (row[t.var] == 0.0) touched.push_back(t.var);
        row[t.var] += ri * t.coef;
        if (row[t.var] == 0.0) row[t.var] = 1e-300;
      }
      const int logical = n_ + i;
      if (state_[logical] != State::Basic) {
        if (row[logical] == 0.0) touched.push_back(logical);
        row[logical] -= ri;
      }
    }

    candidates.clear();
    for (int j : touched) {
      const State s = state_[j];
      if (s != State::Free && lo_[j] == up_[j]) continue;
      const double a = sigma * row[j];
      if (std::abs(a) <= opt_.pivot_tol) continue;
      double slack;
      if (s == State::Lower && a < 0.0) {
        slack = std::max(d_[j], 0.0);
      } else if (s == State::Upper && a > 0.0) {
        slack = std::max(-d_[j], 0.0);
      } else if (s == State::Free) {
        slack = std::abs(d_[j]);
      } else {
        continue;
      }
      candidates.push_back({j, slack / std::abs(a), std::abs(a)});
    }

    // Bound-flipping ratio test with Harris tolerances in each pass.
    flips.clear();
    double slope = std::abs(delta);
    int q = -1;
    double step = 0.0;
    std::size_t live = candidates.size();
    while (live > 0) {
      double bound = kInf;
      for (std::size_t k = 0; k < live; ++k) {
        const auto& c = candidates[k];
        bound = std::min(bound, c.ratio + dtol / c.abs_alpha);
      }
      double drop = 0.0;
      int pick = -1;
      double pick_alpha = 0.0;
      for (std::size_t k = 0; k < live; ++k) {
        const auto& c = candidates[k];
        if (c.ratio > bound) continue;
        drop += c.abs_alpha * (up_[c.var] - lo_[c.var]);
        if (c.abs_alpha > pick_alpha) {
          pick_alpha = c.abs_alpha;
          pick = static_cast<int>(k);
        }
      }
      if (std::isfinite(drop) && slope - drop > 0.0) {
        slope -= drop;
        for (std::size_t k = 0; k < live;) {
          if (candidates[k].ratio <= bound) {
            flips.push_back(candidates[k].var);
            candidates[k] = candidates[--live];
          } else {
            ++k;
          }
        }
        continue;
      }
      q = candidates[pick].var;
      step = candidates[pick].ratio;
      break;
    }
    if (q < 0) {
      for (int j : touched) row[j] = 0.0;
      if (!fresh) {
        refresh();
        fresh = true;
        continue;
      }
      return DualOutcome::Infeasible;
    }

    if (q < n_) {
      for (int k = col_start_[q]; k < col_start_[q + 1]; ++k) {
        alpha[col_row_[k]] = col_val_[k];
        alpha_nz.push_back(col_row_[k]);
      }
    } else {
      alpha[q - n_] = -1.0;
      alpha_nz.push_back(q - n_);
    }
    lu_.ftran(alpha, alpha_nz);
    const double pivot = alpha[p];
    if (std::abs(pivot - row[q]) > 1e-7 * std::max(1.0, std::abs(pivot)) || std::abs(pivot) <= opt_.pivot_tol) {
      for (int j : touched) row[j] = 0.0;
      if (!fresh) {
        refresh();
        fresh = true;
        continue;
      }
    }

    // Dual update; flipped candidates keep the sign their new bound needs.
    const double ds = sigma * step;
    for (int j : touched) {
      if (j != q) d_[j] += ds * row[j];
      row[j] = 0.0;
    }
    d_[q] = 0.0;

    if (!flips.empty()) {
      for (int j : flips) {
        const double change = state_[j] == State::Lower ? up_[j] - lo_[j] : lo_[j] - up_[j];
        state_[j] = state_[j] == State::Lower ? State::Upper : State::Lower;
        x_[j] = state_[j] == State::Lower ? lo_[j] : up_[j];
        if (j < n_) {
          for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) add_flip(col_row_[k], -col_val_[k] * change);
        } else {
          add_flip(j - n_, change);
        }
      }
      for (int i : flip_nz) flip_mark[i] = 0;
      lu_.ftran(flip_col, flip_nz);
      for (int i : flip_nz)
        if (flip_col[i] != 0.0) {
          x_[head_[i]] += flip_col[i];
          note_change(i);
        }
    }

    // Primal step: the leaving variable lands on the bound it violated.
    const int out = head_[p];
    const double target = sigma > 0.0 ? lo_[out] : up_[out];
    const double theta = (x_[out] - target) / pivot;
    for (int i : alpha_nz) x_[head_[i]] -= theta * alpha[i];
    x_[q] += theta;

    // Steepest-edge weights.
    double rho_norm = 0.0;
    for (int i : rho_nz) {
      rho_norm += rho[i] * rho[i];
      tau[i] = rho[i];
    }
    tau_nz = rho_nz;
    lu_.ftran(tau, tau_nz);
    for (int i : alpha_nz) {
      if (i == p || alpha[i] == 0.0) continue;
      const double r = alpha[i] / pivot;
      weight[i] = std::max(weight[i] + r * (r * rho_norm - 2.0 * tau[i]), 1e-4);
    }
    weight[p] = std::max(rho_norm / (pivot * pivot), 1e-4);

    x_[out] = target;
    state_[out] = sigma > 0.0 ? State::Lower : State::Upper;
    if (lo_[out] == up_[out]) state_[out] = State::Lower;
    d_[out] = ds;
    head_[p] = q;
    state_[q] = State::Basic;
    lu_.update(p, alpha, alpha_nz);
    for (int i : alpha_nz) note_change(i);
    fresh = false;
    ++iterations;
  }
}

SolveResult Simplex::finish_result(SolveResult& result, std::chrono::steady_clock::time_point start,
                                   SolveStatus status, std::size_t iterations) const {
  result.status = status;
  result.iterations = iterations;
  if (status == SolveStatus::Optimal) {
    result.primal.assign(x_.begin(), x_.begin() + n_);
    result.objective = lp_.objective_value(result.primal);
  }
  result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

SolveResult Simplex::run() {
  const auto start = std::chrono::steady_clock::now();
  SolveResult result;
  if (lp_.has_integers()) result.warnings.push_back("integrality marks relaxed; solving the LP relaxation");
  bland_ = opt_.pricing == Pricing::Bland;

  refactor();
  compute_basics();

  std::size_t iterations = 0;
  if (!bland_) {
    switch (dual(iterations)) {
      case DualOutcome::Optimal:
        return finish_result(result, start, SolveStatus::Optimal, iterations);
      case DualOutcome::Infeasible:
        return finish_result(result, start, SolveStatus::Infeasible, iterations);
      case DualOutcome::IterationLimit:
        return finish_result(result, start, SolveStatus::IterationLimit, iterations);
      case DualOutcome::NeedPrimal:
        refactor();
        compute_basics();
        break;
    }
  }

  std::vector<double> y(m_), alpha(m_);
  bool fresh = true;
  bool last_phase1 = true;
  double best_progress = kInf;
  std::size_t since_progress = 0;
  const double harris_tol = 0.5 * opt_.feas_tol;

  auto finish = [&](SolveStatus status) { return finish_result(result, start, status, iterations); };

  while (true) {
    if (lu_.num_updates() >= opt_.refactor_interval) {
      refactor();
      compute_basics();
      fresh = true;
    }
    const bool phase1 = in_phase_one();
    if (phase1 != last_phase1) {
      last_phase1 = phase1;
      best_progress = kInf;
      since_progress = 0;
      bland_ = opt_.pricing == Pricing::Bland;
    }

    double progress = 0.0;
    for (int p = 0; p < m_; ++p) {
      const int var = head_[p];
      if (phase1) {
        const double v = x_[var];
        y[p] = v < lo_[var] - opt_.feas_tol ? -1.0 : (v > up_[var] + opt_.feas_tol ? 1.0 : 0.0);
        progress += infeasibility(var);
      } else {
        y[p] = cost_[var];
      }
    }
    if (!phase1)
      for (int j = 0; j < n_; ++j) progress += cost_[j] * x_[j];
    if (progress < best_progress - 1e-9 * std::max(1.0, std::abs(best_progress))) {
      best_progress = progress;
      since_progress = 0;
    } else if (++since_progress >= opt_.stall_window && !bland_) {
      bland_ = true;
      since_progress = 0;
    }

    lu_.btran(y);
    int q = -1;
    double dq = 0.0;
    price(phase1, y, q, dq);
    if (q < 0) {
      if (!fresh) {
        refactor();
        compute_basics();
        fresh = true;
        continue;
      }
      return finish(phase1 ? SolveStatus::Infeasible : SolveStatus::Optimal);
    }
    if (iterations >= opt_.max_iterations) return finish(SolveStatus::IterationLimit);

    load_column(q, alpha);
    lu_.ftran(alpha);
    const double dir = dq < 0.0 ? 1.0 : -1.0;

    // Ratio test. Each basic variable moves at rate -dir*alpha[p]; in phase
    // one an infeasible variable is only blocked by the bound it violates.
    auto blocking_bound = [&](int p, double rate, double& bound) {
      const int var = head_[p];
      const double v = x_[var];
      if (rate > 0.0) {
        if (v > up_[var] + opt_.feas_tol) return false;
        bound = v < lo_[var] - opt_.feas_tol ? lo_[var] : up_[var];
      } else {
        if (v < lo_[var] - opt_.feas_tol) return false;
        bound = v > up_[var] + opt_.feas_tol ? up_[var] : lo_[var];
      }
      return std::isfinite(bound);
    };

    int leave = -1;
    double theta = kInf, leave_bound = 0.0;
    if (bland_) {
      for (int p = 0; p < m_; ++p) {
        if (std::abs(alpha[p]) <= opt_.pivot_tol) continue;
        const double rate = -dir * alpha[p];
        double bound;
        if (!blocking_bound(p, rate, bound)) continue;
        const double ratio = std::max(0.0, (bound - x_[head_[p]]) / rate);
        if (ratio < theta || (ratio == theta && leave >= 0 && head_[p] < head_[leave])) {
          theta = ratio;
          leave = p;
          leave_bound = bound;
        }
      }
    } else {
      double relaxed = kInf;
      for (int p = 0; p < m_; ++p) {
        if (std::abs(alpha[p]) <= opt_.pivot_tol) continue;
        const double rate = -dir * alpha[p];
        double bound;
        if (!blocking_bound(p, rate, bound)) continue;
        const double slack = rate > 0.0 ? bound + harris_tol - x_[head_[p]] : bound - harris_tol - x_[head_[p]];
        relaxed = std::min(relaxed, slack / rate);
      }
      double best_pivot = 0.0;
      for (int p = 0; p < m_; ++p) {
        if (std::abs(alpha[p]) <= opt_.pivot_tol) continue;
        const double rate = -dir * alpha[p];
        double bound;
        if (!blocking_bound(p, rate, bound)) continue;
        const double ratio = (bound - x_[head_[p]]) / rate;
        if (ratio <= relaxed && std::abs(alpha[p]) > best_pivot) {
          best_pivot = std::abs(alpha[p]);
          leave = p;
          leave_bound = bound;
          theta = std::max(0.0, ratio);
        }
      }
    }

    const double span = up_[q] - lo_[q];
    const bool flip = std::isfinite(span) && span <= theta;
    if (leave < 0 && !flip) {
      if (phase1) throw Error(ErrorCode::SolverFailure, "phase one ray; numerical trouble");
      return finish(SolveStatus::Unbounded);
    }
    if (flip) theta = span;

    for (int p = 0; p < m_; ++p)
      if (alpha[p] != 0.0) x_[head_[p]] -= dir * alpha[p] * theta;
    if (flip) {
      if (state_[q] == State::Lower) {
        state_[q] = State::Upper;
        x_[q] = up_[q];
      } else {
        state_[q] = State::Lower;
        x_[q] = lo_[q];
      }
    } else {
      x_[q] += dir * theta;
      const int out = head_[leave];
      x_[out] = leave_bound;
      state_[out] = leave_bound == lo_[out] ? State::Lower : State::Upper;
      head_[leave] = q;
      state_[q] = State::Basic;
      lu_.update(leave, alpha);
    }
    fresh = false;
    ++iterations;
  }
}

}  // namespace

SolveResult solve_reference(const LpInstance& instance, const SimplexOptions& options) {
  if (!(options.feas_tol > 0.0) || !(options.pivot_tol > 0.0) || !(options.opt_tol > 0.0))
    throw Error(ErrorCode::InvariantViolation, "simplex tolerances must be positive");
  Simplex simplex(instance, options);
  return simplex.run();
}

std::vector<std::string> check_primal(const LpInstance& instance, std::span<const double> primal, double tol) {
  std::vector<std::string> out;
  const auto& vars = instance.variables();
  if (primal.size() < vars.size()) {
    out.push_back("primal has " + std::to_string(primal.size()) + " values for " + std::to_string(vars.size()) +
                  " columns");
    return out;
  }
  auto violated = [&](double value, double lo, double up) {
    if (std::isfinite(lo) && value < lo - tol * std::max(1.0, std::abs(lo))) return true;
    if (std::isfinite(up) && value > up + tol * std::max(1.0, std::abs(up))) return true;
    return !std::isfinite(value);
  };
  for (std::size_t j = 0; j < vars.size(); ++j)
    if (violated(primal[j], vars[j].lower, vars[j].upper)) out.push_back("bound " + vars[j].name());
  const auto& rows = instance.rows();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    double activity = 0.0;
    for (const auto& t : instance.terms(r)) activity += t.coef * primal[t.var];
    const auto& row = rows[r];
    double lo = -kInf, up = kInf;
    switch (row.sense) {
      case Sense::Le: up = row.rhs; break;
      case Sense::Ge: lo = row.rhs; break;
      case Sense::Eq: lo = up = row.rhs; break;
      case Sense::Range:
        lo = row.range_lo;
        up = row.rhs;
        break;
    }
    if (violated(activity, lo, up)) out.push_back(row.name());
  }
  return out;
}

}  // namespace flowgraph
