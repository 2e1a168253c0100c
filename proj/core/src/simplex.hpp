// Dense-tableau bounded-variable simplex, shared by the floating-point solver
// and the exact rational certifier.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <gmpxx.h>

#include "stab/error.hpp"
#include "stab/lp.hpp"

namespace stab::detail {

template <class T>
struct Arith;

template <>
struct Arith<double> {
  static double from(double v) { return v; }
  static double abs(double v) { return std::fabs(v); }
  static bool is_zero(double v) { return v == 0.0; }
  static double pivot_tol() { return kPivotTol; }
  // Basic variables are driven this close to their bounds so that reported
  // optima clear the public kFeasTol contract with margin.
  static double feas_tol() { return 1e-9; }
  // Phase-one residual above which the program is declared infeasible.
  static double infeas_tol() { return kFeasTol; }
  static double cost_tol() { return 1e-9; }
  static double tie_tol() { return 1e-12; }
  // Entries this small after elimination are rounding noise.
  static void clean(double& v) {
    if (std::fabs(v) < 1e-13) v = 0.0;
  }
};

template <>
struct Arith<mpq_class> {
  static mpq_class from(double v) { return mpq_class(v); }
  static mpq_class abs(const mpq_class& v) { return ::abs(v); }
  static bool is_zero(const mpq_class& v) { return sgn(v) == 0; }
  static mpq_class pivot_tol() { return 0; }
  static mpq_class feas_tol() { return 0; }
  static mpq_class infeas_tol() { return 0; }
  static mpq_class cost_tol() { return 0; }
  static mpq_class tie_tol() { return 0; }
  static void clean(mpq_class&) {}
};

enum class ColStatus : char { Basic, AtLower, AtUpper };

template <class T>
class Simplex {
  using A = Arith<T>;

 public:
  explicit Simplex(const LinearProgram& lp)
      : m_(lp.num_rows()), nv_(lp.num_vars()), ncols_(nv_ + 2 * m_) {
    rows_.assign(m_, std::vector<T>(nv_, T(0)));
    rhs_.resize(m_);
    slack_coef_.resize(m_);
    art_coef_.assign(m_, T(1));
    for (int i = 0; i < m_; ++i) {
      const Row& row = lp.row(i);
      for (const Term& t : row.terms) rows_[i][t.var] += A::from(t.coef);
      rhs_[i] = A::from(row.rhs);
      slack_coef_[i] = row.rel == Relation::GreaterEq ? T(-1) : T(1);
    }
    lo_.assign(ncols_, T(0));
    hi_.assign(ncols_, T(0));
    hi_inf_.assign(ncols_, 0);
    cost_.assign(nv_, T(0));
    for (int j = 0; j < nv_; ++j) {
      lo_[j] = A::from(lp.lower(j));
      if (std::isinf(lp.upper(j)))
        hi_inf_[j] = 1;
      else
        hi_[j] = A::from(lp.upper(j));
      cost_[j] = A::from(lp.cost(j));
    }
    for (int i = 0; i < m_; ++i) {
      const int s = nv_ + i;
      hi_inf_[s] = lp.row(i).rel == Relation::Equal ? 0 : 1;
    }
    max_iterations_ = std::max(20000, 60 * (m_ + ncols_));
  }

  LpStatus run(const Basis* warm) {
    LpStatus status;
    if (warm != nullptr && install(*warm)) {
      warm_used_ = true;
      status = warm_phase();
      if (status == LpStatus::Optimal) return status;
      // A warm verdict of infeasibility is confirmed from scratch.
      warm_used_ = false;
    }
    return cold_phase();
  }

  std::vector<T> primal() const {
    std::vector<T> x(nv_);
    for (int j = 0; j < nv_; ++j) x[j] = value_of(j);
    return x;
  }

  T objective() const {
    T z(0);
    for (int j = 0; j < nv_; ++j)
      if (!A::is_zero(cost_[j])) z += cost_[j] * value_of(j);
    return z;
  }

  Basis basis() const {
    Basis b;
    for (int i = 0; i < m_; ++i) {
      // An artificial stuck in the basis at zero stands in for its row slack.
      const int h = head_[i];
      b.basic.push_back(h >= nv_ + m_ ? h - m_ : h);
    }
    for (int j = 0; j < nv_; ++j)
      if (stat_[j] == ColStatus::AtUpper) b.at_upper.push_back(j);
    return b;
  }

  int iterations() const { return iterations_; }
  bool warm_used() const { return warm_used_; }

 private:
  bool fixed(int j) const { return !hi_inf_[j] && lo_[j] == hi_[j]; }

  T nonbasic_value(int j) const {
    return stat_[j] == ColStatus::AtUpper ? hi_[j] : lo_[j];
  }

  T value_of(int j) const {
    if (stat_[j] == ColStatus::Basic) {
      for (int i = 0; i < m_; ++i)
        if (head_[i] == j) return xb_[i];
    }
    return nonbasic_value(j);
  }

  // Tableau for a basis in which row i's basic column is its own slack
  // (use_art[i] == 0) or artificial.
  void load_diagonal(const std::vector<char>& use_art) {
    tab_.assign(m_, std::vector<T>(ncols_, T(0)));
    beta_.assign(m_, T(0));
    head_.assign(m_, 0);
    stat_.assign(ncols_, ColStatus::AtLower);
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < nv_; ++j) tab_[i][j] = rows_[i][j];
      tab_[i][nv_ + i] = slack_coef_[i];
      tab_[i][nv_ + m_ + i] = art_coef_[i];
      const int h = use_art[i] ? nv_ + m_ + i : nv_ + i;
      const T piv = tab_[i][h];
      beta_[i] = rhs_[i];
      if (piv != T(1)) {
        for (T& v : tab_[i]) v /= piv;
        beta_[i] /= piv;
      }
      head_[i] = h;
      stat_[h] = ColStatus::Basic;
    }
  }

  void compute_xb() {
    std::vector<std::pair<int, T>> nz;
    for (int j = 0; j < ncols_; ++j) {
      if (stat_[j] == ColStatus::Basic) continue;
      T v = nonbasic_value(j);
      if (!A::is_zero(v)) nz.emplace_back(j, std::move(v));
    }
    xb_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      T v = beta_[i];
      for (const auto& [j, val] : nz)
        if (!A::is_zero(tab_[i][j])) v -= tab_[i][j] * val;
      xb_[i] = std::move(v);
    }
  }

  void compute_duals(const std::vector<T>& phase_cost) {
    d_ = phase_cost;
    for (int i = 0; i < m_; ++i) {
      const T& cb = phase_cost[head_[i]];
      if (A::is_zero(cb)) continue;
      for (int j = 0; j < ncols_; ++j)
        if (!A::is_zero(tab_[i][j])) d_[j] -= cb * tab_[i][j];
    }
    for (int i = 0; i < m_; ++i) d_[head_[i]] = T(0);
  }

  void pivot(int r, int q, ColStatus leaving_status) {
    std::vector<T>& prow = tab_[r];
    const T piv = prow[q];
    std::vector<int> nz;
    for (int j = 0; j < ncols_; ++j) {
      if (A::is_zero(prow[j])) continue;
      prow[j] /= piv;
      nz.push_back(j);
    }
    beta_[r] /= piv;
    prow[q] = T(1);
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      std::vector<T>& row = tab_[i];
      if (A::is_zero(row[q])) continue;
      const T f = row[q];
      for (int j : nz) {
        row[j] -= f * prow[j];
        A::clean(row[j]);
      }
      row[q] = T(0);
      beta_[i] -= f * beta_[r];
    }
    if (!A::is_zero(d_[q])) {
      const T f = d_[q];
      for (int j : nz) {
        d_[j] -= f * prow[j];
        A::clean(d_[j]);
      }
      d_[q] = T(0);
    }
    stat_[head_[r]] = leaving_status;
    head_[r] = q;
    stat_[q] = ColStatus::Basic;
  }

  void count_iteration(bool degenerate) {
    if (++iterations_ > max_iterations_) throw LpError("cycling guard tripped");
    degenerate_run_ = degenerate ? degenerate_run_ + 1 : 0;
    if (degenerate_run_ > kDegenerateLimit) bland_ = true;
  }

  bool primal_feasible() const {
    const T tol = A::feas_tol();
    for (int i = 0; i < m_; ++i) {
      const int h = head_[i];
      if (xb_[i] < lo_[h] - tol) return false;
      if (!hi_inf_[h] && xb_[i] > hi_[h] + tol) return false;
    }
    return true;
  }

  bool dual_feasible() const {
    const T tol = A::cost_tol();
    for (int j = 0; j < ncols_; ++j) {
      if (stat_[j] == ColStatus::Basic || fixed(j)) continue;
      if (stat_[j] == ColStatus::AtLower && d_[j] < -tol) return false;
      if (stat_[j] == ColStatus::AtUpper && d_[j] > tol) return false;
    }
    return true;
  }

  // Primal simplex on the current (feasible) basis and reduced costs.
  LpStatus primal_loop() {
    const T ptol = A::pivot_tol();
    const T ctol = A::cost_tol();
    for (;;) {
      int q = -1;
      T best_score(0);
      for (int j = 0; j < ncols_; ++j) {
        if (stat_[j] == ColStatus::Basic || fixed(j)) continue;
        T score;
        if (stat_[j] == ColStatus::AtLower && d_[j] < -ctol)
          score = -d_[j];
        else if (stat_[j] == ColStatus::AtUpper && d_[j] > ctol)
          score = d_[j];
        else
          continue;
        if (bland_) {
          q = j;
          break;
        }
        if (q < 0 || score > best_score) {
          q = j;
          best_score = score;
        }
      }
      if (q < 0) return LpStatus::Optimal;

      const bool increasing = stat_[q] == ColStatus::AtLower;
      int leave = -1;
      bool leave_to_upper = false;
      T best(0);
      T best_alpha(0);
      for (int i = 0; i < m_; ++i) {
        const T a = increasing ? tab_[i][q] : T(-tab_[i][q]);
        const int h = head_[i];
        T limit;
        bool to_upper;
        if (a > ptol) {
          limit = (xb_[i] - lo_[h]) / a;
          to_upper = false;
        } else if (a < -ptol && !hi_inf_[h]) {
          limit = (hi_[h] - xb_[i]) / (-a);
          to_upper = true;
        } else {
          continue;
        }
        if (limit < T(0)) limit = T(0);
        const T abs_a = A::abs(a);
        bool take = leave < 0 || limit < best - A::tie_tol();
        if (!take && limit <= best + A::tie_tol()) {
          take = bland_ ? h < head_[leave] : abs_a > best_alpha;
        }
        if (take) {
          leave = i;
          best = limit;
          best_alpha = abs_a;
          leave_to_upper = to_upper;
        }
      }
      const bool can_flip = !hi_inf_[q];
      const T flip = can_flip ? T(hi_[q] - lo_[q]) : T(0);
      if (leave < 0 && !can_flip) return LpStatus::Unbounded;
      if (can_flip && (leave < 0 || flip <= best)) {
        stat_[q] = increasing ? ColStatus::AtUpper : ColStatus::AtLower;
        count_iteration(false);
      } else {
        pivot(leave, q,
              leave_to_upper ? ColStatus::AtUpper : ColStatus::AtLower);
        count_iteration(best <= A::tie_tol());
      }
      compute_xb();
    }
  }

  // Dual simplex on a dual-feasible basis until primal feasible.
  LpStatus dual_loop() {
    const T ptol = A::pivot_tol();
    const T ftol = A::feas_tol();
    for (;;) {
      int r = -1;
      T worst(0);
      bool below = false;
      for (int i = 0; i < m_; ++i) {
        const int h = head_[i];
        T gap(0);
        bool is_below = false;
        if (xb_[i] < lo_[h] - ftol) {
          gap = lo_[h] - xb_[i];
          is_below = true;
        } else if (!hi_inf_[h] && xb_[i] > hi_[h] + ftol) {
          gap = xb_[i] - hi_[h];
        } else {
          continue;
        }
        if (r < 0 || (bland_ ? h < head_[r] : gap > worst)) {
          r = i;
          worst = gap;
          below = is_below;
        }
      }
      if (r < 0) return LpStatus::Optimal;

      int q = -1;
      T best(0);
      T best_alpha(0);
      for (int j = 0; j < ncols_; ++j) {
        if (stat_[j] == ColStatus::Basic || fixed(j)) continue;
        const T& a = tab_[r][j];
        const bool at_lower = stat_[j] == ColStatus::AtLower;
        bool eligible;
        if (below)
          eligible = at_lower ? a < -ptol : a > ptol;
        else
          eligible = at_lower ? a > ptol : a < -ptol;
        if (!eligible) continue;
        const T abs_a = A::abs(a);
        const T ratio = A::abs(d_[j]) / abs_a;
        bool take = q < 0 || ratio < best - A::tie_tol();
        if (!take && ratio <= best + A::tie_tol())
          take = bland_ ? false : abs_a > best_alpha;
        if (take) {
          q = j;
          best = ratio;
          best_alpha = abs_a;
        }
      }
      if (q < 0) return LpStatus::Infeasible;
      pivot(r, q, below ? ColStatus::AtLower : ColStatus::AtUpper);
      count_iteration(best <= A::tie_tol());
      compute_xb();
    }
  }

  std::vector<T> phase_two_cost() const {
    std::vector<T> c(ncols_, T(0));
    for (int j = 0; j < nv_; ++j) c[j] = cost_[j];
    return c;
  }

  bool install(const Basis& warm) {
    if (static_cast<int>(warm.basic.size()) != m_) return false;
    std::vector<char> wanted(ncols_, 0);
    for (int c : warm.basic) {
      if (c < 0 || c >= nv_ + m_ || wanted[c]) return false;
      wanted[c] = 1;
    }
    load_diagonal(std::vector<char>(m_, 0));
    for (int i = 0; i < m_; ++i) {
      lo_[nv_ + m_ + i] = T(0);
      hi_[nv_ + m_ + i] = T(0);
      hi_inf_[nv_ + m_ + i] = 0;
    }
    d_.assign(ncols_, T(0));
    for (int c : warm.basic) {
      if (stat_[c] == ColStatus::Basic) continue;
      int r = -1;
      T best(0);
      for (int i = 0; i < m_; ++i) {
        if (wanted[head_[i]]) continue;
        const T a = A::abs(tab_[i][c]);
        if (a > A::pivot_tol() && (r < 0 || a > best)) {
          r = i;
          best = a;
        }
      }
      if (r < 0) return false;
      pivot(r, c, ColStatus::AtLower);
    }
    for (int j : warm.at_upper) {
      if (j >= 0 && j < nv_ && stat_[j] != ColStatus::Basic && !hi_inf_[j])
        stat_[j] = ColStatus::AtUpper;
    }
    compute_xb();
    return true;
  }

  LpStatus warm_phase() {
    compute_duals(phase_two_cost());
    if (primal_feasible()) return primal_loop();
    if (!dual_feasible()) return LpStatus::Infeasible;
    const LpStatus st = dual_loop();
    if (st != LpStatus::Optimal) return st;
    return primal_loop();
  }

  LpStatus cold_phase() {
    bland_ = false;
    degenerate_run_ = 0;
    // Nonbasic structurals start at their lower bounds.
    std::vector<char> use_art(m_, 0);
    for (int i = 0; i < m_; ++i) {
      T r = rhs_[i];
      for (int j = 0; j < nv_; ++j)
        if (!A::is_zero(rows_[i][j]) && !A::is_zero(lo_[j]))
          r -= rows_[i][j] * lo_[j];
      const T s = r / slack_coef_[i];
      const bool slack_ok =
          s >= T(0) && (hi_inf_[nv_ + i] || s <= hi_[nv_ + i]);
      if (!slack_ok) {
        use_art[i] = 1;
        art_coef_[i] = r < T(0) ? T(-1) : T(1);
      }
    }
    for (int i = 0; i < m_; ++i) {
      const int a = nv_ + m_ + i;
      lo_[a] = T(0);
      hi_[a] = T(0);
      hi_inf_[a] = use_art[i] ? 1 : 0;
    }
    load_diagonal(use_art);
    compute_xb();
    if (std::find(use_art.begin(), use_art.end(), 1) != use_art.end()) {
      std::vector<T> phase_one(ncols_, T(0));
      for (int i = 0; i < m_; ++i)
        if (use_art[i]) phase_one[nv_ + m_ + i] = T(1);
      compute_duals(phase_one);
      primal_loop();
      T infeasibility(0);
      for (int i = 0; i < m_; ++i)
        if (head_[i] >= nv_ + m_) infeasibility += xb_[i];
      if (infeasibility > A::infeas_tol()) return LpStatus::Infeasible;
      for (int i = 0; i < m_; ++i) hi_inf_[nv_ + m_ + i] = 0;
      bland_ = false;
      degenerate_run_ = 0;
    }
    compute_duals(phase_two_cost());
    return primal_loop();
  }

  static constexpr int kDegenerateLimit = 50;

  int m_;
  int nv_;
  int ncols_;
  std::vector<std::vector<T>> rows_;
  std::vector<T> rhs_;
  std::vector<T> slack_coef_;
  std::vector<T> art_coef_;
  std::vector<T> lo_;
  std::vector<T> hi_;
  std::vector<char> hi_inf_;
  std::vector<T> cost_;

  std::vector<std::vector<T>> tab_;
  std::vector<T> beta_;
  std::vector<T> xb_;
  std::vector<T> d_;
  std::vector<int> head_;
  std::vector<ColStatus> stat_;

  int iterations_ = 0;
  int max_iterations_ = 0;
  int degenerate_run_ = 0;
  bool bland_ = false;
  bool warm_used_ = false;
};

}  // namespace stab::detail
