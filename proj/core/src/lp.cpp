#include "stab/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "simplex.hpp"
#include "stab/error.hpp"

namespace stab {

int LinearProgram::add_variable(double lo, double hi, double cost) {
  if (!std::isfinite(lo) || lo > hi) throw Error("invalid variable bounds");
  lo_.push_back(lo);
  hi_.push_back(hi);
  cost_.push_back(cost);
  return num_vars() - 1;
}

int LinearProgram::add_row(Row row) {
  for (const Term& t : row.terms) {
    if (t.var < 0 || t.var >= num_vars())
      throw Error("row references unknown variable " + std::to_string(t.var));
  }
  rows_.push_back(std::move(row));
  return num_rows() - 1;
}

void LinearProgram::set_cost(int var, double cost) { cost_.at(var) = cost; }

void LinearProgram::clear_objective() {
  std::fill(cost_.begin(), cost_.end(), 0.0);
}

void LinearProgram::set_bounds(int var, double lo, double hi) {
  if (!std::isfinite(lo) || lo > hi) throw Error("invalid variable bounds");
  lo_.at(var) = lo;
  hi_.at(var) = hi;
}

double LinearProgram::max_row_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (const Row& row : rows_) {
    double lhs = 0.0;
    for (const Term& t : row.terms) lhs += t.coef * x[t.var];
    double v = 0.0;
    switch (row.rel) {
      case Relation::LessEq: v = lhs - row.rhs; break;
      case Relation::GreaterEq: v = row.rhs - lhs; break;
      case Relation::Equal: v = std::fabs(lhs - row.rhs); break;
    }
    worst = std::max(worst, v);
  }
  return worst;
}

double LinearProgram::max_bound_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (int j = 0; j < num_vars(); ++j) {
    worst = std::max(worst, lo_[j] - x[j]);
    if (std::isfinite(hi_[j])) worst = std::max(worst, x[j] - hi_[j]);
  }
  return worst;
}

double LinearProgram::objective_at(std::span<const double> x) const {
  double z = 0.0;
  for (int j = 0; j < num_vars(); ++j) z += cost_[j] * x[j];
  return z;
}

namespace {

LpResult run_double(const LinearProgram& lp, const Basis* warm) {
  detail::Simplex<double> simplex(lp);
  LpResult res;
  res.status = simplex.run(warm);
  res.iterations = simplex.iterations();
  res.warm_started = simplex.warm_used();
  if (res.status == LpStatus::Optimal) {
    res.primal = simplex.primal();
    res.basis = simplex.basis();
  }
  return res;
}

// Values within the bound tolerance of a bound are snapped onto it.
void snap_to_bounds(const LinearProgram& lp, std::vector<double>& x) {
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (x[j] < lp.lower(j)) x[j] = lp.lower(j);
    if (x[j] > lp.upper(j)) x[j] = lp.upper(j);
  }
}

}  // namespace

LpResult lp_solve(const LinearProgram& lp, const Basis* warm) {
  LpResult res = run_double(lp, warm);
  if (res.status != LpStatus::Optimal) return res;
  if (lp.max_row_violation(res.primal) > kFeasTol ||
      lp.max_bound_violation(res.primal) > kFeasTol) {
    // Accumulated round-off: refactor the final basis from the original data.
    const Basis final_basis = res.basis;
    const int spent = res.iterations;
    res = run_double(lp, &final_basis);
    res.iterations += spent;
    if (res.status != LpStatus::Optimal) return res;
    if (lp.max_row_violation(res.primal) > kFeasTol)
      throw LpError("row violation above tolerance after refactorization");
  }
  snap_to_bounds(lp, res.primal);
  res.objective_value = lp.objective_at(res.primal);
  return res;
}

LpResult lp_add_rows(LinearProgram& lp, std::span<const Row> new_rows,
                     const LpResult& prior) {
  const int old_rows = lp.num_rows();
  for (const Row& row : new_rows) lp.add_row(row);
  if (prior.status != LpStatus::Optimal ||
      static_cast<int>(prior.basis.basic.size()) != old_rows) {
    return lp_solve(lp);
  }
  Basis warm = prior.basis;
  for (int i = old_rows; i < lp.num_rows(); ++i)
    warm.basic.push_back(lp.num_vars() + i);
  // Slack columns of the old rows keep their ids: num_vars + row index.
  return lp_solve(lp, &warm);
}

LinearProgram lp_fix_variable(const LinearProgram& lp, int var, double value) {
  if (var < 0 || var >= lp.num_vars()) throw Error("unknown variable");
  if (value < lp.lower(var) || value > lp.upper(var)) {
    throw Error("cannot fix variable " + std::to_string(var) + " to " +
                std::to_string(value) + ": outside its bounds");
  }
  LinearProgram fixed = lp;
  fixed.set_bounds(var, value, value);
  return fixed;
}

ExactLpResult lp_solve_exact(const LinearProgram& lp, const Basis* warm) {
  detail::Simplex<mpq_class> simplex(lp);
  ExactLpResult res;
  res.status = simplex.run(warm);
  res.iterations = simplex.iterations();
  if (res.status == LpStatus::Optimal) {
    res.primal = simplex.primal();
    res.objective_value = simplex.objective();
  }
  return res;
}

}  // namespace stab
