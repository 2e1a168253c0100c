#pragma once

#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace stab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Solver tolerances.
inline constexpr double kPivotTol = 1e-9;
inline constexpr double kFeasTol = 1e-7;
inline constexpr double kObjTol = 1e-6;

enum class Relation { LessEq, Equal, GreaterEq };

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct Row {
  std::vector<Term> terms;
  Relation rel = Relation::LessEq;
  double rhs = 0.0;
};

/// min c^T x subject to rows and lo <= x <= hi. Lower bounds are finite.
class LinearProgram {
 public:
  int add_variable(double lo = 0.0, double hi = kInfinity, double cost = 0.0);
  int add_row(Row row);

  void set_cost(int var, double cost);
  void clear_objective();
  void set_bounds(int var, double lo, double hi);

  int num_vars() const { return static_cast<int>(lo_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const std::vector<Row>& rows() const { return rows_; }
  const Row& row(int i) const { return rows_[i]; }
  double cost(int var) const { return cost_[var]; }
  double lower(int var) const { return lo_[var]; }
  double upper(int var) const { return hi_[var]; }

  /// Largest violation of any row at x (0 if all hold).
  double max_row_violation(std::span<const double> x) const;
  double max_bound_violation(std::span<const double> x) const;
  double objective_at(std::span<const double> x) const;

 private:
  std::vector<double> cost_;
  std::vector<double> lo_;
  std::vector<double> hi_;
  std::vector<Row> rows_;
};

/// A simplex basis: one basic column per row. Columns [0, num_vars) are the
/// structural variables, column num_vars + i is the slack of row i.
/// `at_upper` lists nonbasic structurals resting on their upper bound.
struct Basis {
  std::vector<int> basic;
  std::vector<int> at_upper;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double objective_value = 0.0;
  std::vector<double> primal;
  Basis basis;
  int iterations = 0;
  /// The warm basis was accepted (cold restart not needed).
  bool warm_started = false;
};

/// Bounded-variable primal simplex (two phases) with a dual simplex path for
/// warm restarts. Dantzig pricing, switching to Bland's rule after a run of
/// degenerate pivots. Throws LpError("cycling guard tripped") if the
/// iteration cap is exceeded.
LpResult lp_solve(const LinearProgram& lp, const Basis* warm = nullptr);

/// Appends `new_rows` to `lp` and re-solves, warm-starting from `prior`.
LpResult lp_add_rows(LinearProgram& lp, std::span<const Row> new_rows,
                     const LpResult& prior);

/// Copy of `lp` with var fixed to `value`. Throws if value lies outside the
/// variable's current bounds.
LinearProgram lp_fix_variable(const LinearProgram& lp, int var, double value);

struct ExactLpResult {
  LpStatus status = LpStatus::Infeasible;
  mpq_class objective_value;
  std::vector<mpq_class> primal;
  int iterations = 0;
};

/// The same simplex over arbitrary-precision rationals; every coefficient of
/// `lp` is read as the exact binary value of its double. Meant for
/// certification of small programs (warm start from a float basis).
ExactLpResult lp_solve_exact(const LinearProgram& lp,
                             const Basis* warm = nullptr);

}  // namespace stab
