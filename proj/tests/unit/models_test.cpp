#include <gtest/gtest.h>

#include "stab/cuts.hpp"
#include "stab/error.hpp"
#include "stab/models.hpp"
#include "stab/oracle.hpp"
#include "test_oracles.hpp"

namespace stab {
namespace {

using testing::make_instance;
using testing::unit_square;

// Unit square ids: 0:(0,1) bottom, 1:(0,2) left, 2:(0,3) diagonal,
// 3:(1,2) anti-diagonal, 4:(1,3) right, 5:(2,3) top.
constexpr int kBottom = 0, kLeft = 1, kDiag = 2, kAnti = 3, kRight = 4, kTop = 5;

int count_rows(const StabModel& m, Relation rel) {
  int c = 0;
  for (const Row& r : m.lp.rows()) c += r.rel == rel;
  return c;
}

TEST(BuildMatchingModel, UnitSquareShape) {
  const StabModel m = build_matching_model(unit_square(), LineFamily::AxisParallel);
  EXPECT_EQ(m.num_edge_vars(), 6);
  EXPECT_EQ(m.lp.num_vars(), 7);
  EXPECT_EQ(m.k_index, 6);
  EXPECT_EQ(count_rows(m, Relation::Equal), 4);
  EXPECT_EQ(m.lines.size(), 4u);
  EXPECT_EQ(m.line_rows.size(), 4u);
  for (int e = 0; e < 6; ++e) {
    EXPECT_EQ(m.lp.lower(e), 0.0);
    EXPECT_EQ(m.lp.upper(e), 1.0);
  }
}

TEST(BuildMatchingModel, TwoPoints) {
  StabModel m = build_matching_model(make_instance({{0, 0}, {3, 1}}), LineFamily::General);
  EXPECT_EQ(m.num_edge_vars(), 1);
  EXPECT_EQ(count_rows(m, Relation::Equal), 2);
  const RelaxationResult r = solve_relaxation(m);
  EXPECT_NEAR(r.x[0], 1.0, 1e-9);
  EXPECT_NEAR(r.k_frac, 1.0, 1e-9);
}

TEST(BuildMatchingModel, OddThrows) {
  EXPECT_THROW(build_matching_model(make_instance({{0, 0}, {1, 0}, {2, 5}}), LineFamily::AxisParallel),
               Error);
}

// Every stabbing row has +1 exactly on the stabbed edges and -1 on k; the
// stabbed set is recomputed from the line equation.
TEST(BuildModel, StabbingRowsMatchStabsOracle) {
  for (auto [problem, inst] : {std::pair{Problem::Matching, gen_random(8, 20, 1)},
                               std::pair{Problem::SpanningTree, gen_grid(3, 3, mpq_class(7, 9), 2)}}) {
    for (LineFamily f : {LineFamily::AxisParallel, LineFamily::General}) {
      const StabModel m = build_model(inst, problem, f);
      ASSERT_EQ(m.lines, representative_lines(inst.points(), f));
      for (std::size_t l = 0; l < m.lines.size(); ++l) {
        const Row& r = m.lp.row(m.line_rows[l]);
        std::vector<double> coef(m.lp.num_vars(), 0.0);
        for (const Term& t : r.terms) coef[t.var] += t.coef;
        for (int e = 0; e < m.num_edge_vars(); ++e) {
          const Segment s = edge_at(e, inst.size());
          const StabLine& ln = m.lines[l];
          auto eval = [&](Point p) { return testing::sgn(ln.a * p.x + ln.b * p.y - ln.c); };
          const bool hit = eval(inst[s.a]) * eval(inst[s.b]) <= 0;
          ASSERT_EQ(coef[e], hit ? 1.0 : 0.0);
        }
        ASSERT_EQ(coef[m.k_index], -1.0);
        ASSERT_EQ(r.rel, Relation::LessEq);
        ASSERT_EQ(r.rhs, 0.0);
      }
    }
  }
}

TEST(BuildModel, UnitSquareLineXZero) {
  const StabModel m = build_matching_model(unit_square(), LineFamily::AxisParallel);
  const auto it = std::find(m.lines.begin(), m.lines.end(), StabLine::vertical(0));
  ASSERT_NE(it, m.lines.end());
  const Row& r = m.lp.row(m.line_rows[it - m.lines.begin()]);
  std::set<int> vars;
  for (const Term& t : r.terms)
    if (t.coef == 1.0) vars.insert(t.var);
  EXPECT_EQ(vars, (std::set<int>{kBottom, kLeft, kDiag, kAnti, kTop}));
}

TEST(BuildTreeModel, CollinearAndSquare) {
  const StabModel line = build_tree_model(make_instance({{0, 0}, {1, 0}, {2, 0}}), LineFamily::AxisParallel);
  EXPECT_EQ(line.num_edge_vars(), 3);
  const StabModel sq = build_tree_model(unit_square(), LineFamily::AxisParallel);
  EXPECT_EQ(sq.num_edge_vars(), 6);
  for (const StabModel* m : {&line, &sq}) {
    ASSERT_EQ(count_rows(*m, Relation::Equal), 1);
    for (const Row& r : m->lp.rows())
      if (r.rel == Relation::Equal) {
        EXPECT_EQ(r.rhs, m->n - 1.0);
        EXPECT_EQ(static_cast<int>(r.terms.size()), m->num_edge_vars());
      }
  }
  EXPECT_THROW(build_tree_model(make_instance({{0, 0}}), LineFamily::AxisParallel), Error);
}

TEST(SolveRelaxation, UnitSquareMatching) {
  StabModel m = build_matching_model(unit_square(), LineFamily::AxisParallel);
  const RelaxationResult r = solve_relaxation(m);
  EXPECT_NEAR(r.k_frac, 1.5, 1e-6);
  const ExactLpResult ex = certify_relaxation(m, r);
  ASSERT_EQ(ex.status, LpStatus::Optimal);
  EXPECT_EQ(ex.objective_value, mpq_class(3, 2));
}

TEST(SolveRelaxation, TwoFarTrianglesNeedBlossoms) {
  const Instance inst = make_instance({{0, 0}, {2, 0}, {1, 2}, {50, 50}, {52, 50}, {51, 52}});
  StabModel m = build_matching_model(inst, LineFamily::AxisParallel);
  const RelaxationResult r = solve_relaxation(m);
  EXPECT_GE(r.cuts_added, 1);
  EXPECT_GE(testing::min_subset_cut(r.x, 6, true), 1.0 - 1e-7);
  EXPECT_EQ(static_cast<int>(m.added_cuts.size()), r.cuts_added);
}

TEST(SolveRelaxation, ResultSatisfiesEveryRow) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst = gen_random(8, 60, seed);
    for (Problem p : {Problem::Matching, Problem::SpanningTree}) {
      StabModel m = build_model(inst, p, seed % 2 ? LineFamily::General : LineFamily::AxisParallel);
      const RelaxationResult r = solve_relaxation(m);
      std::vector<double> full = r.x;
      full.push_back(r.k_frac);
      ASSERT_LE(m.lp.max_row_violation(full), 1e-7);
      const double cut = testing::min_subset_cut(r.x, 8, p == Problem::Matching);
      ASSERT_GE(cut, 1.0 - 1e-7);
    }
  }
}

TEST(SolveRelaxation, InconsistentFixingsCarryTheFixingSet) {
  StabModel m = build_matching_model(unit_square(), LineFamily::AxisParallel);
  fix_edge(m, kBottom, 1);
  fix_edge(m, kLeft, 1);
  try {
    solve_relaxation(m);
    FAIL() << "expected InfeasibleModel";
  } catch (const InfeasibleModel& e) {
    EXPECT_EQ(e.fixed_ones(), (std::vector<int>{kBottom, kLeft}));
  }
}

TEST(LexicographicRefine, UnitSquareDropsDiagonals) {
  StabModel m = build_matching_model(unit_square(), LineFamily::AxisParallel);
  const RelaxationResult r = solve_relaxation(m);
  const RelaxationResult rr = lexicographic_refine(m, r);
  EXPECT_NEAR(rr.k_frac, 1.5, 1e-6);
  EXPECT_NEAR(rr.x[kDiag], 0.0, 1e-9);
  EXPECT_NEAR(rr.x[kAnti], 0.0, 1e-9);
  for (int e : {kBottom, kLeft, kRight, kTop}) EXPECT_NEAR(rr.x[e], 0.5, 1e-7);
}

TEST(LexicographicRefine, IntegralInputUnchanged) {
  // Two far apart horizontal pairs: the only matching with k = 1.
  const Instance inst = make_instance({{0, 0}, {1, 0}, {10, 10}, {11, 10}});
  StabModel m = build_matching_model(inst, LineFamily::AxisParallel);
  const RelaxationResult r = solve_relaxation(m);
  ASSERT_NEAR(r.k_frac, 1.0, 1e-9);
  ASSERT_NEAR(r.x[edge_id(0, 1, 4)], 1.0, 1e-9);
  const RelaxationResult rr = lexicographic_refine(m, r);
  EXPECT_NEAR(rr.k_frac, r.k_frac, 1e-6);
  for (int e = 0; e < m.num_edge_vars(); ++e) EXPECT_NEAR(rr.x[e], r.x[e], 1e-7);
}

TEST(LexicographicRefine, KeepsKAndPlanarSupport) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int n = 6 + 2 * static_cast<int>(seed % 4);
    const Instance inst = gen_random(n, 100, 1000 + seed);
    const LineFamily f = seed % 2 ? LineFamily::General : LineFamily::AxisParallel;
    StabModel m = build_matching_model(inst, f);
    const RelaxationResult r = solve_relaxation(m);
    const RelaxationResult rr = lexicographic_refine(m, r);
    ASSERT_LE(rr.k_frac, r.k_frac + kLengthPhaseSlack + 1e-9);
    ASSERT_GE(rr.k_frac, r.k_frac - 1e-6);
    EXPECT_TRUE(crossing_pairs(support_edges(rr.x, n), inst.points()).empty()) << "seed " << seed;
    EXPECT_GE(*std::max_element(rr.x.begin(), rr.x.end()), 0.2 - 1e-6);
    ++checked;
  }
  EXPECT_EQ(checked, 50);
}

TEST(Relaxation, LowerBoundsOracleOptimum) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Instance inst = gen_random(seed % 2 ? 8 : 6, 40, seed);
    for (Problem p : {Problem::Matching, Problem::SpanningTree})
      for (LineFamily f : {LineFamily::AxisParallel, LineFamily::General}) {
        StabModel m = build_model(inst, p, f);
        const RelaxationResult r = solve_relaxation(m);
        const BruteResult best = brute_optimum(inst, p, f, Objective::Stabbing);
        ASSERT_LE(std::ceil(r.k_frac - 1e-6), best.value) << "seed " << seed;
      }
  }
}

TEST(CutKey, ComplementsShareAKey) {
  EXPECT_EQ(cut_key({{0, 2, 3}, 0.0}, 6), cut_key({{1, 4, 5}, 0.0}, 6));
  const Row r = cut_constraint({{0, 1}, 0.0}, 4);
  EXPECT_EQ(r.rel, Relation::GreaterEq);
  EXPECT_EQ(r.rhs, 1.0);
  EXPECT_EQ(r.terms.size(), 4u);
}

}  // namespace
}  // namespace stab
