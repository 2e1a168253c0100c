// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "stab/cuts.hpp"
#include "stab/models.hpp"
#include "stab/oracle.hpp"
#include "stab/solve.hpp"
#include "test_oracles.hpp"

using namespace stab;

namespace {

constexpr double kBoundTol = 1e-6;

struct Verdict {
  bool pass = true;
  int checked = 0;
  std::vector<std::string> failures;

  void check(bool ok, const std::string& what) {
    ++checked;
    if (!ok) {
      pass = false;
      failures.push_back(what);
    }
  }
};

void report(int id, const std::string& title, const Verdict& v, double seconds,
            const std::string& summary = "") {
  std::printf("criterion %d: %s  %s  (%d checks, %.1f s)%s%s\n", id, v.pass ? "PASS" : "FAIL",
              title.c_str(), v.checked, seconds, summary.empty() ? "" : "  ", summary.c_str());
  const std::size_t shown = std::min<std::size_t>(v.failures.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) std::printf("    - %s\n", v.failures[i].c_str());
  if (v.failures.size() > shown) std::printf("    ... %zu more\n", v.failures.size() - shown);
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string label(const Instance& inst, LineFamily f) { return inst.name() + "/" + to_string(f); }

// 100 random instances and 20 grids per problem.
std::vector<Instance> suite(Problem problem) {
  std::vector<Instance> out;
  const int n = problem == Problem::Matching ? 10 : 8;
  for (std::uint64_t s = 0; s < 100; ++s) out.push_back(gen_random(n, 100, s));
  const int shapes[5][2] = {{2, 2}, {2, 3}, {3, 3}, {3, 4}, {2, 4}};
  for (int g = 0; g < 20; ++g) {
    const int r = shapes[g % 5][0], c = shapes[g % 5][1];
    mpq_class keep = g < 5 ? mpq_class(1) : mpq_class(4, 5);
    if (problem == Problem::SpanningTree && r * c * keep > 8) keep = mpq_class(8, r * c);
    Instance inst = gen_grid(r, c, keep, g);
    if (problem == Problem::Matching && inst.size() % 2 == 1) inst = inst.drop_last();
    if (inst.size() >= 2) out.push_back(inst);
  }
  return out;
}

struct Run {
  const Instance* inst = nullptr;
  Problem problem{};
  LineFamily family{};
  RoundingTrace trace;
  Solution rounding;
  Solution exact;
  BnbStats stats;
  BruteResult brute;
};

std::vector<Run> run_suite(Problem problem, const std::vector<Instance>& insts, double& bnb_s,
                           double& oracle_s) {
  std::vector<Run> runs;
  for (const Instance& inst : insts)
    for (LineFamily f : {LineFamily::AxisParallel, LineFamily::General}) {
      Run r;
      r.inst = &inst;
      r.problem = problem;
      r.family = f;
      RoundingOptions ro;
      ro.exact_check = true;
      auto t = std::chrono::steady_clock::now();
      r.rounding = iterated_rounding(inst, problem, f, ro, &r.trace);
      r.exact = branch_and_bound(inst, problem, f, {}, &r.stats);
      bnb_s += seconds_since(t);
      t = std::chrono::steady_clock::now();
      r.brute = brute_optimum(inst, problem, f, Objective::Stabbing);
      oracle_s += seconds_since(t);
      runs.push_back(std::move(r));
    }
  return runs;
}

Verdict oracle_equivalence(const std::vector<Run>& runs) {
  Verdict v;
  for (const Run& r : runs) {
    std::ostringstream msg;
    msg << label(*r.inst, r.family) << ": branch and bound " << r.exact.k
        << (r.exact.proven ? "" : " (not proven)") << " vs oracle " << r.brute.value;
    v.check(r.exact.proven && r.exact.k == static_cast<int>(r.brute.value), msg.str());
  }
  return v;
}

Verdict sandwich(const std::vector<Run>& runs) {
  Verdict v;
  for (const Run& r : runs) {
    const double bound = std::ceil(r.trace.root_k_frac - kBoundTol);
    std::ostringstream msg;
    msg << to_string(r.problem) << " " << label(*r.inst, r.family) << ": ceil bound " << bound
        << ", exact " << r.exact.k << ", rounding " << r.rounding.k;
    v.check(bound <= r.exact.k && r.exact.k <= r.rounding.k, msg.str());
    v.check(is_feasible(r.problem, r.rounding.edges, r.inst->points()),
            to_string(r.problem) + " " + label(*r.inst, r.family) + ": rounding output infeasible");
  }
  return v;
}

Verdict heavy_edges(const std::vector<Run>& runs, double& min_matching, double& min_tree,
                    int& crossing_steps, int& steps) {
  Verdict v;
  for (const Run& r : runs) {
    const double need = r.problem == Problem::Matching ? 1.0 / 5.0 : 1.0 / 3.0;
    double& low = r.problem == Problem::Matching ? min_matching : min_tree;
    for (std::size_t i = 0; i < r.trace.steps.size(); ++i) {
      const RoundingStep& st = r.trace.steps[i];
      // An integral refined point has no free fractional edge; its free
      // support edges carry weight one.
      const double heaviest = st.fixed_edge < 0 && st.max_free_weight == 0.0 ? 1.0 : st.max_free_weight;
      low = std::min(low, heaviest);
      ++steps;
      std::ostringstream where;
      where << to_string(r.problem) << " " << label(*r.inst, r.family) << " iteration " << i;
      v.check(heaviest >= need - kBoundTol,
              where.str() + ": heaviest free edge " + std::to_string(heaviest));
      if (st.crossing_pairs > 0) ++crossing_steps;
      v.check(st.crossing_pairs == 0,
              where.str() + ": " + std::to_string(st.crossing_pairs) + " crossing support pair(s)");
    }
  }
  return v;
}

// Re-solves each rounding iteration's relaxation from scratch, replaying the
// fixings, and certifies it with the rational simplex.
void certify_runs(const std::vector<Run>& runs, Verdict& v) {
  for (const Run& r : runs) {
    const std::string where = to_string(r.problem) + " " + label(*r.inst, r.family);
    v.check(r.trace.root_exact.has_value() &&
                std::fabs(r.trace.root_exact->get_d() - r.trace.root_k_frac) <= kBoundTol,
            where + ": root relaxation");
    v.check(std::fabs(r.stats.root_k_frac - r.trace.root_k_frac) <= kBoundTol,
            where + ": branch and bound root disagrees with rounding root");
    StabModel model = build_model(*r.inst, r.problem, r.family);
    for (std::size_t i = 0; i < r.trace.steps.size(); ++i) {
      const RelaxationResult res = solve_relaxation(model);
      const ExactLpResult ex = certify_relaxation(model, res);
      std::ostringstream msg;
      msg << where << " iteration " << i << ": float " << res.k_frac << " exact "
          << (ex.status == LpStatus::Optimal ? ex.objective_value.get_str() : "not optimal");
      v.check(ex.status == LpStatus::Optimal &&
                  std::fabs(ex.objective_value.get_d() - res.k_frac) <= kBoundTol &&
                  std::fabs(res.k_frac - r.trace.steps[i].k_frac) <= kBoundTol,
              msg.str());
      const int e = r.trace.steps[i].fixed_edge;
      if (e < 0) break;
      fix_edge(model, e, 1);
    }
  }
}

bool planar_and_non_collinear(const EdgeSet& m, PointSpan pts) {
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      const Point p = pts[m[i].a], q = pts[m[i].b], r = pts[m[j].a], s = pts[m[j].b];
      if (segments_intersect(p, q, r, s)) return false;
      if (orient(p, q, r) == 0 && orient(p, q, s) == 0) return false;
    }
  return true;
}

// Crossing and stabbing number of a planar matching whose segments are
// pairwise non-collinear; other matchings are skipped.
void check_coincidence(const Instance& inst, const EdgeSet& m, const std::string& source, Verdict& v,
                       int& skipped) {
  if (!planar_and_non_collinear(m, inst.points())) {
    ++skipped;
    return;
  }
  for (LineFamily f : {LineFamily::AxisParallel, LineFamily::General}) {
    const int c = crossing_number(m, inst.points(), f);
    const int k = stabbing_number(m, inst.points(), f).k;
    v.check(c == k, source + " " + label(inst, f) + ": crossing " + std::to_string(c) + " vs stabbing " +
                        std::to_string(k));
  }
}

}  // namespace

int main() {
  std::printf("stabnum acceptance suite\n");
  std::fflush(stdout);
  bool all_pass = true;
  auto note = [&](const Verdict& v) { all_pass = all_pass && v.pass; };
  Verdict certification;  // accumulated for criterion 9
  Verdict coincidence;    // accumulated for criterion 8
  int non_planar = 0;

  // ---- 1, 2: oracle equivalence ------------------------------------------
  const std::vector<Instance> match_insts = suite(Problem::Matching);
  const std::vector<Instance> tree_insts = suite(Problem::SpanningTree);

  auto t = std::chrono::steady_clock::now();
  double bnb_m = 0, oracle_m = 0;
  const std::vector<Run> match_runs = run_suite(Problem::Matching, match_insts, bnb_m, oracle_m);
  const Verdict c1 = oracle_equivalence(match_runs);
  note(c1);
  report(1, "oracle equivalence (matching)", c1, seconds_since(t),
         std::to_string(match_runs.size()) + " instance/family pairs, branch and bound " +
             std::to_string(static_cast<int>(bnb_m)) + " s, oracle " + std::to_string(static_cast<int>(oracle_m)) + " s");

  t = std::chrono::steady_clock::now();
  double bnb_t = 0, oracle_t = 0;
  const std::vector<Run> tree_runs = run_suite(Problem::SpanningTree, tree_insts, bnb_t, oracle_t);
  const Verdict c2 = oracle_equivalence(tree_runs);
  note(c2);
  report(2, "oracle equivalence (tree)", c2, seconds_since(t),
         std::to_string(tree_runs.size()) + " instance/family pairs, branch and bound " +
             std::to_string(static_cast<int>(bnb_t)) + " s, oracle " + std::to_string(static_cast<int>(oracle_t)) + " s");

  // ---- 3: sandwich ---------------------------------------------------------
  t = std::chrono::steady_clock::now();
  Verdict c3 = sandwich(match_runs);
  {
    const Verdict more = sandwich(tree_runs);
    c3.checked += more.checked;
    c3.pass = c3.pass && more.pass;
    c3.failures.insert(c3.failures.end(), more.failures.begin(), more.failures.end());
  }
  note(c3);
  report(3, "sandwich ceil(k_frac) <= k_exact <= k_rounding", c3, seconds_since(t));

  // ---- 4: heavy edges and planar support -----------------------------------
  t = std::chrono::steady_clock::now();
  double min_m = 1e9, min_t = 1e9;
  int crossing_steps = 0, steps = 0;
  Verdict c4 = heavy_edges(match_runs, min_m, min_t, crossing_steps, steps);
  {
    const Verdict more = heavy_edges(tree_runs, min_m, min_t, crossing_steps, steps);
    c4.checked += more.checked;
    c4.pass = c4.pass && more.pass;
    c4.failures.insert(c4.failures.end(), more.failures.begin(), more.failures.end());
  }
  note(c4);
  {
    char buf[200];
    std::snprintf(buf, sizeof buf, "min heaviest: matching %.7f, tree %.7f; %d of %d iterations with crossings",
                  min_m, min_t, crossing_steps, steps);
    report(4, "heavy edge bounds and planar refined support", c4, seconds_since(t), buf);
  }

  // ---- 5: unit square --------------------------------------------------------
  t = std::chrono::steady_clock::now();
  Verdict c5;
  {
    const Instance sq = testing::unit_square();
    StabModel m = build_matching_model(sq, LineFamily::AxisParallel);
    const RelaxationResult r = solve_relaxation(m);
    c5.check(std::fabs(r.k_frac - 1.5) <= kBoundTol, "matching k_frac " + std::to_string(r.k_frac));
    const ExactLpResult ex = certify_relaxation(m, r);
    c5.check(ex.status == LpStatus::Optimal && ex.objective_value == mpq_class(3, 2),
             "rational re-check " + ex.objective_value.get_str());
    certification.check(ex.status == LpStatus::Optimal &&
                            std::fabs(ex.objective_value.get_d() - r.k_frac) <= kBoundTol,
                        "unit square matching relaxation");
    StabModel tm = build_tree_model(sq, LineFamily::AxisParallel);
    const RelaxationResult tr = solve_relaxation(tm);
    const ExactLpResult tex = certify_relaxation(tm, tr);
    certification.check(tex.status == LpStatus::Optimal &&
                            std::fabs(tex.objective_value.get_d() - tr.k_frac) <= kBoundTol,
                        "unit square tree relaxation");

    const Solution em = branch_and_bound(sq, Problem::Matching, LineFamily::AxisParallel);
    c5.check(em.proven && em.k == 2, "exact matching k = " + std::to_string(em.k));
    for (LineFamily f : {LineFamily::AxisParallel, LineFamily::General}) {
      const Solution et = branch_and_bound(sq, Problem::SpanningTree, f);
      const double brute = brute_optimum(sq, Problem::SpanningTree, f, Objective::Stabbing).value;
      c5.check(et.proven && et.k == 2,
               "exact tree k = " + std::to_string(et.k) + " (" + to_string(f) + "), expected 2; oracle over all 16 trees gives " +
                   std::to_string(static_cast<int>(brute)));
    }
    const BruteResult tri = brute_optimum(sq, Problem::Triangulation, LineFamily::AxisParallel, Objective::Crossing);
    c5.check(tri.value == 3.0 && tri.argmin.size() == 2,
             "triangulation crossing " + std::to_string(tri.value) + " with " + std::to_string(tri.argmin.size()) + " optima");
    for (const EdgeSet& t2 : all_triangulations(sq.points()))
      c5.check(crossing_number(t2, sq.points(), LineFamily::AxisParallel) == 3, "a triangulation has crossing number != 3");
  }
  note(c5);
  report(5, "unit square regression", c5, seconds_since(t));

  // ---- 6: separation ---------------------------------------------------------
  t = std::chrono::steady_clock::now();
  Verdict c6;
  {
    std::mt19937_64 rng(20240601);
    int violated = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 4 + 2 * (trial % 4);
      const auto x = testing::random_degree_point(n, rng);
      const std::string where = "vector " + std::to_string(trial) + " (n = " + std::to_string(n) + ")";

      const double odd = testing::min_subset_cut(x, n, true);
      const auto blossoms = separate_blossom(x, n);
      c6.check(!blossoms.empty() == (odd < 1.0 - kViolationTol), where + ": blossom detection");
      if (!blossoms.empty()) {
        ++violated;
        c6.check(std::fabs(blossoms.front().cut_value - odd) <= 1e-9,
                 where + ": most violated blossom " + std::to_string(blossoms.front().cut_value) +
                     " vs enumeration " + std::to_string(odd));
      }

      const double any = testing::min_subset_cut(x, n, false);
      const auto conn = separate_connectivity(x, n);
      c6.check(!conn.empty() == (any < 1.0 - kViolationTol), where + ": connectivity detection");
      if (!conn.empty())
        c6.check(std::fabs(conn.front().cut_value - any) <= 1e-9, where + ": most violated connectivity cut");

      // Sparse points exercise disconnected supports.
      const auto y = testing::random_tree_point(n, rng);
      const double ymin = testing::min_subset_cut(y, n, false);
      const auto yc = separate_connectivity(y, n);
      c6.check(!yc.empty() == (ymin < 1.0 - kViolationTol), where + ": sparse connectivity detection");
      if (!yc.empty())
        c6.check(std::fabs(yc.front().cut_value - ymin) <= 1e-9, where + ": sparse most violated cut");
    }
    c6.check(violated >= 20, "too few violated blossom cases (" + std::to_string(violated) + ")");
  }
  note(c6);
  report(6, "separation agrees with subset enumeration", c6, seconds_since(t));

  // ---- 7: average stabbing vs length ------------------------------------------
  t = std::chrono::steady_clock::now();
  Verdict c7;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const int n = s % 2 ? 8 : 6;
    const Instance inst = gen_random(n, 100, 7000 + s);
    for (Problem p : {Problem::Matching, Problem::SpanningTree})
      for (LineFamily f : {LineFamily::AxisParallel, LineFamily::General}) {
        const BruteResult avg = brute_optimum(inst, p, f, Objective::AverageStabbing);
        const BruteResult len = brute_optimum(inst, p, f, Objective::Length);
        const std::set<EdgeSet> a(avg.argmin.begin(), avg.argmin.end());
        const std::set<EdgeSet> b(len.argmin.begin(), len.argmin.end());
        c7.check(a == b, label(inst, f) + " " + to_string(p) + ": argmin sets differ (" +
                             std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
        if (p == Problem::Matching)
          for (const BruteResult* br : {&avg, &len})
            for (const EdgeSet& m : br->argmin) check_coincidence(inst, m, "minimizer", coincidence, non_planar);
      }
  }
  note(c7);
  report(7, "average stabbing minimizers equal minimum length structures", c7, seconds_since(t));

  // ---- 8: crossing equals stabbing on planar matchings ------------------------
  t = std::chrono::steady_clock::now();
  for (const Run& r : match_runs) {
    check_coincidence(*r.inst, r.rounding.edges, "rounding", coincidence, non_planar);
    check_coincidence(*r.inst, r.exact.edges, "exact", coincidence, non_planar);
    for (const EdgeSet& m : r.brute.argmin) check_coincidence(*r.inst, m, "oracle", coincidence, non_planar);
  }
  for (const Instance& inst : match_insts)
    for (Metric metric : {Metric::Euclidean, Metric::Manhattan})
      check_coincidence(inst, min_length_matching(inst, metric).edges, "min length", coincidence, non_planar);
  note(coincidence);
  report(8, "crossing number equals stabbing number on planar matchings", coincidence, seconds_since(t),
         std::to_string(non_planar) + " produced matchings skipped as crossing or collinear");

  // ---- 9: rational certification ------------------------------------------------
  t = std::chrono::steady_clock::now();
  certify_runs(match_runs, certification);
  certify_runs(tree_runs, certification);
  note(certification);
  report(9, "float LP objectives certified by the rational simplex", certification, seconds_since(t));

  return all_pass ? 0 : 1;
}
