#include "stab/solve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>

#include "stab/cuts.hpp"
#include "stab/error.hpp"
#include "stab/lp.hpp"
#include "stab/models.hpp"

namespace stab {
namespace {

constexpr double kIntegralTol = 1e-6;
constexpr double kBoundSlack = 1e-6;
constexpr double kTieTol = 1e-9;

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int v) {
    while (parent_[v] != v) v = parent_[v] = parent_[parent_[v]];
    return v;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<int> parent_;
};

bool is_integral(const std::vector<double>& x) {
  return std::all_of(x.begin(), x.end(), [](double v) {
    return std::abs(v - std::round(v)) <= kIntegralTol;
  });
}

EdgeSet edges_of(const std::vector<int>& ids, int n) {
  EdgeSet out;
  for (int id : ids) out.push_back(edge_at(id, n));
  return out;
}

std::vector<int> rounded_support(const std::vector<double>& x) {
  std::vector<int> ids;
  for (int id = 0; id < static_cast<int>(x.size()); ++id)
    if (x[id] > 0.5) ids.push_back(id);
  return ids;
}

void require_lp_problem(Problem problem) {
  if (problem == Problem::Triangulation)
    throw Error("only matchings and spanning trees can be optimized");
}

mpq_class root_bound(const StabModel& model, const RelaxationResult& r,
                     bool exact, std::optional<mpq_class>* exact_out) {
  if (!exact) return rational_approx(r.k_frac);
  const ExactLpResult ex = certify_relaxation(model, r);
  if (ex.status != LpStatus::Optimal)
    throw LpError("exact re-check did not confirm an optimum");
  *exact_out = ex.objective_value;
  return ex.objective_value;
}

}  // namespace

Solution iterated_rounding(const Instance& inst, Problem problem,
                           LineFamily family, const RoundingOptions& options,
                           RoundingTrace* trace) {
  require_lp_problem(problem);
  StabModel model = build_model(inst, problem, family);
  const int n = inst.size();
  const int m = model.num_edge_vars();
  const int target = problem == Problem::Matching ? n / 2 : n - 1;

  RoundingTrace local;
  RoundingTrace& tr = trace != nullptr ? *trace : local;
  tr = RoundingTrace{};

  DisjointSets forest(n);
  std::vector<char> fixed(m, 0);
  std::vector<int> chosen;
  std::optional<mpq_class> lower;

  while (static_cast<int>(chosen.size()) < target) {
    const RelaxationResult r = solve_relaxation(model);
    tr.cuts_added += r.cuts_added;
    tr.lp_iterations += r.lp_iterations;
    if (!lower) {
      tr.root_k_frac = r.k_frac;
      lower = root_bound(model, r, options.exact_check, &tr.root_exact);
    }
    const RelaxationResult rr = lexicographic_refine(model, r);
    tr.cuts_added += rr.cuts_added;
    tr.lp_iterations += rr.lp_iterations;

    RoundingStep step;
    step.k_frac = r.k_frac;
    EdgeSet free_support;
    for (int id = 0; id < m; ++id) {
      step.max_weight = std::max(step.max_weight, rr.x[id]);
      if (fixed[id]) continue;
      step.max_free_weight = std::max(step.max_free_weight, rr.x[id]);
      if (rr.x[id] > kSupportThreshold) free_support.push_back(edge_at(id, n));
    }
    step.crossing_pairs =
        static_cast<int>(crossing_pairs(free_support, inst.points()).size());

    if (is_integral(rr.x)) {
      chosen = rounded_support(rr.x);
      tr.steps.push_back(step);
      break;
    }

    int best = -1;
    for (int id = 0; id < m; ++id) {
      if (fixed[id]) continue;
      const Segment e = edge_at(id, n);
      if (problem == Problem::SpanningTree && forest.find(e.a) == forest.find(e.b))
        continue;
      if (best < 0 || rr.x[id] > rr.x[best] + kTieTol) best = id;
    }
    if (best < 0) throw Error("rounding found no edge to fix");
    const Segment e = edge_at(best, n);
    forest.unite(e.a, e.b);
    fix_edge(model, best, 1);
    fixed[best] = 1;
    chosen.push_back(best);
    step.fixed_edge = best;
    tr.steps.push_back(step);
  }

  Solution sol = make_solution(problem, family, edges_of(chosen, n),
                               inst.points(), Method::Rounding, lower);
  if (!is_feasible(problem, sol.edges, inst.points()))
    throw Error("rounding produced an infeasible structure");
  return sol;
}

namespace {

struct BnbNode {
  std::vector<int> ones;
  std::vector<int> zeros;
  int bound = 0;
  int depth = 0;
  long seq = 0;
  std::optional<Basis> basis;
};

struct BestFirst {
  bool operator()(const BnbNode& a, const BnbNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.seq > b.seq;
  }
};

// Copies cuts a node found back into the shared model.
void merge_cuts(StabModel& master, const StabModel& node) {
  for (std::size_t i = master.added_cuts.size(); i < node.added_cuts.size(); ++i) {
    master.lp.add_row(cut_constraint(node.added_cuts[i], master.n));
    master.added_cuts.push_back(node.added_cuts[i]);
  }
  master.cut_keys = node.cut_keys;
}

}  // namespace

Solution branch_and_bound(const Instance& inst, Problem problem,
                          LineFamily family, const BnbOptions& options,
                          BnbStats* stats) {
  require_lp_problem(problem);
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(Clock::now() - start)
        .count();
  };

  BnbStats local;
  BnbStats& st = stats != nullptr ? *stats : local;
  st = BnbStats{};

  Solution incumbent = iterated_rounding(inst, problem, family);
  st.rounding_k = incumbent.k;

  StabModel master = build_model(inst, problem, family);
  const int n = inst.size();
  const int m = master.num_edge_vars();
  std::optional<mpq_class> lower;

  std::priority_queue<BnbNode, std::vector<BnbNode>, BestFirst> heap;
  std::vector<BnbNode> stack;
  long seq = 0;
  auto push = [&](BnbNode node) {
    node.seq = seq++;
    if (options.depth_first)
      stack.push_back(std::move(node));
    else
      heap.push(std::move(node));
  };
  auto pop = [&] {
    BnbNode node;
    if (options.depth_first) {
      node = std::move(stack.back());
      stack.pop_back();
    } else {
      node = heap.top();
      heap.pop();
    }
    return node;
  };
  auto empty = [&] { return options.depth_first ? stack.empty() : heap.empty(); };

  push(BnbNode{});
  bool timed_out = false;
  while (!empty()) {
    if (options.time_limit_ms > 0 && elapsed_ms() > options.time_limit_ms) {
      timed_out = true;
      break;
    }
    BnbNode node = pop();
    if (node.bound >= incumbent.k) {
      ++st.pruned;
      continue;
    }
    ++st.nodes;
    st.max_depth = std::max(st.max_depth, node.depth);

    StabModel sub = master;
    sub.warm = node.basis;
    for (int e : node.ones) fix_edge(sub, e, 1);
    for (int e : node.zeros) fix_edge(sub, e, 0);
    RelaxationResult r;
    try {
      r = solve_relaxation(sub);
    } catch (const InfeasibleModel&) {
      ++st.infeasible;
      continue;
    }
    st.cuts_added += r.cuts_added;
    st.lp_iterations += r.lp_iterations;
    merge_cuts(master, sub);

    if (!lower) {
      st.root_k_frac = r.k_frac;
      lower = root_bound(sub, r, options.exact_check, &st.root_exact);
    }

    const int bound = static_cast<int>(std::ceil(r.k_frac - kBoundSlack));
    if (bound >= incumbent.k) {
      ++st.pruned;
      continue;
    }
    if (is_integral(r.x)) {
      EdgeSet edges = edges_of(rounded_support(r.x), n);
      if (is_feasible(problem, edges, inst.points())) {
        Solution cand = make_solution(problem, family, std::move(edges),
                                      inst.points(), Method::Exact);
        if (cand.k < incumbent.k) incumbent = std::move(cand);
        continue;
      }
    }

    std::vector<char> fixed(m, 0);
    for (int e : node.ones) fixed[e] = 1;
    for (int e : node.zeros) fixed[e] = 1;
    int branch = -1;
    double best_gap = 2.0;
    for (int id = 0; id < m; ++id) {
      if (fixed[id]) continue;
      const double gap = std::abs(r.x[id] - 0.5);
      if (gap < best_gap - 1e-12) {
        best_gap = gap;
        branch = id;
      }
    }
    if (branch < 0 || best_gap >= 0.5 - kIntegralTol)
      throw Error("branch and bound found no fractional edge to branch on");

    BnbNode zero{node.ones, node.zeros, bound, node.depth + 1, 0, r.basis};
    zero.zeros.push_back(branch);
    BnbNode one{node.ones, node.zeros, bound, node.depth + 1, 0, r.basis};
    one.ones.push_back(branch);
    push(std::move(zero));
    push(std::move(one));
  }

  incumbent.method = Method::Exact;
  incumbent.lower_bound = lower;
  incumbent.proven = !timed_out;
  st.proven = incumbent.proven;
  st.elapsed_ms = elapsed_ms();
  return incumbent;
}

std::string to_string(Metric m) {
  return m == Metric::Euclidean ? "euclidean" : "manhattan";
}

Metric parse_metric(std::string_view s) {
  if (s == "euclidean") return Metric::Euclidean;
  if (s == "manhattan") return Metric::Manhattan;
  throw Error("unknown metric '" + std::string(s) + "'");
}

LineFamily family_for(Metric m) {
  return m == Metric::Manhattan ? LineFamily::AxisParallel : LineFamily::General;
}

Metric metric_for(LineFamily f) {
  return f == LineFamily::AxisParallel ? Metric::Manhattan : Metric::Euclidean;
}

namespace {

double metric_length(Metric metric, Point p, Point q) {
  return metric == Metric::Euclidean ? euclidean_length(p, q)
                                     : static_cast<double>(manhattan_length(p, q));
}

// Blossom cutting-plane loop on a length-objective matching LP.
LpResult matching_length_loop(LinearProgram& lp, int n,
                              std::set<std::vector<int>>& keys,
                              const Basis* warm) {
  LpResult res = lp_solve(lp, warm);
  for (;;) {
    if (res.status != LpStatus::Optimal) return res;
    const std::vector<double> x(res.primal.begin(),
                                res.primal.begin() + num_edges(n));
    std::vector<Row> rows;
    for (const VertexCut& cut : separate_blossom(x, n)) {
      if (static_cast<int>(rows.size()) == kMaxCutsPerRound) break;
      if (keys.insert(cut_key(cut, n)).second)
        rows.push_back(cut_constraint(cut, n));
    }
    if (rows.empty()) return res;
    res = lp_add_rows(lp, rows, res);
  }
}

// Integral edge values of an optimal point, falling back to the exact solver
// when the float point is not integral.
std::vector<int> integral_matching(const LinearProgram& lp, const LpResult& res,
                                   int n) {
  const std::vector<double> x(res.primal.begin(),
                              res.primal.begin() + num_edges(n));
  if (is_integral(x)) return rounded_support(x);
  const ExactLpResult ex = lp_solve_exact(lp, &res.basis);
  std::vector<int> ids;
  for (int id = 0; id < num_edges(n); ++id) {
    const mpq_class& v = ex.primal[id];
    if (v == 1)
      ids.push_back(id);
    else if (v != 0)
      throw Error("minimum length matching LP has a fractional optimum");
  }
  return ids;
}

}  // namespace

Solution min_length_matching(const Instance& inst, Metric metric) {
  const int n = inst.size();
  if (n % 2 != 0) throw Error("matching requires even n");
  const int m = num_edges(n);
  LinearProgram lp;
  for (int id = 0; id < m; ++id) {
    const Segment e = edge_at(id, n);
    lp.add_variable(0.0, 1.0, metric_length(metric, inst[e.a], inst[e.b]));
  }
  for (int v = 0; v < n; ++v) {
    Row row;
    for (int u = 0; u < n; ++u)
      if (u != v) row.terms.push_back(Term{edge_id(u, v, n), 1.0});
    row.rel = Relation::Equal;
    row.rhs = 1.0;
    lp.add_row(std::move(row));
  }
  std::set<std::vector<int>> keys;
  LpResult res = matching_length_loop(lp, n, keys, nullptr);
  if (res.status != LpStatus::Optimal)
    throw LpError("minimum length matching LP not solved to optimality");
  const double optimum = res.objective_value;
  const double tol = kTieTol * std::max(1.0, std::abs(optimum));

  // Greedy lexicographic tie-break: give each vertex, in order, the smallest
  // partner that keeps the optimum.
  std::vector<int> partner(n, -1);
  std::vector<int> ids = integral_matching(lp, res, n);
  auto current_partner = [&](int v) {
    for (int id : ids) {
      const Segment e = edge_at(id, n);
      if (e.a == v) return e.b;
      if (e.b == v) return e.a;
    }
    throw Error("vertex left unmatched");
  };
  for (int v = 0; v < n; ++v) {
    if (partner[v] >= 0) continue;
    int chosen = current_partner(v);
    for (int u = v + 1; u < chosen; ++u) {
      if (partner[u] >= 0) continue;
      LinearProgram trial = lp_fix_variable(lp, edge_id(v, u, n), 1.0);
      std::set<std::vector<int>> trial_keys = keys;
      const LpResult tres = matching_length_loop(trial, n, trial_keys, nullptr);
      if (tres.status == LpStatus::Optimal &&
          tres.objective_value <= optimum + tol) {
        lp = std::move(trial);
        keys = std::move(trial_keys);
        res = tres;
        ids = integral_matching(lp, res, n);
        chosen = u;
        break;
      }
    }
    lp = lp_fix_variable(lp, edge_id(v, chosen, n), 1.0);
    partner[v] = chosen;
    partner[chosen] = v;
  }

  EdgeSet edges;
  for (int v = 0; v < n; ++v)
    if (partner[v] > v) edges.push_back(Segment::make(v, partner[v]));
  Solution sol = make_solution(Problem::Matching, family_for(metric),
                               std::move(edges), inst.points(), Method::MinLength);
  if (!is_perfect_matching(sol.edges, n))
    throw Error("minimum length matching is not perfect");
  return sol;
}

Solution min_length_tree(const Instance& inst, Metric metric) {
  const int n = inst.size();
  if (n < 2) throw Error("spanning tree requires at least two points");
  const int m = num_edges(n);
  // Integer keys: squared length orders Euclidean lengths exactly.
  std::vector<std::int64_t> key(m);
  for (int id = 0; id < m; ++id) {
    const Segment e = edge_at(id, n);
    const Point p = inst[e.a], q = inst[e.b];
    if (metric == Metric::Manhattan) {
      key[id] = manhattan_length(p, q);
    } else {
      const std::int64_t dx = std::int64_t{p.x} - q.x;
      const std::int64_t dy = std::int64_t{p.y} - q.y;
      key[id] = dx * dx + dy * dy;
    }
  }
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return key[a] < key[b]; });
  DisjointSets forest(n);
  EdgeSet edges;
  for (int id : order) {
    const Segment e = edge_at(id, n);
    if (forest.unite(e.a, e.b)) edges.push_back(e);
  }
  return make_solution(Problem::SpanningTree, family_for(metric), std::move(edges),
                       inst.points(), Method::MinLength);
}

}  // namespace stab
