#include "stab/models.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "stab/error.hpp"

namespace stab {
namespace {

StabModel base_model(const Instance& inst, Problem problem, LineFamily family,
                     double edge_upper) {
  StabModel model;
  model.problem = problem;
  model.family = family;
  model.n = inst.size();
  model.points.assign(inst.points().begin(), inst.points().end());
  const int m = num_edges(model.n);
  model.lengths.resize(m);
  for (int id = 0; id < m; ++id) {
    const Segment e = edge_at(id, model.n);
    model.lengths[id] = euclidean_length(inst[e.a], inst[e.b]);
    model.lp.add_variable(0.0, edge_upper);
  }
  model.k_index = model.lp.add_variable(0.0, kInfinity, 1.0);
  return model;
}

void add_stabbing_rows(StabModel& model, const Instance& inst) {
  model.lines = representative_lines(inst.points(), model.family);
  const int m = num_edges(model.n);
  for (const StabLine& line : model.lines) {
    Row row;
    for (int id = 0; id < m; ++id) {
      if (stabs(line, edge_at(id, model.n), inst.points()))
        row.terms.push_back(Term{id, 1.0});
    }
    row.terms.push_back(Term{model.k_index, -1.0});
    row.rel = Relation::LessEq;
    row.rhs = 0.0;
    model.line_rows.push_back(model.lp.add_row(std::move(row)));
  }
}

std::vector<double> edge_part(const StabModel& model, const LpResult& res) {
  return std::vector<double>(res.primal.begin(),
                             res.primal.begin() + model.num_edge_vars());
}

void throw_infeasible(const StabModel& model) {
  throw InfeasibleModel(model.fixed_ones, model.fixed_zeros);
}

// Runs the separation loop on `lp` (the model's own program or a copy);
// rows added to a copy are mirrored into the model.
RelaxationResult cut_loop(StabModel& model, LinearProgram& lp,
                          const Basis* warm) {
  const bool mirror = &lp != &model.lp;
  RelaxationResult out;
  LpResult res = lp_solve(lp, warm);
  out.lp_iterations += res.iterations;
  for (;;) {
    ++out.rounds;
    if (res.status != LpStatus::Optimal) throw_infeasible(model);
    const std::vector<double> x = edge_part(model, res);
    const std::vector<VertexCut> found =
        model.problem == Problem::Matching ? separate_blossom(x, model.n)
                                           : separate_connectivity(x, model.n);
    std::vector<Row> rows;
    for (const VertexCut& cut : found) {
      if (static_cast<int>(rows.size()) == kMaxCutsPerRound) break;
      if (!model.cut_keys.insert(cut_key(cut, model.n)).second) continue;
      model.added_cuts.push_back(cut);
      rows.push_back(cut_constraint(cut, model.n));
    }
    if (rows.empty()) break;
    if (mirror)
      for (const Row& r : rows) model.lp.add_row(r);
    out.cuts_added += static_cast<int>(rows.size());
    res = lp_add_rows(lp, rows, res);
    out.lp_iterations += res.iterations;
  }
  out.x = edge_part(model, res);
  out.k_frac = res.primal[model.k_index];
  out.basis = res.basis;
  return out;
}

Basis padded(const Basis& basis, const LinearProgram& lp) {
  Basis b = basis;
  for (int i = static_cast<int>(b.basic.size()); i < lp.num_rows(); ++i)
    b.basic.push_back(lp.num_vars() + i);
  return b;
}

bool fixed_to_one(const StabModel& model, const Segment& e) {
  const int id = edge_id(e.a, e.b, model.n);
  return std::find(model.fixed_ones.begin(), model.fixed_ones.end(), id) !=
         model.fixed_ones.end();
}

std::vector<std::pair<Segment, Segment>> free_crossings(
    const StabModel& model, const std::vector<double>& x) {
  EdgeSet free;
  for (const Segment& e : support_edges(x, model.n))
    if (!fixed_to_one(model, e)) free.push_back(e);
  return crossing_pairs(free, model.points);
}

// Minimizing length does not always uncross the support: the exchange that
// removes a crossing can be blocked by x <= 1 on the replacement edges. For
// each remaining crossing, forbid one of its edges (longer first) under the
// same k cap and keep the result when the program stays feasible.
void repair_crossings(StabModel& model, LinearProgram& phase2,
                      RelaxationResult& refined) {
  const int max_attempts = model.num_edge_vars();
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const auto pairs = free_crossings(model, refined.x);
    if (pairs.empty()) return;
    bool repaired = false;
    for (const auto& [e, f] : pairs) {
      const int ie = edge_id(e.a, e.b, model.n), jf = edge_id(f.a, f.b, model.n);
      const std::array<int, 2> order = model.lengths[ie] >= model.lengths[jf]
                                           ? std::array<int, 2>{ie, jf}
                                           : std::array<int, 2>{jf, ie};
      for (int id : order) {
        LinearProgram trial = phase2;
        trial.set_bounds(id, 0.0, 0.0);
        try {
          RelaxationResult r = cut_loop(model, trial, nullptr);
          if (free_crossings(model, r.x).size() >= pairs.size()) continue;
          r.cuts_added += refined.cuts_added;
          r.lp_iterations += refined.lp_iterations;
          r.rounds += refined.rounds;
          refined = std::move(r);
          phase2 = std::move(trial);
          repaired = true;
        } catch (const InfeasibleModel&) {
        }
        if (repaired) break;
      }
      if (repaired) break;
    }
    if (!repaired) return;
  }
}

}  // namespace

InfeasibleModel::InfeasibleModel(std::vector<int> ones, std::vector<int> zeros)
    : Error("LP infeasible under fixings (" + std::to_string(ones.size()) +
            " edges at 1, " + std::to_string(zeros.size()) + " at 0)"),
      ones_(std::move(ones)),
      zeros_(std::move(zeros)) {}

StabModel build_matching_model(const Instance& inst, LineFamily family) {
  const int n = inst.size();
  if (n % 2 != 0) throw Error("matching requires even n");
  if (n < 2) throw Error("matching requires at least two points");
  StabModel model = base_model(inst, Problem::Matching, family, 1.0);
  for (int v = 0; v < n; ++v) {
    Row row;
    for (int u = 0; u < n; ++u)
      if (u != v) row.terms.push_back(Term{edge_id(u, v, n), 1.0});
    row.rel = Relation::Equal;
    row.rhs = 1.0;
    model.lp.add_row(std::move(row));
  }
  add_stabbing_rows(model, inst);
  return model;
}

StabModel build_tree_model(const Instance& inst, LineFamily family) {
  const int n = inst.size();
  if (n < 2) throw Error("spanning tree requires at least two points");
  StabModel model = base_model(inst, Problem::SpanningTree, family, kInfinity);
  Row total;
  for (int id = 0; id < num_edges(n); ++id) total.terms.push_back(Term{id, 1.0});
  total.rel = Relation::Equal;
  total.rhs = n - 1;
  model.lp.add_row(std::move(total));
  add_stabbing_rows(model, inst);
  return model;
}

StabModel build_model(const Instance& inst, Problem problem,
                      LineFamily family) {
  switch (problem) {
    case Problem::Matching: return build_matching_model(inst, family);
    case Problem::SpanningTree: return build_tree_model(inst, family);
    case Problem::Triangulation: break;
  }
  throw Error("no LP model for triangulations");
}

void fix_edge(StabModel& model, int edge, int value) {
  if (value != 0 && value != 1) throw Error("edges are fixed to 0 or 1");
  model.lp = lp_fix_variable(model.lp, edge, value);
  auto& list = value == 1 ? model.fixed_ones : model.fixed_zeros;
  if (std::find(list.begin(), list.end(), edge) == list.end())
    list.push_back(edge);
}

RelaxationResult solve_relaxation(StabModel& model) {
  const Basis* warm = nullptr;
  Basis start;
  if (model.warm) {
    start = padded(*model.warm, model.lp);
    warm = &start;
  }
  RelaxationResult out = cut_loop(model, model.lp, warm);
  model.warm = out.basis;
  return out;
}

RelaxationResult lexicographic_refine(StabModel& model,
                                      const RelaxationResult& result) {
  LinearProgram phase2 = model.lp;
  Row cap;
  cap.terms.push_back(Term{model.k_index, 1.0});
  cap.rel = Relation::LessEq;
  cap.rhs = result.k_frac + kLengthPhaseSlack;
  phase2.add_row(std::move(cap));
  phase2.clear_objective();
  for (int id = 0; id < model.num_edge_vars(); ++id)
    phase2.set_cost(id, model.lengths[id]);

  // The k-phase optimum stays feasible under the cap, so its basis (plus the
  // cap's slack) is a primal-feasible start.
  const Basis start = padded(result.basis, phase2);
  RelaxationResult refined = cut_loop(model, phase2, &start);
  repair_crossings(model, phase2, refined);
  return refined;
}

ExactLpResult certify_relaxation(const StabModel& model,
                                 const RelaxationResult& result) {
  const Basis start = padded(result.basis, model.lp);
  return lp_solve_exact(model.lp, &start);
}

Row cut_constraint(const VertexCut& cut, int n) {
  std::vector<char> in(n, 0);
  for (int v : cut.members) in[v] = 1;
  Row row;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (in[i] != in[j]) row.terms.push_back(Term{edge_id(i, j, n), 1.0});
  row.rel = Relation::GreaterEq;
  row.rhs = 1.0;
  return row;
}

std::vector<int> cut_key(const VertexCut& cut, int n) {
  std::vector<char> in(n, 0);
  for (int v : cut.members) in[v] = 1;
  std::vector<int> key;
  const char side_of_zero = in[0];
  for (int v = 0; v < n; ++v)
    if (in[v] == side_of_zero) key.push_back(v);
  return key;
}

EdgeSet support_edges(std::span<const double> x, int n) {
  EdgeSet out;
  for (int id = 0; id < num_edges(n); ++id)
    if (x[id] > kSupportThreshold) out.push_back(edge_at(id, n));
  return out;
}

std::vector<std::pair<Segment, Segment>> crossing_pairs(const EdgeSet& edges,
                                                        PointSpan pts) {
  std::vector<std::pair<Segment, Segment>> out;
  for (std::size_t i = 0; i < edges.size(); ++i)
    for (std::size_t j = i + 1; j < edges.size(); ++j)
      if (is_crossing_pair(edges[i], edges[j], pts))
        out.emplace_back(edges[i], edges[j]);
  return out;
}

}  // namespace stab
