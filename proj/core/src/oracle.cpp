#include "stab/oracle.hpp"

#include <algorithm>
#include <bitset>
#include <chrono>
#include <cmath>
#include <string>

#include "stab/error.hpp"

namespace stab {
namespace {

class BudgetGuard {
 public:
  explicit BudgetGuard(const EnumBudget& budget)
      : budget_(budget), start_(std::chrono::steady_clock::now()) {}

  void tick() {
    ++count_;
    if (budget_.max_structures > 0 && count_ > budget_.max_structures)
      throw BudgetExceeded("enumeration exceeded " +
                           std::to_string(budget_.max_structures) + " structures");
    if (budget_.max_ms > 0 && (count_ & 1023) == 0) {
      const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - start_)
                          .count();
      if (ms > budget_.max_ms)
        throw BudgetExceeded("enumeration exceeded " +
                             std::to_string(budget_.max_ms) + " ms");
    }
  }

 private:
  EnumBudget budget_;
  std::chrono::steady_clock::time_point start_;
  std::uint64_t count_ = 0;
};

void matchings_rec(std::vector<char>& used, EdgeSet& cur, int n,
                   BudgetGuard& guard, const StructureVisitor& visit) {
  int i = 0;
  while (i < n && used[i]) ++i;
  if (i == n) {
    guard.tick();
    visit(cur);
    return;
  }
  used[i] = 1;
  for (int j = i + 1; j < n; ++j) {
    if (used[j]) continue;
    used[j] = 1;
    cur.push_back(Segment{i, j});
    matchings_rec(used, cur, n, guard, visit);
    cur.pop_back();
    used[j] = 0;
  }
  used[i] = 0;
}

EdgeSet decode_pruefer(const std::vector<int>& seq, int n) {
  std::vector<int> degree(n, 1);
  for (int v : seq) ++degree[v];
  EdgeSet edges;
  for (int v : seq) {
    int leaf = 0;
    while (degree[leaf] != 1) ++leaf;
    edges.push_back(Segment::make(leaf, v));
    --degree[leaf];
    --degree[v];
  }
  int u = -1, w = -1;
  for (int v = 0; v < n; ++v) {
    if (degree[v] != 1) continue;
    (u < 0 ? u : w) = v;
  }
  edges.push_back(Segment::make(u, w));
  std::sort(edges.begin(), edges.end());
  return edges;
}

bool all_collinear(PointSpan pts) {
  if (pts.size() < 3) return true;
  for (std::size_t i = 2; i < pts.size(); ++i)
    if (orient(pts[0], pts[1], pts[i]) != 0) return false;
  return true;
}

using Mask = std::bitset<128>;

struct TriangulationSearch {
  const EdgeSet& candidates;
  std::vector<Mask> conflicts;
  Mask all;
  BudgetGuard& guard;
  const StructureVisitor& visit;

  void run(std::size_t idx, const Mask& included, const Mask& blocked) {
    const std::size_t m = candidates.size();
    if (idx == m) {
      if ((all & ~included & ~blocked).any()) return;
      EdgeSet out;
      for (std::size_t i = 0; i < m; ++i)
        if (included[i]) out.push_back(candidates[i]);
      guard.tick();
      visit(out);
      return;
    }
    if (!blocked[idx]) {
      Mask inc = included;
      inc.set(idx);
      run(idx + 1, inc, blocked | conflicts[idx]);
    }
    // Leaving idx out only yields a maximal set if something blocks it,
    // now or through a later edge that is still free.
    bool can_block = blocked[idx];
    for (std::size_t j = idx + 1; j < m && !can_block; ++j)
      can_block = conflicts[idx][j] && !blocked[j];
    if (can_block) run(idx + 1, included, blocked);
  }
};

}  // namespace

void enum_perfect_matchings(int n, const StructureVisitor& visit,
                            const EnumBudget& budget) {
  if (n % 2 != 0) throw Error("matching requires even n");
  if (n < 2 || n > kMaxMatchingOracleN)
    throw Error("matching enumeration supports 2 <= n <= " +
                std::to_string(kMaxMatchingOracleN));
  BudgetGuard guard(budget);
  std::vector<char> used(n, 0);
  EdgeSet cur;
  matchings_rec(used, cur, n, guard, visit);
}

void enum_spanning_trees(int n, const StructureVisitor& visit,
                         const EnumBudget& budget) {
  if (n < 2 || n > kMaxTreeOracleN)
    throw Error("tree enumeration supports 2 <= n <= " +
                std::to_string(kMaxTreeOracleN));
  BudgetGuard guard(budget);
  std::vector<int> seq(n - 2, 0);
  for (;;) {
    const EdgeSet tree = decode_pruefer(seq, n);
    guard.tick();
    visit(tree);
    int pos = n - 3;
    while (pos >= 0 && seq[pos] == n - 1) seq[pos--] = 0;
    if (pos < 0) break;
    ++seq[pos];
  }
}

void enum_triangulations(PointSpan pts, const StructureVisitor& visit,
                         const EnumBudget& budget) {
  if (static_cast<int>(pts.size()) > kMaxTriangulationOracleN)
    throw Error("triangulation enumeration supports n <= " +
                std::to_string(kMaxTriangulationOracleN));
  if (all_collinear(pts)) throw Error("no triangulation exists");
  const EdgeSet candidates = empty_segments(pts);
  const std::size_t m = candidates.size();
  std::vector<Mask> conflicts(m);
  Mask all;
  for (std::size_t i = 0; i < m; ++i) {
    all.set(i);
    for (std::size_t j = 0; j < m; ++j)
      if (i != j && segments_conflict(candidates[i], candidates[j], pts))
        conflicts[i].set(j);
  }
  BudgetGuard guard(budget);
  TriangulationSearch search{candidates, std::move(conflicts), all, guard, visit};
  search.run(0, Mask{}, Mask{});
}

std::vector<EdgeSet> all_perfect_matchings(int n, const EnumBudget& budget) {
  std::vector<EdgeSet> out;
  enum_perfect_matchings(n, [&](const EdgeSet& e) { out.push_back(e); }, budget);
  return out;
}

std::vector<EdgeSet> all_spanning_trees(int n, const EnumBudget& budget) {
  std::vector<EdgeSet> out;
  enum_spanning_trees(n, [&](const EdgeSet& e) { out.push_back(e); }, budget);
  return out;
}

std::vector<EdgeSet> all_triangulations(PointSpan pts, const EnumBudget& budget) {
  std::vector<EdgeSet> out;
  enum_triangulations(pts, [&](const EdgeSet& e) { out.push_back(e); }, budget);
  return out;
}

std::string to_string(Objective o) {
  switch (o) {
    case Objective::Stabbing: return "stabbing";
    case Objective::Crossing: return "crossing";
    case Objective::AverageStabbing: return "average";
    case Objective::Length: return "length";
  }
  return "?";
}

Objective parse_objective(std::string_view s) {
  if (s == "stabbing") return Objective::Stabbing;
  if (s == "crossing") return Objective::Crossing;
  if (s == "average") return Objective::AverageStabbing;
  if (s == "length") return Objective::Length;
  throw Error("unknown objective '" + std::string(s) + "'");
}

ObjectiveValue evaluate_objective(const EdgeSet& edges, PointSpan pts,
                                  LineFamily family, Objective objective) {
  ObjectiveValue out;
  switch (objective) {
    case Objective::Stabbing: {
      const int k = stabbing_number(edges, pts, family).k;
      out.exact = mpq_class(k);
      out.value = k;
      break;
    }
    case Objective::Crossing: {
      const int k = crossing_number(edges, pts, family);
      out.exact = mpq_class(k);
      out.value = k;
      break;
    }
    case Objective::AverageStabbing: {
      const AverageStabbing avg = average_stabbing(edges, pts, family);
      out.exact = avg.exact;
      out.value = avg.value;
      break;
    }
    case Objective::Length: {
      if (family == LineFamily::AxisParallel) {
        std::int64_t total = 0;
        for (const Segment& e : edges) total += manhattan_length(pts[e.a], pts[e.b]);
        out.exact = mpq_class(std::to_string(total));
        out.value = static_cast<double>(total);
      } else {
        for (const Segment& e : edges) out.value += euclidean_length(pts[e.a], pts[e.b]);
      }
      break;
    }
  }
  return out;
}

BruteResult brute_optimum(const Instance& inst, Problem problem,
                          LineFamily family, Objective objective,
                          const EnumBudget& budget) {
  const PointSpan pts = inst.points();
  const int n = inst.size();
  BruteResult best;
  bool have = false;

  // Stabbing counts via one edge mask per representative line.
  std::vector<Mask> line_masks;
  if (objective == Objective::Stabbing && problem != Problem::Triangulation) {
    for (const StabLine& line : representative_lines(pts, family)) {
      Mask mask;
      for (int id = 0; id < num_edges(n); ++id)
        if (stabs(line, edge_at(id, n), pts)) mask.set(id);
      line_masks.push_back(mask);
    }
  }

  auto consider = [&](const EdgeSet& edges) {
    ++best.structures;
    ObjectiveValue v;
    if (!line_masks.empty()) {
      Mask chosen;
      for (const Segment& e : edges) chosen.set(edge_id(e.a, e.b, n));
      std::size_t k = 0;
      for (const Mask& m : line_masks) k = std::max(k, (m & chosen).count());
      v.value = static_cast<double>(k);
      v.exact = mpq_class(static_cast<long>(k));
    } else {
      v = evaluate_objective(edges, pts, family, objective);
    }
    int cmp;
    if (!have) {
      cmp = -1;
    } else if (v.exact && best.exact) {
      cmp = v.exact < *best.exact ? -1 : (v.exact == *best.exact ? 0 : 1);
    } else {
      const double tol = 1e-9 * std::max(1.0, std::abs(best.value));
      cmp = v.value < best.value - tol ? -1 : (v.value <= best.value + tol ? 0 : 1);
    }
    if (cmp < 0) {
      have = true;
      best.value = v.value;
      best.exact = v.exact;
      best.argmin.clear();
      best.argmin.push_back(edges);
    } else if (cmp == 0) {
      best.argmin.push_back(edges);
    }
  };

  switch (problem) {
    case Problem::Matching: enum_perfect_matchings(n, consider, budget); break;
    case Problem::SpanningTree: enum_spanning_trees(n, consider, budget); break;
    case Problem::Triangulation: enum_triangulations(pts, consider, budget); break;
  }
  return best;
}

}  // namespace stab
