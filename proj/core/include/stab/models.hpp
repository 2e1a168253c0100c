#pragma once

#include <optional>
#include <set>
#include <span>
#include <vector>

#include "stab/cuts.hpp"
#include "stab/error.hpp"
#include "stab/geom.hpp"
#include "stab/instance.hpp"
#include "stab/lp.hpp"

namespace stab {

/// Slack allowed on k while the length objective is minimized.
inline constexpr double kLengthPhaseSlack = 1e-7;
/// Cuts added per separation round, most violated first.
inline constexpr int kMaxCutsPerRound = 10;

/// The stabbing LP over the complete graph: variable edge_id(i, j) is x_ij,
/// variable k_index is the bound k. Stabbing rows are built eagerly, odd-set
/// or connectivity rows are added lazily by the separation loop.
struct StabModel {
  Problem problem = Problem::Matching;
  LineFamily family = LineFamily::AxisParallel;
  int n = 0;
  int k_index = 0;
  LinearProgram lp;
  std::vector<StabLine> lines;
  std::vector<int> line_rows;
  std::vector<Point> points;
  std::vector<double> lengths;
  std::vector<VertexCut> added_cuts;
  std::set<std::vector<int>> cut_keys;
  std::vector<int> fixed_ones;
  std::vector<int> fixed_zeros;
  /// Basis of the last k-phase optimum, reused as a warm start.
  std::optional<Basis> warm;

  int num_edge_vars() const { return num_edges(n); }
};

/// Thrown when fixings leave the model without a feasible point.
class InfeasibleModel : public Error {
 public:
  InfeasibleModel(std::vector<int> ones, std::vector<int> zeros);
  const std::vector<int>& fixed_ones() const { return ones_; }
  const std::vector<int>& fixed_zeros() const { return zeros_; }

 private:
  std::vector<int> ones_;
  std::vector<int> zeros_;
};

struct RelaxationResult {
  double k_frac = 0.0;
  /// Edge weights indexed by edge id.
  std::vector<double> x;
  int cuts_added = 0;
  int lp_iterations = 0;
  int rounds = 0;
  Basis basis;
};

/// Degree rows x(delta(v)) = 1, one stabbing row per representative line,
/// 0 <= x <= 1, k >= 0. Throws for odd n or n < 2.
StabModel build_matching_model(const Instance& inst, LineFamily family);

/// Total row sum x = n - 1 plus the stabbing rows. Throws for n < 2.
StabModel build_tree_model(const Instance& inst, LineFamily family);

StabModel build_model(const Instance& inst, Problem problem, LineFamily family);

/// Fixes x_e to 0 or 1 through its bounds.
void fix_edge(StabModel& model, int edge, int value);

/// Solve, separate, add violated cuts, repeat until none is violated.
RelaxationResult solve_relaxation(StabModel& model);

/// Second phase: cap k at k_frac + kLengthPhaseSlack, minimize total
/// Euclidean edge length, and rerun the separation loop. Cuts found here are
/// also added to the model.
RelaxationResult lexicographic_refine(StabModel& model,
                                      const RelaxationResult& result);

/// Re-solves the model's current program in exact rational arithmetic,
/// warm-started from `result`'s basis.
ExactLpResult certify_relaxation(const StabModel& model,
                                 const RelaxationResult& result);

/// The row x(delta(S)) >= 1 for the cut's member set.
Row cut_constraint(const VertexCut& cut, int n);

/// Member list of whichever side of the cut contains vertex 0, so S and its
/// complement share a key.
std::vector<int> cut_key(const VertexCut& cut, int n);

/// Edges with weight above the support threshold.
EdgeSet support_edges(std::span<const double> x, int n);

/// Properly crossing pairs among `edges`.
std::vector<std::pair<Segment, Segment>> crossing_pairs(const EdgeSet& edges,
                                                        PointSpan pts);

}  // namespace stab
