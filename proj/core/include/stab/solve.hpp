#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "stab/instance.hpp"

namespace stab {

/// Per-iteration record of iterated rounding, taken after the length phase.
struct RoundingStep {
  double k_frac = 0.0;
  /// Largest weight over all edges, fixed ones included.
  double max_weight = 0.0;
  /// Largest weight over edges not yet fixed; 0 once the solution is integral.
  double max_free_weight = 0.0;
  /// Properly crossing support pairs among edges not fixed to one.
  int crossing_pairs = 0;
  /// Edge fixed at this step, or -1 when the refined point was integral.
  int fixed_edge = -1;
};

struct RoundingTrace {
  std::vector<RoundingStep> steps;
  double root_k_frac = 0.0;
  /// Exact value of the root relaxation, when requested.
  std::optional<mpq_class> root_exact;
  int cuts_added = 0;
  int lp_iterations = 0;
};

struct RoundingOptions {
  /// Re-solve the root relaxation in rational arithmetic and store the exact
  /// value as the lower bound.
  bool exact_check = false;
};

/// Solve, refine by length, fix the heaviest free edge to one, repeat. Ties
/// go to the smaller edge id. Tree rounding skips candidates that close a
/// cycle among the fixed edges. A refined point that is already integral is
/// taken whole. lower_bound is the root k_frac.
Solution iterated_rounding(const Instance& inst, Problem problem,
                           LineFamily family, const RoundingOptions& options = {},
                           RoundingTrace* trace = nullptr);

struct BnbOptions {
  /// Milliseconds; 0 means no limit.
  std::int64_t time_limit_ms = 0;
  /// Best-first by default; depth-first explores the one-child first.
  bool depth_first = false;
  bool exact_check = false;
};

struct BnbStats {
  int nodes = 0;
  int pruned = 0;
  int infeasible = 0;
  int max_depth = 0;
  int cuts_added = 0;
  int lp_iterations = 0;
  double root_k_frac = 0.0;
  std::optional<mpq_class> root_exact;
  int rounding_k = 0;
  bool proven = false;
  double elapsed_ms = 0.0;
};

/// Exact minimum stabbing number by branch and bound over the relaxation.
/// Node bound is ceil(k_frac - 1e-6); branching is on the most fractional
/// edge. The incumbent starts from iterated rounding. On timeout the best
/// incumbent is returned with proven = false.
Solution branch_and_bound(const Instance& inst, Problem problem,
                          LineFamily family, const BnbOptions& options = {},
                          BnbStats* stats = nullptr);

enum class Metric { Euclidean, Manhattan };

std::string to_string(Metric m);
Metric parse_metric(std::string_view s);
/// Manhattan pairs with the axis-parallel family, Euclidean with general.
LineFamily family_for(Metric m);
Metric metric_for(LineFamily f);

/// Minimum total length perfect matching from the matching LP with a length
/// objective. Among optimal matchings the lexicographically smallest sorted
/// edge list is returned. Throws for odd n.
Solution min_length_matching(const Instance& inst, Metric metric);

/// Minimum spanning tree (Kruskal, ties by edge id).
Solution min_length_tree(const Instance& inst, Metric metric);

}  // namespace stab
