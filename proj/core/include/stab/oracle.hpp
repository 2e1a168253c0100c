#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "stab/geom.hpp"
#include "stab/instance.hpp"

namespace stab {

/// Caps for brute-force enumeration. Hitting either one throws
/// BudgetExceeded; partial results are never returned.
struct EnumBudget {
  /// 0 means no cap.
  std::uint64_t max_structures = 200'000'000;
  /// Wall-clock cap in milliseconds, 0 means none.
  std::int64_t max_ms = 0;
};

inline constexpr int kMaxMatchingOracleN = 14;
inline constexpr int kMaxTreeOracleN = 8;
inline constexpr int kMaxTriangulationOracleN = 9;

/// Receives each structure as a sorted edge list. The reference is only valid
/// during the call.
using StructureVisitor = std::function<void(const EdgeSet&)>;

/// Every perfect matching of K_n once: the lowest free vertex is paired with
/// each higher free vertex in increasing order. Throws for odd n or n > 14.
void enum_perfect_matchings(int n, const StructureVisitor& visit,
                            const EnumBudget& budget = {});

/// Every labeled spanning tree of K_n once, decoded from Pruefer sequences in
/// lexicographic order. Requires 2 <= n <= 8.
void enum_spanning_trees(int n, const StructureVisitor& visit,
                         const EnumBudget& budget = {});

/// Every triangulation of the point set once: maximal sets of pairwise
/// non-conflicting empty segments. Requires n <= 9 and not all points
/// collinear.
void enum_triangulations(PointSpan pts, const StructureVisitor& visit,
                         const EnumBudget& budget = {});

/// Convenience wrappers collecting into a vector.
std::vector<EdgeSet> all_perfect_matchings(int n, const EnumBudget& budget = {});
std::vector<EdgeSet> all_spanning_trees(int n, const EnumBudget& budget = {});
std::vector<EdgeSet> all_triangulations(PointSpan pts, const EnumBudget& budget = {});

enum class Objective { Stabbing, Crossing, AverageStabbing, Length };

std::string to_string(Objective o);
Objective parse_objective(std::string_view s);

/// Objective of one structure. Length is Manhattan for the axis-parallel
/// family and Euclidean for the general family. `exact` is set whenever the
/// value is rational.
struct ObjectiveValue {
  double value = 0.0;
  std::optional<mpq_class> exact;
};

ObjectiveValue evaluate_objective(const EdgeSet& edges, PointSpan pts,
                                  LineFamily family, Objective objective);

struct BruteResult {
  double value = 0.0;
  std::optional<mpq_class> exact;
  /// All minimizers in enumeration order. Values without an exact form tie
  /// when they agree to a relative 1e-9.
  std::vector<EdgeSet> argmin;
  std::uint64_t structures = 0;
};

BruteResult brute_optimum(const Instance& inst, Problem problem,
                          LineFamily family, Objective objective,
                          const EnumBudget& budget = {});

}  // namespace stab
