#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "stab/geom.hpp"

namespace stab {

/// A named set of distinct integer points. Immutable after construction.
class Instance {
 public:
  /// Throws if `points` is empty, has duplicates, or leaves the coordinate
  /// range [-kMaxCoordinate, kMaxCoordinate].
  Instance(std::string name, std::vector<Point> points);

  const std::string& name() const { return name_; }
  PointSpan points() const { return points_; }
  int size() const { return static_cast<int>(points_.size()); }
  const Point& operator[](int i) const { return points_[i]; }

  /// Copy without the last point (the explicit odd-n omission for matchings).
  Instance drop_last() const;

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  std::string name_;
  std::vector<Point> points_;
};

/// Reads the native format ("n" then n lines "x y", '#' comments) or the
/// NODE_COORD_SECTION subset of TSPLIB. Fractional TSPLIB coordinates are
/// scaled by 10^d (d = most decimals present, at most 4) and rounded; the
/// scaling is appended to the name as "_x1e<d>".
Instance parse_instance(std::string_view text,
                        std::string default_name = "instance");

/// Native format; the name travels in a leading "# name: ..." comment.
std::string serialize_instance(const Instance& inst);

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

/// `n` distinct uniform points of [0, bbox]^2 drawn from mt19937_64(seed).
/// Requires n >= 1 and bbox >= n - 1.
Instance gen_random(int n, std::int64_t bbox, std::uint64_t seed);

/// rows x cols unit grid (row-major, y outer) from which a seeded uniform
/// subset is removed so that floor(rows * cols * keep_fraction) points remain.
Instance gen_grid(int rows, int cols, const mpq_class& keep_fraction,
                  std::uint64_t seed);

enum class Problem { Matching, SpanningTree, Triangulation };
enum class Method { LpBound, Rounding, Exact, Brute, MinLength };

std::string to_string(Problem p);
std::string to_string(Method m);
Problem parse_problem(std::string_view s);
LineFamily parse_family(std::string_view s);
Method parse_method(std::string_view s);

bool is_perfect_matching(const EdgeSet& edges, int n);
bool is_spanning_tree(const EdgeSet& edges, int n);
/// Maximal set of pairwise non-conflicting edges, none passing through a
/// third point.
bool is_triangulation(const EdgeSet& edges, PointSpan pts);
bool is_feasible(Problem problem, const EdgeSet& edges, PointSpan pts);

struct Solution {
  Problem problem = Problem::Matching;
  LineFamily family = LineFamily::AxisParallel;
  EdgeSet edges;
  int k = 0;
  std::optional<mpq_class> lower_bound;
  Method method = Method::Exact;
  /// False when branch and bound stopped on its time limit. Not serialized.
  bool proven = true;
};

/// Sorts the edges and recomputes k as the stabbing number.
Solution make_solution(Problem problem, LineFamily family, EdgeSet edges,
                       PointSpan pts, Method method,
                       std::optional<mpq_class> lower_bound = std::nullopt);

/// One-line JSON document with keys in the order problem, family, k,
/// lower_bound, method, edges.
std::string solution_to_json(const Solution& sol);
Solution solution_from_json(std::string_view text);

/// Last continued-fraction convergent of `value` with denominator at most
/// `max_den`.
mpq_class rational_approx(double value, long max_den = 1000000);

}  // namespace stab
