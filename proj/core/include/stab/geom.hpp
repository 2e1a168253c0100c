#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace stab {

/// Coordinates are bounded so that every line coefficient and line
/// evaluation used by the predicates fits in 64-bit signed arithmetic.
inline constexpr std::int32_t kMaxCoordinate = 1 << 28;

struct Point {
  std::int32_t x = 0;
  std::int32_t y = 0;

  friend auto operator<=>(const Point&, const Point&) = default;
};

using PointSpan = std::span<const Point>;

/// An edge between two points of an instance, stored with a < b.
struct Segment {
  int a = 0;
  int b = 0;

  /// Canonical segment for an unordered index pair; throws on i == j.
  static Segment make(int i, int j);

  friend auto operator<=>(const Segment&, const Segment&) = default;
};

using EdgeSet = std::vector<Segment>;

enum class LineFamily { AxisParallel, General };

std::string to_string(LineFamily family);

/// The line {(x, y) : a*x + b*y = c}, kept in lowest terms with a > 0, or
/// a == 0 and b > 0, so that equal lines compare equal.
struct StabLine {
  std::int64_t a = 0;
  std::int64_t b = 1;
  std::int64_t c = 0;

  static StabLine canonical(std::int64_t a, std::int64_t b, std::int64_t c);
  static StabLine vertical(std::int64_t x) { return canonical(1, 0, x); }
  static StabLine horizontal(std::int64_t y) { return canonical(0, 1, y); }
  /// Line through two distinct points.
  static StabLine through(Point p, Point q);

  bool is_axis_parallel() const { return a == 0 || b == 0; }
  std::string to_string() const;

  friend auto operator<=>(const StabLine&, const StabLine&) = default;
};

/// Sign of (q - p) x (r - p): +1 counter-clockwise, -1 clockwise, 0 collinear.
int orient(Point p, Point q, Point r);

/// Sign of a*x + b*y - c at p.
int side(const StabLine& line, Point p);

/// Closed-segment test: endpoint touches and collinear overlap count.
bool stabs(const StabLine& line, Point p, Point q);
bool stabs(const StabLine& line, Segment seg, PointSpan pts);

/// Finite line set on which the stabbing number attains its maximum.
/// Axis-parallel: one vertical per distinct x and one horizontal per distinct
/// y. General: every line through two points plus the axis-parallel set.
/// Sorted and deduplicated. Throws on an empty point set.
std::vector<StabLine> representative_lines(PointSpan pts, LineFamily family);

struct StabbingResult {
  int k = 0;
  std::optional<StabLine> witness;
};

StabbingResult stabbing_number(const EdgeSet& edges, PointSpan pts,
                               LineFamily family);

/// Representative lines plus lines strictly inside the cells next to them:
/// midpoint lines between consecutive coordinates, and for the general family
/// two parallels offset by half a unit on either side of each pair line.
/// Exact for the axis-parallel crossing number, a superset heuristic for the
/// general one.
std::vector<StabLine> crossing_evaluation_lines(PointSpan pts,
                                                LineFamily family);

/// Number of connected components of line ∩ (union of edges). Touching or
/// overlapping pieces merge (closed-set semantics).
int line_components(const StabLine& line, const EdgeSet& edges, PointSpan pts);

int crossing_number(const EdgeSet& edges, PointSpan pts, LineFamily family);

/// True iff the segments meet in a single point interior to both; shared
/// endpoints, touching and collinear overlap are not crossings.
bool is_crossing_pair(Segment e1, Segment e2, PointSpan pts);

/// Closed segments pq and rs share at least one point.
bool segments_intersect(Point p, Point q, Point r, Point s);

/// Point r lies strictly inside segment pq.
bool strictly_inside(Point p, Point q, Point r);

/// Two edges that may not both appear in a plane straight-line graph: they
/// share a point other than a common endpoint. Assumes neither edge passes
/// through a third point of `pts`.
bool segments_conflict(Segment e1, Segment e2, PointSpan pts);

/// Edges of the complete graph that contain no other point in their
/// interior, in lexicographic order.
EdgeSet empty_segments(PointSpan pts);

double euclidean_length(Point p, Point q);
std::int64_t manhattan_length(Point p, Point q);

/// Average number of edges met by a uniformly random line of the family.
///
/// Axis-parallel lines: both orientations share an intercept interval of
/// length D = max(width, height) of the bounding box, so the average is
/// (sum |dx| + sum |dy|) / (2 D), kept exactly in `exact`.
///
/// General lines: uniform measure over lines meeting the disk circumscribing
/// the bounding box (radius R). A segment of length L is met by a set of
/// lines of measure 2L out of 2 pi R, so the average is sum L / (pi R).
struct AverageStabbing {
  std::optional<mpq_class> exact;
  double value = 0.0;
};

AverageStabbing average_stabbing(const EdgeSet& edges, PointSpan pts,
                                 LineFamily family);

/// Validates that every edge refers to a point of `pts` and is canonical.
void check_edges(const EdgeSet& edges, std::size_t n);

// Complete-graph edge numbering in lexicographic order of (a, b).
inline int num_edges(int n) { return n * (n - 1) / 2; }
inline int edge_id(int i, int j, int n) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}
Segment edge_at(int id, int n);

}  // namespace stab
