// Independent reference computations for tests. Nothing here calls the
// library routine it is used to check.
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "stab/geom.hpp"
#include "stab/instance.hpp"

namespace stab::testing {

inline Instance make_instance(std::vector<std::pair<int, int>> xy,
                              std::string name = "t") {
  std::vector<Point> pts;
  for (auto [x, y] : xy) pts.push_back({x, y});
  return Instance(std::move(name), std::move(pts));
}

inline Instance unit_square() {
  return make_instance({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, "unit-square");
}

inline EdgeSet edges_of(std::vector<std::pair<int, int>> ij) {
  EdgeSet out;
  for (auto [i, j] : ij) out.push_back(Segment::make(i, j));
  std::sort(out.begin(), out.end());
  return out;
}

// ---- stabbing by sweeping every event position ------------------------------

// Axis-parallel stabbing number: every vertical/horizontal position that is a
// coordinate or lies between two consecutive coordinates (doubled to stay
// integral), counted by interval containment.
inline int naive_axis_stabbing(const EdgeSet& edges, PointSpan pts) {
  int best = 0;
  for (int axis = 0; axis < 2; ++axis) {
    auto coord = [&](int i) -> std::int64_t {
      return 2 * static_cast<std::int64_t>(axis == 0 ? pts[i].x : pts[i].y);
    };
    std::vector<std::int64_t> events;
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) events.push_back(coord(i));
    std::sort(events.begin(), events.end());
    const std::size_t m = events.size();
    for (std::size_t i = 0; i + 1 < m; ++i) events.push_back((events[i] + events[i + 1]) / 2);
    for (std::int64_t t : events) {
      int count = 0;
      for (const Segment& e : edges) {
        const auto lo = std::min(coord(e.a), coord(e.b));
        const auto hi = std::max(coord(e.a), coord(e.b));
        count += lo <= t && t <= hi;
      }
      best = std::max(best, count);
    }
  }
  return best;
}

inline int sgn(std::int64_t v) { return (v > 0) - (v < 0); }

// Closed segment pq against the infinite line through u and v.
inline bool hits_line_through(Point u, Point v, Point p, Point q) {
  auto cross = [&](Point r) {
    return sgn(static_cast<std::int64_t>(v.x - u.x) * (r.y - u.y) -
               static_cast<std::int64_t>(v.y - u.y) * (r.x - u.x));
  };
  return cross(p) * cross(q) <= 0;
}

// General-family stabbing number: lines through two points and the
// axis-parallel sweep. Between events a line can be rotated or shifted until
// it meets two points without losing a segment.
inline int naive_general_stabbing(const EdgeSet& edges, PointSpan pts) {
  int best = naive_axis_stabbing(edges, pts);
  const int n = static_cast<int>(pts.size());
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      int count = 0;
      for (const Segment& e : edges) count += hits_line_through(pts[u], pts[v], pts[e.a], pts[e.b]);
      best = std::max(best, count);
    }
  return best;
}

inline int naive_stabbing(const EdgeSet& edges, PointSpan pts, LineFamily f) {
  return f == LineFamily::AxisParallel ? naive_axis_stabbing(edges, pts)
                                       : naive_general_stabbing(edges, pts);
}

// Mean number of edges met by vertical and horizontal lines, each position
// drawn from an interval of length D starting at the bounding-box minimum.
inline double quadrature_axis_average(const EdgeSet& edges, PointSpan pts,
                                      int samples = 20000) {
  std::int64_t minx = pts[0].x, maxx = pts[0].x, miny = pts[0].y, maxy = pts[0].y;
  for (const Point& p : pts) {
    minx = std::min<std::int64_t>(minx, p.x);
    maxx = std::max<std::int64_t>(maxx, p.x);
    miny = std::min<std::int64_t>(miny, p.y);
    maxy = std::max<std::int64_t>(maxy, p.y);
  }
  const double d = static_cast<double>(std::max(maxx - minx, maxy - miny));
  double total = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double off = (s + 0.5) * d / samples;
    for (const Segment& e : edges) {
      const Point p = pts[e.a], q = pts[e.b];
      const double tx = minx + off, ty = miny + off;
      total += std::min(p.x, q.x) <= tx && tx <= std::max(p.x, q.x);
      total += std::min(p.y, q.y) <= ty && ty <= std::max(p.y, q.y);
    }
  }
  return total / (2.0 * samples);
}

// ---- flows and cuts ---------------------------------------------------------

using Matrix = std::vector<std::vector<double>>;

inline Matrix capacity_matrix(std::span<const double> x, int n) {
  Matrix c(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) c[i][j] = c[j][i] = x[edge_id(i, j, n)];
  return c;
}

// Edmonds-Karp on a dense undirected capacity matrix.
inline double edmonds_karp(Matrix cap, int s, int t) {
  const int n = static_cast<int>(cap.size());
  double flow = 0.0;
  while (true) {
    std::vector<int> prev(n, -1);
    prev[s] = s;
    std::queue<int> q;
    q.push(s);
    while (!q.empty() && prev[t] < 0) {
      const int u = q.front();
      q.pop();
      for (int v = 0; v < n; ++v)
        if (prev[v] < 0 && cap[u][v] > 1e-12) {
          prev[v] = u;
          q.push(v);
        }
    }
    if (prev[t] < 0) return flow;
    double push = std::numeric_limits<double>::infinity();
    for (int v = t; v != s; v = prev[v]) push = std::min(push, cap[prev[v]][v]);
    for (int v = t; v != s; v = prev[v]) {
      cap[prev[v]][v] -= push;
      cap[v][prev[v]] += push;
    }
    flow += push;
  }
}

inline double subset_cut(std::span<const double> x, int n, unsigned mask) {
  double w = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (((mask >> i) & 1u) != ((mask >> j) & 1u)) w += x[edge_id(i, j, n)];
  return w;
}

// Minimum of x(delta(S)) over proper nonempty S, optionally only odd |S|.
inline double min_subset_cut(std::span<const double> x, int n, bool odd_only) {
  double best = std::numeric_limits<double>::infinity();
  // Fixing vertex n - 1 outside S visits each cut once.
  for (unsigned mask = 1; mask < (1u << (n - 1)); ++mask) {
    if (odd_only && std::popcount(mask) % 2 == 0) continue;
    best = std::min(best, subset_cut(x, n, mask));
  }
  return best;
}

// ---- random fractional points ----------------------------------------------

// Mixture of a half-integral point (matched pairs at 1, cycles of length
// >= 3 at 1/2) with random perfect matchings. Every degree equality holds up
// to rounding; the odd cycles make blossom violations likely.
inline std::vector<double> random_degree_point(int n, std::mt19937_64& rng) {
  std::vector<double> x(num_edges(n), 0.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double lambda = uni(rng) < 0.2 ? 1.0 : uni(rng);

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uniform_int_distribution<int> chunk(2, 5);
  for (int start = 0; start < n;) {
    int len = std::min(chunk(rng), n - start);
    if (n - start - len == 1) ++len;  // never leave a single vertex
    if (len == 2) {
      x[edge_id(perm[start], perm[start + 1], n)] += lambda;
    } else {
      for (int i = 0; i < len; ++i)
        x[edge_id(perm[start + i], perm[start + (i + 1) % len], n)] += lambda / 2;
    }
    start += len;
  }

  const int parts = 1 + static_cast<int>(uni(rng) * 3);
  for (int m = 0; m < parts; ++m) {
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int i = 0; i < n; i += 2)
      x[edge_id(perm[i], perm[i + 1], n)] += (1.0 - lambda) / parts;
  }
  return x;
}

// Sparse nonnegative weights with total n - 1.
inline std::vector<double> random_tree_point(int n, std::mt19937_64& rng) {
  std::vector<double> x(num_edges(n), 0.0);
  std::bernoulli_distribution keep(0.35);
  std::uniform_real_distribution<double> uni(0.05, 1.0);
  double sum = 0.0;
  for (double& v : x)
    if (keep(rng)) sum += (v = uni(rng));
  if (sum == 0.0) return x;
  for (double& v : x) v *= (n - 1) / sum;
  return x;
}

}  // namespace stab::testing
