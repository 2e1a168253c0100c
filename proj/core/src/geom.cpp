#include "stab/geom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "stab/error.hpp"

namespace stab {
namespace {

__extension__ typedef __int128 i128;

int sign(i128 v) { return (v > 0) - (v < 0); }

i128 evaluate(const StabLine& line, Point p) {
  return static_cast<i128>(line.a) * p.x + static_cast<i128>(line.b) * p.y -
         line.c;
}

std::vector<std::int64_t> distinct_sorted(PointSpan pts, bool use_x) {
  std::vector<std::int64_t> v;
  v.reserve(pts.size());
  for (const Point& p : pts) v.push_back(use_x ? p.x : p.y);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void append_axis_lines(PointSpan pts, std::vector<StabLine>& out) {
  for (std::int64_t x : distinct_sorted(pts, true))
    out.push_back(StabLine::vertical(x));
  for (std::int64_t y : distinct_sorted(pts, false))
    out.push_back(StabLine::horizontal(y));
}

void sort_unique(std::vector<StabLine>& lines) {
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
}

}  // namespace

Segment Segment::make(int i, int j) {
  if (i == j) throw Error("degenerate segment " + std::to_string(i));
  return i < j ? Segment{i, j} : Segment{j, i};
}

std::string to_string(LineFamily family) {
  return family == LineFamily::AxisParallel ? "axis" : "general";
}

StabLine StabLine::canonical(std::int64_t a, std::int64_t b, std::int64_t c) {
  if (a == 0 && b == 0) throw Error("line with zero normal");
  std::int64_t g = std::gcd(std::gcd(a, b), c);
  a /= g;
  b /= g;
  c /= g;
  if (a < 0 || (a == 0 && b < 0)) {
    a = -a;
    b = -b;
    c = -c;
  }
  return StabLine{a, b, c};
}

StabLine StabLine::through(Point p, Point q) {
  if (p == q) throw Error("line through coincident points");
  const std::int64_t a = static_cast<std::int64_t>(q.y) - p.y;
  const std::int64_t b = static_cast<std::int64_t>(p.x) - q.x;
  const std::int64_t c = a * p.x + b * p.y;
  return canonical(a, b, c);
}

std::string StabLine::to_string() const {
  if (b == 0 && a == 1) return "x=" + std::to_string(c);
  if (a == 0 && b == 1) return "y=" + std::to_string(c);
  return std::to_string(a) + "x+" + std::to_string(b) + "y=" +
         std::to_string(c);
}

int orient(Point p, Point q, Point r) {
  const i128 det = static_cast<i128>(q.x - static_cast<std::int64_t>(p.x)) *
                       (r.y - static_cast<std::int64_t>(p.y)) -
                   static_cast<i128>(q.y - static_cast<std::int64_t>(p.y)) *
                       (r.x - static_cast<std::int64_t>(p.x));
  return sign(det);
}

int side(const StabLine& line, Point p) { return sign(evaluate(line, p)); }

bool stabs(const StabLine& line, Point p, Point q) {
  return side(line, p) * side(line, q) <= 0;
}

bool stabs(const StabLine& line, Segment seg, PointSpan pts) {
  return stabs(line, pts[seg.a], pts[seg.b]);
}

std::vector<StabLine> representative_lines(PointSpan pts, LineFamily family) {
  if (pts.empty()) throw Error("empty instance");
  std::vector<StabLine> lines;
  append_axis_lines(pts, lines);
  if (family == LineFamily::General) {
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        lines.push_back(StabLine::through(pts[i], pts[j]));
  }
  sort_unique(lines);
  return lines;
}

void check_edges(const EdgeSet& edges, std::size_t n) {
  for (const Segment& e : edges) {
    if (e.a < 0 || e.b < 0 || static_cast<std::size_t>(e.b) >= n ||
        e.a >= e.b) {
      throw Error("invalid edge [" + std::to_string(e.a) + "," +
                  std::to_string(e.b) + "] for " + std::to_string(n) +
                  " points");
    }
  }
}

StabbingResult stabbing_number(const EdgeSet& edges, PointSpan pts,
                               LineFamily family) {
  check_edges(edges, pts.size());
  StabbingResult best;
  if (edges.empty()) return best;
  for (const StabLine& line : representative_lines(pts, family)) {
    int count = 0;
    for (const Segment& e : edges) count += stabs(line, e, pts) ? 1 : 0;
    if (count > best.k) {
      best.k = count;
      best.witness = line;
    }
  }
  return best;
}

std::vector<StabLine> crossing_evaluation_lines(PointSpan pts,
                                                LineFamily family) {
  std::vector<StabLine> lines = representative_lines(pts, family);
  const std::vector<std::int64_t> xs = distinct_sorted(pts, true);
  const std::vector<std::int64_t> ys = distinct_sorted(pts, false);
  std::vector<StabLine> extra;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    extra.push_back(StabLine::canonical(2, 0, xs[i] + xs[i + 1]));
  for (std::size_t i = 0; i + 1 < ys.size(); ++i)
    extra.push_back(StabLine::canonical(0, 2, ys[i] + ys[i + 1]));
  if (family == LineFamily::General) {
    for (const StabLine& l : lines) {
      if (l.is_axis_parallel()) continue;
      // Vertex values a*x + b*y are integers, so c +- 1/2 lies in the open
      // cell adjacent to the pair line on each side.
      extra.push_back(StabLine::canonical(2 * l.a, 2 * l.b, 2 * l.c + 1));
      extra.push_back(StabLine::canonical(2 * l.a, 2 * l.b, 2 * l.c - 1));
    }
  }
  lines.insert(lines.end(), extra.begin(), extra.end());
  sort_unique(lines);
  return lines;
}

int line_components(const StabLine& line, const EdgeSet& edges, PointSpan pts) {
  // Position along the line is measured by t = -b*x + a*y.
  auto param = [&](Point p) {
    return -line.b * static_cast<std::int64_t>(p.x) +
           line.a * static_cast<std::int64_t>(p.y);
  };
  std::vector<std::pair<mpq_class, mpq_class>> pieces;
  for (const Segment& e : edges) {
    const Point p = pts[e.a];
    const Point q = pts[e.b];
    const i128 fp = evaluate(line, p);
    const i128 fq = evaluate(line, q);
    if (sign(fp) * sign(fq) > 0) continue;
    const long tp = param(p);
    const long tq = param(q);
    if (fp == 0 && fq == 0) {
      pieces.emplace_back(mpq_class(std::min(tp, tq)),
                          mpq_class(std::max(tp, tq)));
    } else {
      const long lp = static_cast<long>(fp);
      const long lq = static_cast<long>(fq);
      mpq_class t = (mpq_class(lp) * tq - mpq_class(lq) * tp) /
                    (mpq_class(lp) - mpq_class(lq));
      t.canonicalize();
      pieces.emplace_back(t, t);
    }
  }
  if (pieces.empty()) return 0;
  std::sort(pieces.begin(), pieces.end());
  int components = 1;
  mpq_class reach = pieces.front().second;
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    if (pieces[i].first > reach) {
      ++components;
      reach = pieces[i].second;
    } else if (pieces[i].second > reach) {
      reach = pieces[i].second;
    }
  }
  return components;
}

int crossing_number(const EdgeSet& edges, PointSpan pts, LineFamily family) {
  check_edges(edges, pts.size());
  if (edges.empty()) return 0;
  int best = 0;
  for (const StabLine& line : crossing_evaluation_lines(pts, family))
    best = std::max(best, line_components(line, edges, pts));
  return best;
}

bool is_crossing_pair(Segment e1, Segment e2, PointSpan pts) {
  if (e1 == e2) return false;
  const Point p = pts[e1.a], q = pts[e1.b], r = pts[e2.a], s = pts[e2.b];
  const int o1 = orient(p, q, r), o2 = orient(p, q, s);
  const int o3 = orient(r, s, p), o4 = orient(r, s, q);
  return o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 && o1 != o2 && o3 != o4;
}

bool strictly_inside(Point p, Point q, Point r) {
  if (orient(p, q, r) != 0 || r == p || r == q) return false;
  return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
         std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
}

bool segments_intersect(Point p, Point q, Point r, Point s) {
  auto on_box = [](Point a, Point b, Point c) {
    return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= c.y && c.y <= std::max(a.y, b.y);
  };
  const int o1 = orient(p, q, r), o2 = orient(p, q, s);
  const int o3 = orient(r, s, p), o4 = orient(r, s, q);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && on_box(p, q, r)) return true;
  if (o2 == 0 && on_box(p, q, s)) return true;
  if (o3 == 0 && on_box(r, s, p)) return true;
  if (o4 == 0 && on_box(r, s, q)) return true;
  return false;
}

bool segments_conflict(Segment e1, Segment e2, PointSpan pts) {
  if (e1 == e2) return false;
  if (e1.a == e2.a || e1.a == e2.b || e1.b == e2.a || e1.b == e2.b)
    return false;
  return segments_intersect(pts[e1.a], pts[e1.b], pts[e2.a], pts[e2.b]);
}

EdgeSet empty_segments(PointSpan pts) {
  EdgeSet out;
  const int n = static_cast<int>(pts.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      bool blocked = false;
      for (int r = 0; r < n && !blocked; ++r)
        blocked = r != i && r != j && strictly_inside(pts[i], pts[j], pts[r]);
      if (!blocked) out.push_back(Segment{i, j});
    }
  }
  return out;
}

double euclidean_length(Point p, Point q) {
  return std::hypot(static_cast<double>(q.x) - p.x,
                    static_cast<double>(q.y) - p.y);
}

std::int64_t manhattan_length(Point p, Point q) {
  return std::abs(static_cast<std::int64_t>(q.x) - p.x) +
         std::abs(static_cast<std::int64_t>(q.y) - p.y);
}

AverageStabbing average_stabbing(const EdgeSet& edges, PointSpan pts,
                                 LineFamily family) {
  check_edges(edges, pts.size());
  if (pts.empty()) throw Error("empty instance");
  auto [xmin, xmax] = std::minmax_element(
      pts.begin(), pts.end(), [](Point a, Point b) { return a.x < b.x; });
  auto [ymin, ymax] = std::minmax_element(
      pts.begin(), pts.end(), [](Point a, Point b) { return a.y < b.y; });
  const std::int64_t width = static_cast<std::int64_t>(xmax->x) - xmin->x;
  const std::int64_t height = static_cast<std::int64_t>(ymax->y) - ymin->y;
  if (width == 0 && height == 0)
    throw Error("degenerate instance: all points coincide");

  AverageStabbing avg;
  if (family == LineFamily::AxisParallel) {
    std::int64_t total = 0;
    for (const Segment& e : edges) total += manhattan_length(pts[e.a], pts[e.b]);
    mpq_class value(mpz_class(static_cast<long>(total)),
                    mpz_class(static_cast<long>(2 * std::max(width, height))));
    value.canonicalize();
    avg.value = value.get_d();
    avg.exact = std::move(value);
  } else {
    double total = 0.0;
    for (const Segment& e : edges) total += euclidean_length(pts[e.a], pts[e.b]);
    const double radius =
        0.5 * std::hypot(static_cast<double>(width), static_cast<double>(height));
    avg.value = total / (std::numbers::pi * radius);
  }
  return avg;
}

Segment edge_at(int id, int n) {
  if (id < 0 || id >= num_edges(n)) throw Error("edge id out of range");
  int i = 0;
  while (id >= n - 1 - i) {
    id -= n - 1 - i;
    ++i;
  }
  return Segment{i, i + 1 + id};
}

}  // namespace stab
