#include "stab/instance.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "stab/error.hpp"

namespace stab {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<long long> parse_int(std::string_view tok) {
  if (tok.empty()) return std::nullopt;
  std::size_t i = 0;
  bool neg = false;
  if (tok[0] == '-' || tok[0] == '+') {
    neg = tok[0] == '-';
    i = 1;
  }
  if (i == tok.size()) return std::nullopt;
  long long v = 0;
  for (; i < tok.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(tok[i]))) return std::nullopt;
    if (v > (1LL << 40)) return std::nullopt;
    v = v * 10 + (tok[i] - '0');
  }
  return neg ? -v : v;
}

/// Exact value of a decimal token such as "-12.5e3", plus the number of
/// decimals needed to write it without a fractional part.
struct Decimal {
  mpq_class value;
  int decimals = 0;
};

std::optional<Decimal> parse_decimal(std::string_view tok) {
  std::size_t i = 0;
  bool neg = false;
  if (i < tok.size() && (tok[i] == '-' || tok[i] == '+')) {
    neg = tok[i] == '-';
    ++i;
  }
  std::string digits;
  int frac = 0;
  bool seen_dot = false;
  for (; i < tok.size() && tok[i] != 'e' && tok[i] != 'E'; ++i) {
    if (tok[i] == '.') {
      if (seen_dot) return std::nullopt;
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(tok[i]))) {
      digits.push_back(tok[i]);
      if (seen_dot) ++frac;
    } else {
      return std::nullopt;
    }
  }
  if (digits.empty()) return std::nullopt;
  long long exponent = 0;
  if (i < tok.size()) {
    auto e = parse_int(tok.substr(i + 1));
    if (!e || *e > 30 || *e < -30) return std::nullopt;
    exponent = *e;
  }
  // Trailing zeros after the point carry no precision.
  while (frac > 0 && digits.back() == '0') {
    digits.pop_back();
    --frac;
  }
  mpz_class mantissa(digits.empty() ? "0" : digits, 10);
  const long long scale = exponent - frac;
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(std::llabs(scale)));
  Decimal d;
  d.value = scale >= 0 ? mpq_class(mantissa * pow10) : mpq_class(mantissa, pow10);
  d.value.canonicalize();
  if (neg) d.value = -d.value;
  d.decimals = scale < 0 ? static_cast<int>(-scale) : 0;
  return d;
}

long long round_half_away(const mpq_class& q) {
  const mpz_class den = 2 * q.get_den();
  const mpz_class num = q >= 0 ? mpz_class(2 * q.get_num() + q.get_den())
                               : mpz_class(2 * q.get_num() - q.get_den());
  mpz_class r;
  mpz_tdiv_q(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (!r.fits_slong_p()) throw Error("coordinate out of range");
  return r.get_si();
}

Point checked_point(long long x, long long y, int line) {
  if (std::llabs(x) > kMaxCoordinate || std::llabs(y) > kMaxCoordinate)
    throw ParseError("coordinate out of range", line);
  return Point{static_cast<std::int32_t>(x), static_cast<std::int32_t>(y)};
}

void add_unique(std::vector<Point>& pts, std::set<Point>& seen, Point p,
                int line) {
  if (!seen.insert(p).second) throw ParseError("duplicate point", line);
  pts.push_back(p);
}

Instance parse_tsplib(const std::vector<std::string_view>& lines,
                      std::string name) {
  std::size_t i = 0;
  for (; i < lines.size(); ++i) {
    std::string_view line = trim(lines[i]);
    if (line.starts_with("NODE_COORD_SECTION")) break;
    const std::size_t colon = line.find(':');
    if (colon != std::string_view::npos &&
        trim(line.substr(0, colon)) == "NAME") {
      name = std::string(trim(line.substr(colon + 1)));
    }
  }
  struct Raw {
    Decimal x, y;
    int line;
  };
  std::vector<Raw> raw;
  int decimals = 0;
  for (++i; i < lines.size(); ++i) {
    std::string_view line = trim(lines[i]);
    const int lineno = static_cast<int>(i) + 1;
    if (line.empty()) continue;
    if (line == "EOF") break;
    auto toks = split_ws(line);
    if (toks.size() != 3 || !parse_int(toks[0])) {
      if (std::isalpha(static_cast<unsigned char>(line[0]))) break;
      throw ParseError("malformed node line", lineno);
    }
    auto x = parse_decimal(toks[1]);
    auto y = parse_decimal(toks[2]);
    if (!x || !y) throw ParseError("malformed coordinate", lineno);
    decimals = std::max({decimals, x->decimals, y->decimals});
    raw.push_back(Raw{*x, *y, lineno});
  }
  decimals = std::min(decimals, 4);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(decimals));
  std::vector<Point> pts;
  std::set<Point> seen;
  for (const Raw& r : raw) {
    const long long x = round_half_away(r.x.value * scale);
    const long long y = round_half_away(r.y.value * scale);
    add_unique(pts, seen, checked_point(x, y, r.line), r.line);
  }
  if (pts.empty()) throw ParseError("no coordinates in NODE_COORD_SECTION", 0);
  if (decimals > 0) name += "_x1e" + std::to_string(decimals);
  return Instance(std::move(name), std::move(pts));
}

Instance parse_native(const std::vector<std::string_view>& lines,
                      std::string name) {
  std::optional<long long> count;
  std::vector<Point> pts;
  std::set<Point> seen;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const int lineno = static_cast<int>(i) + 1;
    std::string_view line = lines[i];
    if (line.starts_with('#')) {
      std::string_view body = trim(line.substr(1));
      if (body.starts_with("name:") && !count)
        name = std::string(trim(body.substr(5)));
      continue;
    }
    if (trim(line).empty()) {
      if (i + 1 == lines.size()) break;
      throw ParseError("blank line", lineno);
    }
    auto toks = split_ws(line);
    if (!count) {
      if (toks.size() != 1) throw ParseError("expected point count", lineno);
      count = parse_int(toks[0]);
      if (!count || *count < 1) throw ParseError("invalid point count", lineno);
      continue;
    }
    if (static_cast<long long>(pts.size()) == *count)
      throw ParseError("more points than declared", lineno);
    if (toks.size() != 2) throw ParseError("expected \"x y\"", lineno);
    auto x = parse_int(toks[0]);
    auto y = parse_int(toks[1]);
    if (!x || !y) throw ParseError("malformed coordinate", lineno);
    add_unique(pts, seen, checked_point(*x, *y, lineno), lineno);
  }
  if (!count) throw ParseError("missing point count", 0);
  if (static_cast<long long>(pts.size()) != *count) {
    throw ParseError("expected " + std::to_string(*count) + " points, found " +
                         std::to_string(pts.size()),
                     static_cast<int>(lines.size()));
  }
  return Instance(std::move(name), std::move(pts));
}

/// Unbiased draw from [0, bound) on top of mt19937_64, independent of the
/// standard library's distribution implementations.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

std::string rational_text(const mpq_class& q) {
  return q.get_den() == 1 ? q.get_num().get_str() : q.get_str();
}

}  // namespace

Instance::Instance(std::string name, std::vector<Point> points)
    : name_(std::move(name)), points_(std::move(points)) {
  if (points_.empty()) throw Error("empty instance");
  std::set<Point> seen;
  for (const Point& p : points_) {
    if (std::abs(p.x) > kMaxCoordinate || std::abs(p.y) > kMaxCoordinate)
      throw Error("coordinate out of range");
    if (!seen.insert(p).second) {
      throw Error("duplicate point (" + std::to_string(p.x) + "," +
                  std::to_string(p.y) + ")");
    }
  }
}

Instance Instance::drop_last() const {
  if (points_.size() < 2) throw Error("cannot drop the only point");
  return Instance(name_ + "-dropped",
                  std::vector<Point>(points_.begin(), points_.end() - 1));
}

Instance parse_instance(std::string_view text, std::string default_name) {
  const auto lines = split_lines(text);
  if (text.find("NODE_COORD_SECTION") != std::string_view::npos)
    return parse_tsplib(lines, std::move(default_name));
  return parse_native(lines, std::move(default_name));
}

std::string serialize_instance(const Instance& inst) {
  std::string out = "# name: " + inst.name() + "\n";
  out += std::to_string(inst.size()) + "\n";
  for (const Point& p : inst.points())
    out += std::to_string(p.x) + " " + std::to_string(p.y) + "\n";
  return out;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string stem = path;
  if (auto slash = stem.find_last_of('/'); slash != std::string::npos)
    stem = stem.substr(slash + 1);
  if (auto dot = stem.find_last_of('.'); dot != std::string::npos && dot > 0)
    stem = stem.substr(0, dot);
  return parse_instance(buf.str(), stem);
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << serialize_instance(inst);
}

Instance gen_random(int n, std::int64_t bbox, std::uint64_t seed) {
  if (n < 1) throw Error("gen_random: n must be positive");
  if (bbox < 0 || bbox > kMaxCoordinate)
    throw Error("gen_random: bbox out of range");
  if (bbox < n - 1) {
    throw Error("gen_random: cannot place " + std::to_string(n) +
                " distinct points in bbox " + std::to_string(bbox) +
                " (need bbox >= n - 1)");
  }
  std::mt19937_64 rng(seed);
  std::set<Point> seen;
  std::vector<Point> pts;
  const auto side = static_cast<std::uint64_t>(bbox) + 1;
  while (static_cast<int>(pts.size()) < n) {
    const Point p{static_cast<std::int32_t>(draw_below(rng, side)),
                  static_cast<std::int32_t>(draw_below(rng, side))};
    if (seen.insert(p).second) pts.push_back(p);
  }
  return Instance("random-n" + std::to_string(n) + "-b" + std::to_string(bbox) +
                      "-s" + std::to_string(seed),
                  std::move(pts));
}

Instance gen_grid(int rows, int cols, const mpq_class& keep_fraction,
                  std::uint64_t seed) {
  if (rows < 1 || cols < 1) throw Error("gen_grid: empty grid");
  if (keep_fraction <= 0 || keep_fraction > 1)
    throw Error("gen_grid: keep fraction must lie in (0, 1]");
  if (rows > kMaxCoordinate || cols > kMaxCoordinate ||
      static_cast<long long>(rows) * cols > 10'000'000)
    throw Error("gen_grid: grid too large");
  const int total = rows * cols;
  mpz_class keep_z;
  mpq_class target = keep_fraction * total;
  mpz_fdiv_q(keep_z.get_mpz_t(), target.get_num_mpz_t(), target.get_den_mpz_t());
  const int keep = static_cast<int>(keep_z.get_si());
  if (keep < 1) throw Error("gen_grid: no points left after removal");

  std::vector<int> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: the first total - keep slots are removed.
  const int removed = total - keep;
  for (int i = 0; i < removed; ++i) {
    const int j = i + static_cast<int>(draw_below(rng, total - i));
    std::swap(order[i], order[j]);
  }
  std::vector<char> gone(total, 0);
  for (int i = 0; i < removed; ++i) gone[order[i]] = 1;
  std::vector<Point> pts;
  for (int idx = 0; idx < total; ++idx) {
    if (gone[idx]) continue;
    pts.push_back(Point{idx % cols, idx / cols});
  }
  return Instance("grid-" + std::to_string(rows) + "x" + std::to_string(cols) +
                      "-k" + rational_text(keep_fraction) + "-s" +
                      std::to_string(seed),
                  std::move(pts));
}

std::string to_string(Problem p) {
  switch (p) {
    case Problem::Matching: return "matching";
    case Problem::SpanningTree: return "tree";
    case Problem::Triangulation: return "triangulation";
  }
  return "?";
}

std::string to_string(Method m) {
  switch (m) {
    case Method::LpBound: return "lp_bound";
    case Method::Rounding: return "rounding";
    case Method::Exact: return "exact";
    case Method::Brute: return "brute";
    case Method::MinLength: return "min_length";
  }
  return "?";
}

Problem parse_problem(std::string_view s) {
  if (s == "matching") return Problem::Matching;
  if (s == "tree") return Problem::SpanningTree;
  if (s == "triangulation") return Problem::Triangulation;
  throw Error("unknown problem '" + std::string(s) + "'");
}

LineFamily parse_family(std::string_view s) {
  if (s == "axis") return LineFamily::AxisParallel;
  if (s == "general") return LineFamily::General;
  throw Error("unknown line family '" + std::string(s) + "'");
}

Method parse_method(std::string_view s) {
  for (Method m : {Method::LpBound, Method::Rounding, Method::Exact,
                   Method::Brute, Method::MinLength}) {
    if (to_string(m) == s) return m;
  }
  throw Error("unknown method '" + std::string(s) + "'");
}

bool is_perfect_matching(const EdgeSet& edges, int n) {
  if (n % 2 != 0 || static_cast<int>(edges.size()) * 2 != n) return false;
  std::vector<int> degree(n, 0);
  for (const Segment& e : edges) {
    if (e.a < 0 || e.b >= n || e.a >= e.b) return false;
    if (++degree[e.a] > 1 || ++degree[e.b] > 1) return false;
  }
  return true;
}

bool is_spanning_tree(const EdgeSet& edges, int n) {
  if (static_cast<int>(edges.size()) != n - 1) return false;
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const Segment& e : edges) {
    if (e.a < 0 || e.b >= n || e.a >= e.b) return false;
    const int ra = find(e.a), rb = find(e.b);
    if (ra == rb) return false;
    parent[ra] = rb;
  }
  return true;
}

bool is_triangulation(const EdgeSet& edges, PointSpan pts) {
  const int n = static_cast<int>(pts.size());
  std::set<Segment> chosen;
  for (const Segment& e : edges) {
    if (e.a < 0 || e.b >= n || e.a >= e.b) return false;
    if (!chosen.insert(e).second) return false;
  }
  const EdgeSet candidates = empty_segments(pts);
  const std::set<Segment> allowed(candidates.begin(), candidates.end());
  for (const Segment& e : edges) {
    if (!allowed.count(e)) return false;
    for (const Segment& f : edges)
      if (segments_conflict(e, f, pts)) return false;
  }
  for (const Segment& c : candidates) {
    if (chosen.count(c)) continue;
    bool blocked = false;
    for (const Segment& e : edges) {
      if (segments_conflict(c, e, pts)) {
        blocked = true;
        break;
      }
    }
    if (!blocked) return false;
  }
  return !edges.empty();
}

bool is_feasible(Problem problem, const EdgeSet& edges, PointSpan pts) {
  const int n = static_cast<int>(pts.size());
  switch (problem) {
    case Problem::Matching: return is_perfect_matching(edges, n);
    case Problem::SpanningTree: return is_spanning_tree(edges, n);
    case Problem::Triangulation: return is_triangulation(edges, pts);
  }
  return false;
}

}  // namespace stab
