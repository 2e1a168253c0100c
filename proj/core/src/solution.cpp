#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "stab/error.hpp"
#include "stab/instance.hpp"

namespace stab {
namespace {

std::string rational_string(const mpq_class& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

mpq_class parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  try {
    mpq_class q;
    if (slash == std::string::npos) {
      q = mpq_class(mpz_class(s, 10));
    } else {
      mpz_class num(s.substr(0, slash), 10);
      mpz_class den(s.substr(slash + 1), 10);
      if (den == 0) throw Error("zero denominator");
      q = mpq_class(num, den);
    }
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw ParseError("malformed rational '" + s + "'", 0);
  }
}

}  // namespace

Solution make_solution(Problem problem, LineFamily family, EdgeSet edges,
                       PointSpan pts, Method method,
                       std::optional<mpq_class> lower_bound) {
  std::sort(edges.begin(), edges.end());
  Solution sol;
  sol.problem = problem;
  sol.family = family;
  sol.k = stabbing_number(edges, pts, family).k;
  sol.edges = std::move(edges);
  sol.lower_bound = std::move(lower_bound);
  sol.method = method;
  return sol;
}

std::string solution_to_json(const Solution& sol) {
  nlohmann::ordered_json doc;
  doc["problem"] = to_string(sol.problem);
  doc["family"] = to_string(sol.family);
  doc["k"] = sol.k;
  if (sol.lower_bound)
    doc["lower_bound"] = rational_string(*sol.lower_bound);
  else
    doc["lower_bound"] = nullptr;
  doc["method"] = to_string(sol.method);
  EdgeSet edges = sol.edges;
  std::sort(edges.begin(), edges.end());
  auto arr = nlohmann::ordered_json::array();
  for (const Segment& e : edges) arr.push_back({e.a, e.b});
  doc["edges"] = std::move(arr);
  return doc.dump() + "\n";
}

Solution solution_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("solution JSON: ") + e.what(), 0);
  }
  try {
    Solution sol;
    sol.problem = parse_problem(doc.at("problem").get<std::string>());
    sol.family = parse_family(doc.at("family").get<std::string>());
    sol.k = doc.at("k").get<int>();
    const auto& lb = doc.at("lower_bound");
    if (!lb.is_null()) sol.lower_bound = parse_rational(lb.get<std::string>());
    sol.method = parse_method(doc.at("method").get<std::string>());
    for (const auto& pair : doc.at("edges")) {
      if (!pair.is_array() || pair.size() != 2)
        throw ParseError("edge entries must be [i, j] pairs", 0);
      sol.edges.push_back(
          Segment::make(pair[0].get<int>(), pair[1].get<int>()));
    }
    return sol;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("solution JSON: ") + e.what(), 0);
  }
}

mpq_class rational_approx(double value, long max_den) {
  if (!std::isfinite(value)) throw Error("cannot approximate non-finite value");
  // Continued-fraction convergents, stopping before the denominator bound.
  const bool neg = value < 0;
  double x = std::fabs(value);
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(x);
    const mpz_class az(a);
    const mpz_class p2 = az * p1 + p0;
    const mpz_class q2 = az * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = x - a;
    if (frac < 1e-12) break;
    x = 1.0 / frac;
  }
  if (q1 == 0) return mpq_class(0);
  mpq_class q(neg ? mpz_class(-p1) : p1, q1);
  q.canonicalize();
  return q;
}

}  // namespace stab
