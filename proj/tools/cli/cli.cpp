#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "stab/error.hpp"
#include "stab/geom.hpp"
#include "stab/instance.hpp"
#include "stab/models.hpp"
#include "stab/oracle.hpp"
#include "stab/render.hpp"
#include "stab/solve.hpp"

namespace stab::cli {
namespace {

// Bad arguments, unreadable inputs, or malformed files: exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string instance_path;
  std::string problem = "matching";
  std::string family = "axis";
  bool drop_last = false;
  std::string output;
};

std::string format_double(double v, int digits = 9) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& text, const std::string& path,
                std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot write '" + path + "'");
  file << text;
}

Instance load(const Common& c) {
  Instance inst = [&] {
    try {
      return load_instance(c.instance_path);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }();
  if (c.drop_last) {
    if (inst.size() < 2) throw UsageError("--drop-last needs at least two points");
    inst = inst.drop_last();
  }
  return inst;
}

Solution load_solution(const std::string& path) {
  try {
    return solution_from_json(read_file(path));
  } catch (const Error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

Problem problem_of(const Common& c) { return parse_problem(c.problem); }
LineFamily family_of(const Common& c) { return parse_family(c.family); }

// LP-based commands accept matchings and trees only.
Problem lp_problem(const Common& c, const Instance& inst) {
  const Problem p = problem_of(c);
  if (p == Problem::Triangulation)
    throw UsageError("--problem triangulation is only valid for eval and oracle");
  if (p == Problem::Matching && inst.size() % 2 != 0)
    throw UsageError("matching needs an even number of points (" +
                     std::to_string(inst.size()) + " given); use --drop-last");
  if (inst.size() < 2) throw UsageError("need at least two points");
  return p;
}

void add_instance(CLI::App* cmd, Common& c) {
  cmd->add_option("instance", c.instance_path, "Instance file")->required();
  cmd->add_flag("--drop-last", c.drop_last,
                "Omit the last point (odd-n matching instances)");
}

void add_problem(CLI::App* cmd, Common& c, bool allow_triangulation) {
  std::vector<std::string> problems{"matching", "tree"};
  if (allow_triangulation) problems.push_back("triangulation");
  cmd->add_option("--problem", c.problem, "Structure to optimize")
      ->check(CLI::IsMember(problems))
      ->capture_default_str();
  cmd->add_option("--family", c.family, "Line family")
      ->check(CLI::IsMember({"axis", "general"}))
      ->capture_default_str();
}

void add_output(CLI::App* cmd, Common& c, const std::string& what) {
  cmd->add_option("-o,--output", c.output, what);
}

// Solution JSON goes to -o when given (report lines then stay on stdout);
// otherwise JSON is stdout and the report moves to stderr.
void emit_solution(const Solution& sol, const std::string& report,
                   const Common& c, std::ostream& out, std::ostream& err) {
  const std::string json = solution_to_json(sol);
  if (c.output.empty()) {
    out << json;
    err << report;
  } else {
    write_text(json, c.output, out);
    out << report;
  }
}

std::string bound_text(const std::optional<mpq_class>& q) {
  return q ? q->get_str() : "none";
}

// ---- gen -------------------------------------------------------------------

struct GenArgs {
  int random = 0;
  std::int64_t bbox = 100;
  std::string grid;
  std::string keep = "1";
  std::uint64_t seed = 0;
  std::string output;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  Instance inst = [&] {
    if (a.random > 0 && !a.grid.empty())
      throw UsageError("give either --random or --grid");
    try {
      if (a.random > 0) return gen_random(a.random, a.bbox, a.seed);
      if (a.grid.empty()) throw UsageError("give --random N or --grid RxC");
      int rows = 0, cols = 0;
      char x = 0;
      std::istringstream ss(a.grid);
      if (!(ss >> rows >> x >> cols) || (x != 'x' && x != 'X') || !ss.eof())
        throw UsageError("--grid expects RxC, e.g. 3x4");
      mpq_class keep;
      if (keep.set_str(a.keep, 10) != 0) throw UsageError("--keep expects p/q");
      keep.canonicalize();
      return gen_grid(rows, cols, keep, a.seed);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }();
  write_text(serialize_instance(inst), a.output, out);
  return kExitOk;
}

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
  Common c;
  std::string edges;
  std::string objective = "stabbing";
  bool family_given = false;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const Instance inst = load(a.c);
  const Solution sol = load_solution(a.edges);
  try {
    check_edges(sol.edges, inst.points().size());
  } catch (const Error& e) {
    throw UsageError(std::string("solution does not fit the instance: ") + e.what());
  }
  const LineFamily family = a.family_given ? family_of(a.c) : sol.family;
  const Objective objective = parse_objective(a.objective);
  const ObjectiveValue v = evaluate_objective(sol.edges, inst.points(), family, objective);
  const bool feasible = is_feasible(sol.problem, sol.edges, inst.points());

  out << "instance=" << inst.name() << "\n";
  out << "problem=" << to_string(sol.problem) << "\n";
  out << "family=" << to_string(family) << "\n";
  out << "objective=" << to_string(objective) << "\n";
  out << "value=" << (v.exact ? v.exact->get_str() : format_double(v.value)) << "\n";
  out << "stored_k=" << sol.k << "\n";
  out << "feasible=" << (feasible ? "true" : "false") << "\n";
  bool match = true;
  if (objective == Objective::Stabbing || objective == Objective::Crossing) {
    match = v.exact && *v.exact == sol.k;
    out << "match=" << (match ? "true" : "false") << "\n";
  }
  return objective == Objective::Stabbing && !match ? kExitSolver : kExitOk;
}

// ---- bound -----------------------------------------------------------------

struct BoundArgs {
  Common c;
  bool exact_check = false;
  bool refine = false;
};

int cmd_bound(const BoundArgs& a, std::ostream& out) {
  const Instance inst = load(a.c);
  const Problem problem = lp_problem(a.c, inst);
  const LineFamily family = family_of(a.c);
  StabModel model = build_model(inst, problem, family);
  const RelaxationResult r = solve_relaxation(model);

  out << "instance=" << inst.name() << "\n";
  out << "problem=" << to_string(problem) << "\n";
  out << "family=" << to_string(family) << "\n";
  out << "k_frac=" << format_double(r.k_frac) << "\n";
  out << "k_frac_rational=" << rational_approx(r.k_frac).get_str() << "\n";
  out << "ceil_bound=" << static_cast<int>(std::ceil(r.k_frac - 1e-6)) << "\n";
  out << "cuts_added=" << r.cuts_added << "\n";
  out << "lp_iterations=" << r.lp_iterations << "\n";
  if (a.exact_check) {
    const ExactLpResult ex = certify_relaxation(model, r);
    if (ex.status != LpStatus::Optimal)
      throw LpError("exact re-check did not reach an optimum");
    const bool agree =
        std::fabs(ex.objective_value.get_d() - r.k_frac) <= 1e-6;
    out << "k_frac_exact=" << ex.objective_value.get_str() << "\n";
    out << "exact_agrees=" << (agree ? "true" : "false") << "\n";
    if (!agree) return kExitSolver;
  }
  if (a.refine) {
    const RelaxationResult rr = lexicographic_refine(model, r);
    const double heaviest = *std::max_element(rr.x.begin(), rr.x.end());
    const auto crossings = crossing_pairs(support_edges(rr.x, inst.size()), inst.points());
    out << "refined_max_weight=" << format_double(heaviest) << "\n";
    out << "refined_crossing_pairs=" << crossings.size() << "\n";
  }
  return kExitOk;
}

// ---- round / exact ---------------------------------------------------------

struct RoundArgs {
  Common c;
  bool exact_check = false;
  bool trace = false;
};

int cmd_round(const RoundArgs& a, std::ostream& out, std::ostream& err) {
  const Instance inst = load(a.c);
  const Problem problem = lp_problem(a.c, inst);
  const LineFamily family = family_of(a.c);
  RoundingTrace tr;
  RoundingOptions opt;
  opt.exact_check = a.exact_check;
  const Solution sol = iterated_rounding(inst, problem, family, opt, &tr);

  std::ostringstream rep;
  rep << "instance=" << inst.name() << "\n";
  rep << "k=" << sol.k << "\n";
  rep << "lower_bound=" << bound_text(sol.lower_bound) << "\n";
  rep << "iterations=" << tr.steps.size() << "\n";
  rep << "cuts_added=" << tr.cuts_added << "\n";
  if (a.trace) {
    for (std::size_t i = 0; i < tr.steps.size(); ++i) {
      const RoundingStep& s = tr.steps[i];
      rep << "step=" << i << " k_frac=" << format_double(s.k_frac, 6)
          << " max_free_weight=" << format_double(s.max_free_weight, 6)
          << " crossing_pairs=" << s.crossing_pairs
          << " fixed_edge=" << s.fixed_edge << "\n";
    }
  }
  emit_solution(sol, rep.str(), a.c, out, err);
  return kExitOk;
}

struct ExactArgs {
  Common c;
  std::int64_t time_limit = 0;
  bool depth_first = false;
  bool exact_check = false;
};

int cmd_exact(const ExactArgs& a, std::ostream& out, std::ostream& err) {
  const Instance inst = load(a.c);
  const Problem problem = lp_problem(a.c, inst);
  const LineFamily family = family_of(a.c);
  BnbOptions opt;
  opt.time_limit_ms = a.time_limit;
  opt.depth_first = a.depth_first;
  opt.exact_check = a.exact_check;
  BnbStats st;
  const Solution sol = branch_and_bound(inst, problem, family, opt, &st);

  std::ostringstream rep;
  rep << "instance=" << inst.name() << "\n";
  rep << "k=" << sol.k << "\n";
  rep << "proven=" << (sol.proven ? "true" : "false") << "\n";
  rep << "lower_bound=" << bound_text(sol.lower_bound) << "\n";
  rep << "rounding_k=" << st.rounding_k << "\n";
  rep << "nodes=" << st.nodes << "\n";
  rep << "cuts_added=" << st.cuts_added << "\n";
  emit_solution(sol, rep.str(), a.c, out, err);
  return kExitOk;
}

// ---- minlen ----------------------------------------------------------------

struct MinlenArgs {
  Common c;
  std::string metric;
};

int cmd_minlen(const MinlenArgs& a, std::ostream& out, std::ostream& err) {
  const Instance inst = load(a.c);
  const Problem problem = lp_problem(a.c, inst);
  const Metric metric =
      a.metric.empty() ? metric_for(family_of(a.c)) : parse_metric(a.metric);
  const Solution sol = problem == Problem::Matching ? min_length_matching(inst, metric)
                                                    : min_length_tree(inst, metric);
  const ObjectiveValue len = evaluate_objective(sol.edges, inst.points(),
                                                family_for(metric), Objective::Length);
  std::ostringstream rep;
  rep << "instance=" << inst.name() << "\n";
  rep << "metric=" << to_string(metric) << "\n";
  rep << "length=" << (len.exact ? len.exact->get_str() : format_double(len.value)) << "\n";
  rep << "k=" << sol.k << "\n";
  emit_solution(sol, rep.str(), a.c, out, err);
  return kExitOk;
}

// ---- render ----------------------------------------------------------------

struct RenderArgs {
  Common c;
  std::string edges;
  bool fractional = false;
};

int cmd_render(const RenderArgs& a, std::ostream& out) {
  const Instance inst = load(a.c);
  std::string svg;
  if (a.fractional) {
    if (!a.edges.empty()) throw UsageError("--fractional and --edges are exclusive");
    const Problem problem = lp_problem(a.c, inst);
    StabModel model = build_model(inst, problem, family_of(a.c));
    const RelaxationResult r = solve_relaxation(model);
    const RelaxationResult rr = lexicographic_refine(model, r);
    svg = render_svg_fractional(inst, rr.x, r.k_frac);
  } else if (!a.edges.empty()) {
    const Solution sol = load_solution(a.edges);
    try {
      svg = render_svg(inst, sol);
    } catch (const Error& e) {
      throw UsageError(std::string("solution does not fit the instance: ") + e.what());
    }
  } else {
    svg = render_svg_points(inst);
  }
  write_text(svg, a.c.output, out);
  return kExitOk;
}

// ---- oracle ----------------------------------------------------------------

struct OracleArgs {
  Common c;
  std::string objective = "stabbing";
  std::uint64_t max_structures = EnumBudget{}.max_structures;
};

int cmd_oracle(const OracleArgs& a, std::ostream& out, std::ostream& err) {
  const Instance inst = load(a.c);
  const Problem problem = problem_of(a.c);
  const LineFamily family = family_of(a.c);
  if (problem == Problem::Matching && inst.size() % 2 != 0)
    throw UsageError("matching needs an even number of points; use --drop-last");
  const Objective objective = parse_objective(a.objective);
  EnumBudget budget;
  budget.max_structures = a.max_structures;
  const BruteResult best = brute_optimum(inst, problem, family, objective, budget);

  std::ostringstream rep;
  rep << "instance=" << inst.name() << "\n";
  rep << "problem=" << to_string(problem) << "\n";
  rep << "family=" << to_string(family) << "\n";
  rep << "objective=" << to_string(objective) << "\n";
  rep << "value=" << (best.exact ? best.exact->get_str() : format_double(best.value)) << "\n";
  rep << "optima=" << best.argmin.size() << "\n";
  rep << "structures=" << best.structures << "\n";
  const Solution sol = make_solution(problem, family, best.argmin.front(),
                                     inst.points(), Method::Brute);
  emit_solution(sol, rep.str(), a.c, out, err);
  return kExitOk;
}

// ---- report ----------------------------------------------------------------

struct ReportArgs {
  Common c;
  std::int64_t time_limit = 0;
  bool exact_check = false;
  bool no_timing = false;
};

int cmd_report(const ReportArgs& a, std::ostream& out) {
  const Instance inst = load(a.c);
  const Problem problem = lp_problem(a.c, inst);
  const LineFamily family = family_of(a.c);
  using Clock = std::chrono::steady_clock;
  auto ms_since = [](Clock::time_point t) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
  };

  auto t0 = Clock::now();
  StabModel model = build_model(inst, problem, family);
  const RelaxationResult r = solve_relaxation(model);
  std::optional<mpq_class> exact_bound;
  if (a.exact_check) {
    const ExactLpResult ex = certify_relaxation(model, r);
    if (ex.status != LpStatus::Optimal)
      throw LpError("exact re-check did not reach an optimum");
    exact_bound = ex.objective_value;
  }
  const double t_bound = ms_since(t0);

  t0 = Clock::now();
  RoundingTrace tr;
  const Solution rounded = iterated_rounding(inst, problem, family, {}, &tr);
  const double t_round = ms_since(t0);

  t0 = Clock::now();
  BnbOptions opt;
  opt.time_limit_ms = a.time_limit;
  BnbStats st;
  const Solution exact = branch_and_bound(inst, problem, family, opt, &st);
  const double t_exact = ms_since(t0);

  const int ceil_bound = static_cast<int>(std::ceil(r.k_frac - 1e-6));
  // Without a proof only the LP bound is a valid denominator.
  const int denom = exact.proven ? std::max(exact.k, ceil_bound) : ceil_bound;
  const double ratio = denom > 0 ? static_cast<double>(rounded.k) / denom : 1.0;

  out << "instance=" << inst.name() << "\n";
  out << "problem=" << to_string(problem) << "\n";
  out << "family=" << to_string(family) << "\n";
  out << "k_frac=" << format_double(r.k_frac) << "\n";
  if (exact_bound) out << "k_frac_exact=" << exact_bound->get_str() << "\n";
  out << "ceil_bound=" << ceil_bound << "\n";
  out << "k_rounding=" << rounded.k << "\n";
  out << "k_exact=" << (exact.proven ? std::to_string(exact.k) : "not proven") << "\n";
  out << "ratio=" << format_double(ratio, 6) << "\n";
  out << "cuts_added=" << r.cuts_added + tr.cuts_added + st.cuts_added << "\n";
  out << "bnb_nodes=" << st.nodes << "\n";
  if (!a.no_timing) {
    out << "time_bound_ms=" << format_double(t_bound, 3) << "\n";
    out << "time_rounding_ms=" << format_double(t_round, 3) << "\n";
    out << "time_exact_ms=" << format_double(t_exact, 3) << "\n";
  }
  if (!a.c.output.empty()) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(a.c.output, ec);
    if (ec) throw UsageError("cannot create directory '" + a.c.output + "'");
    write_text(solution_to_json(rounded), (fs::path(a.c.output) / "round.json").string(), out);
    write_text(solution_to_json(exact), (fs::path(a.c.output) / "exact.json").string(), out);
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Minimum stabbing number matchings and spanning trees", "stabnum"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "stabnum 0.3.0");

  GenArgs gen;
  auto* c_gen = app.add_subcommand("gen", "Generate an instance");
  c_gen->add_option("--random", gen.random, "Number of uniform random points");
  c_gen->add_option("--bbox", gen.bbox, "Coordinates lie in [0, bbox]")->capture_default_str();
  c_gen->add_option("--grid", gen.grid, "Grid shape RxC");
  c_gen->add_option("--keep", gen.keep, "Fraction p/q of grid points kept")->capture_default_str();
  c_gen->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  c_gen->add_option("-o,--output", gen.output, "Instance file (default stdout)");

  EvalArgs ev;
  auto* c_eval = app.add_subcommand("eval", "Evaluate a stored solution");
  add_instance(c_eval, ev.c);
  c_eval->add_option("--edges", ev.edges, "Solution JSON")->required();
  c_eval->add_option("--objective", ev.objective, "stabbing|crossing|average|length")
      ->check(CLI::IsMember({"stabbing", "crossing", "average", "length"}))
      ->capture_default_str();
  auto* fam_opt = c_eval->add_option("--family", ev.c.family, "Override the stored family")
                      ->check(CLI::IsMember({"axis", "general"}));

  BoundArgs bd;
  auto* c_bound = app.add_subcommand("bound", "Solve the LP relaxation");
  add_instance(c_bound, bd.c);
  add_problem(c_bound, bd.c, false);
  c_bound->add_flag("--exact-check", bd.exact_check, "Re-solve in rational arithmetic");
  c_bound->add_flag("--refine", bd.refine, "Also run the length phase");

  RoundArgs rd;
  auto* c_round = app.add_subcommand("round", "Iterated rounding");
  add_instance(c_round, rd.c);
  add_problem(c_round, rd.c, false);
  add_output(c_round, rd.c, "Solution JSON");
  c_round->add_flag("--exact-check", rd.exact_check, "Exact root bound");
  c_round->add_flag("--trace", rd.trace, "Print one line per iteration");

  ExactArgs ex;
  auto* c_exact = app.add_subcommand("exact", "Branch and bound");
  add_instance(c_exact, ex.c);
  add_problem(c_exact, ex.c, false);
  add_output(c_exact, ex.c, "Solution JSON");
  c_exact->add_option("--time-limit", ex.time_limit, "Milliseconds, 0 = none")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  c_exact->add_flag("--depth-first", ex.depth_first, "Depth-first node order");
  c_exact->add_flag("--exact-check", ex.exact_check, "Exact root bound");

  MinlenArgs ml;
  auto* c_minlen = app.add_subcommand("minlen", "Minimum length matching or tree");
  add_instance(c_minlen, ml.c);
  add_problem(c_minlen, ml.c, false);
  add_output(c_minlen, ml.c, "Solution JSON");
  c_minlen->add_option("--metric", ml.metric, "euclidean|manhattan (default from family)")
      ->check(CLI::IsMember({"euclidean", "manhattan"}));

  RenderArgs rn;
  auto* c_render = app.add_subcommand("render", "SVG drawing");
  add_instance(c_render, rn.c);
  add_problem(c_render, rn.c, false);
  add_output(c_render, rn.c, "SVG file (default stdout)");
  c_render->add_option("--edges", rn.edges, "Solution JSON to draw");
  c_render->add_flag("--fractional", rn.fractional, "Draw the refined LP optimum");

  OracleArgs orc;
  auto* c_oracle = app.add_subcommand("oracle", "Brute-force optimum");
  add_instance(c_oracle, orc.c);
  add_problem(c_oracle, orc.c, true);
  add_output(c_oracle, orc.c, "Solution JSON of the first optimum");
  c_oracle->add_option("--objective", orc.objective, "stabbing|crossing|average|length")
      ->check(CLI::IsMember({"stabbing", "crossing", "average", "length"}))
      ->capture_default_str();
  c_oracle->add_option("--max-structures", orc.max_structures, "Enumeration cap, 0 = none")
      ->capture_default_str();

  ReportArgs rp;
  auto* c_report = app.add_subcommand("report", "Bound, rounding and exact in one run");
  add_instance(c_report, rp.c);
  add_problem(c_report, rp.c, false);
  c_report->add_option("-o,--output", rp.c.output, "Directory for round.json and exact.json");
  c_report->add_option("--time-limit", rp.time_limit, "Branch and bound limit in ms")
      ->check(CLI::NonNegativeNumber);
  c_report->add_flag("--exact-check", rp.exact_check, "Exact LP value");
  c_report->add_flag("--no-timing", rp.no_timing, "Omit wall times");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c_gen->parsed()) return cmd_gen(gen, out);
    if (c_eval->parsed()) {
      ev.family_given = fam_opt->count() > 0;
      return cmd_eval(ev, out);
    }
    if (c_bound->parsed()) return cmd_bound(bd, out);
    if (c_round->parsed()) return cmd_round(rd, out, err);
    if (c_exact->parsed()) return cmd_exact(ex, out, err);
    if (c_minlen->parsed()) return cmd_minlen(ml, out, err);
    if (c_render->parsed()) return cmd_render(rn, out);
    if (c_oracle->parsed()) return cmd_oracle(orc, out, err);
    if (c_report->parsed()) return cmd_report(rp, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitUsage;
}

}  // namespace stab::cli
