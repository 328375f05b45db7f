// cube: command-line front end for the lambda-cube kernel.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "lcube/reductions.hpp"
#include "lcube/search.hpp"
#include "lcube/surface.hpp"

namespace {

using nlohmann::ordered_json;
using namespace lcube;

enum class Outcome { Yes = 0, No = 1, Error = 2 };

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Yes: return "yes";
    case Outcome::No: return "no";
    case Outcome::Error: return "error";
  }
  return "error";
}

struct Options {
  std::string calculus;
  std::size_t fuel = Fuel{}.max_steps;
  std::string format = "text";
};

// A failure that maps to exit code 2.
struct CommandError {
  std::string message;
  ordered_json extra = ordered_json::object();
};

struct Report {
  Outcome outcome = Outcome::Yes;
  std::string text;
  ordered_json details = ordered_json::object();
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CommandError{"cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CommandError{"cannot write '" + path + "'"};
  out << content;
}

std::optional<CubeSpec> calculus_override(const Options& opt) {
  if (opt.calculus.empty()) return std::nullopt;
  if (auto spec = CubeSpec::preset(opt.calculus)) return spec;
  // Comma separated pair codes, e.g. PP,PT.
  std::vector<SortPair> pairs;
  std::stringstream ss(opt.calculus);
  std::string code;
  bool has_pp = false;
  while (std::getline(ss, code, ',')) {
    auto pair = parse_sort_pair(code);
    if (!pair) throw CommandError{"unknown calculus '" + opt.calculus + "'"};
    has_pp = has_pp || *pair == kPropProp;
    pairs.push_back(*pair);
  }
  if (!has_pp) throw CommandError{"custom calculus must contain PP"};
  return CubeSpec::custom(pairs);
}

Fuel fuel_of(const Options& opt) { return Fuel{opt.fuel}; }

ProblemFile load_problem(const std::string& path, const Options& opt) {
  std::string text = read_file(path);
  try {
    return parse_problem(text, fuel_of(opt), calculus_override(opt));
  } catch (const ParseError& e) {
    CommandError err{path + ":" + e.what()};
    err.extra["line"] = e.span().line;
    err.extra["column"] = e.span().column;
    if (e.missing_pair()) err.extra["missing_pair"] = to_string(*e.missing_pair());
    throw err;
  }
}

ordered_json problem_json(const ProblemFile& f) {
  ordered_json j;
  j["calculus"] = f.spec.display_name();
  j["kind"] = std::string(to_string(f.problem.kind));
  std::vector<std::string> names = display_names(f.problem.qctx);
  j["type"] = print_term(f.problem.type, names);
  return j;
}

Report cmd_check(const std::string& path, const Options& opt) {
  ProblemFile f = load_problem(path, opt);
  Report r;
  r.details = problem_json(f);
  r.text = "well typed in " + f.spec.display_name() + ": " + std::string(to_string(f.problem.kind)) +
           " problem at type " + r.details["type"].get<std::string>() + "\n";
  return r;
}

Report cmd_normalize(const std::string& path, const std::string& term, const Options& opt) {
  Report r;
  if (!term.empty()) {
    std::vector<std::string> scope;
    if (!path.empty()) scope = display_names(load_problem(path, opt).problem.qctx);
    Term t = [&] {
      try {
        return parse_term(term, scope);
      } catch (const ParseError& e) {
        throw CommandError{std::string("--term:") + e.what()};
      }
    }();
    std::string nf = print_term(normalize(t, fuel_of(opt)), scope);
    r.details["normal_form"] = nf;
    r.text = nf + "\n";
    return r;
  }
  ProblemFile f = load_problem(path, opt);
  std::vector<std::string> names = display_names(f.problem.qctx);
  Term a = normalize(f.problem.lhs, fuel_of(opt));
  Term b = normalize(f.problem.rhs, fuel_of(opt));
  r.details["lhs"] = print_term(a, names);
  r.details["rhs"] = print_term(b, names);
  r.details["equivalent"] = a == b;
  r.text = r.details["lhs"].get<std::string>() + "\n" + r.details["rhs"].get<std::string>() + "\n";
  return r;
}

Report cmd_order(const std::string& path, const std::string& var, const Options& opt) {
  ProblemFile f = load_problem(path, opt);
  const QContext& q = f.problem.qctx;
  auto pos = q.find(var);
  if (!pos) throw CommandError{"'" + var + "' is not declared in " + path};
  Order o = order(q[*pos].type, q.prefix(*pos), fuel_of(opt));
  Report r;
  r.details["variable"] = var;
  r.details["quantifier"] = q[*pos].quantifier == Quantifier::Forall ? "forall" : "exists";
  r.details["type"] = print_term(q[*pos].type, display_names(q.prefix(*pos)));
  r.details["order"] = o.to_string();
  r.text = o.to_string() + "\n";
  return r;
}

Report cmd_classify(const std::string& path, const Options& opt) {
  ProblemFile f = load_problem(path, opt);
  Report r;
  r.details = problem_json(f);
  bool term_elem = is_term_elementary(f.problem);
  ElementaryCheck type_elem = is_type_elementary(f.problem, f.spec);
  std::string max_order =
      f.problem.max_existential_order ? f.problem.max_existential_order->to_string() : "none";
  r.details["term_elementary"] = term_elem;
  r.details["type_elementary"] = type_elem.ok;
  if (!type_elem.ok) r.details["type_elementary_reason"] = type_elem.reason;
  r.details["max_existential_order"] = max_order;
  std::ostringstream os;
  os << "kind: " << to_string(f.problem.kind) << "\n"
     << "calculus: " << f.spec.display_name() << "\n"
     << "term-elementary: " << (term_elem ? "yes" : "no") << "\n"
     << "type-elementary: " << (type_elem.ok ? "yes" : "no" + (type_elem.reason.empty() ? "" : " (" + type_elem.reason + ")")) << "\n"
     << "max-existential-order: " << max_order << "\n";
  r.text = os.str();
  return r;
}

Report cmd_verify(const std::string& path, const std::string& subst_path, const Options& opt) {
  ProblemFile f = load_problem(path, opt);
  std::string text = read_file(subst_path);
  Substitution sigma = [&] {
    try {
      return parse_substitution(text, f.problem.qctx);
    } catch (const ParseError& e) {
      throw CommandError{subst_path + ":" + e.what()};
    }
  }();
  Report r;
  QContext image;
  try {
    image = subst_well_typed(sigma, f.problem.qctx, f.spec, fuel_of(opt));
  } catch (const SubstitutionError& e) {
    r.outcome = Outcome::No;
    r.details["well_typed"] = false;
    r.details["reason"] = e.what();
    r.text = "no: substitution is not well typed: " + std::string(e.what()) + "\n";
    return r;
  }
  std::vector<std::string> names = display_names(image);
  Term a = normalize(apply_subst(sigma, f.problem.qctx, f.problem.lhs), fuel_of(opt));
  Term b = normalize(apply_subst(sigma, f.problem.qctx, f.problem.rhs), fuel_of(opt));
  bool ok = is_solution(sigma, f.problem, f.spec, fuel_of(opt));
  r.outcome = ok ? Outcome::Yes : Outcome::No;
  r.details["well_typed"] = true;
  r.details["lhs"] = print_term(a, names);
  r.details["rhs"] = print_term(b, names);
  r.text = std::string(ok ? "yes" : "no") + ": " + r.details["lhs"].get<std::string>() +
           (ok ? " == " : " != ") + r.details["rhs"].get<std::string>() + "\n";
  return r;
}

Report cmd_build(const std::string& kind, const std::string& path, const std::string& out,
                 const Options& opt) {
  ProblemFile f = load_problem(path, opt);
  ReductionArtifact art = [&] {
    try {
      if (kind == "thm1") return build_thm1(f.problem, f.spec, fuel_of(opt));
      if (kind == "erratum") return build_erratum(f.problem, f.spec, fuel_of(opt));
      return build_thm2_invalid(f.problem, f.spec, fuel_of(opt));
    } catch (const ReductionError& e) {
      CommandError err{e.what()};
      if (!e.missing_pairs().empty()) {
        err.extra["missing_pairs"] = ordered_json::array();
        for (SortPair p : e.missing_pairs()) err.extra["missing_pairs"].push_back(to_string(p));
      }
      throw err;
    }
  }();
  std::string artifact = print_artifact(art);
  Report r;
  r.details["kind"] = std::string(to_string(art.kind));
  r.details["f_order"] = art.f_order.to_string();
  r.details["requires"] = ordered_json::array();
  for (SortPair p : art.requirements) r.details["requires"].push_back(short_name(p));
  r.details["invalid_per_erratum"] = art.invalid_per_erratum;
  if (out.empty()) {
    r.details["problem"] = artifact;
    r.text = artifact;
  } else {
    write_file(out, artifact);
    r.details["output"] = out;
    r.text = "wrote " + out + " (f-order " + art.f_order.to_string() + ")\n";
  }
  return r;
}

Report cmd_solve(const std::string& path, std::size_t size, std::size_t max_solutions,
                 const std::string& prefix, const Options& opt) {
  ProblemFile f = load_problem(path, opt);
  SearchResult res = solve_bounded(f.problem, {size, max_solutions}, f.spec, fuel_of(opt));
  Report r;
  r.outcome = res.solutions.empty() ? Outcome::No : Outcome::Yes;
  r.details["solutions"] = ordered_json::array();
  std::ostringstream os;
  for (std::size_t i = 0; i < res.solutions.size(); ++i) {
    std::string text = print_substitution(res.solutions[i], f.problem.qctx);
    r.details["solutions"].push_back(text);
    os << "# solution " << i + 1 << "\n" << text;
    if (!prefix.empty()) write_file(prefix + std::to_string(i + 1) + ".subst", text);
  }
  r.details["count"] = res.solutions.size();
  r.details["exhaustive"] = res.exhaustive;
  r.details["assignments_tried"] = res.assignments_tried;
  os << "# " << res.solutions.size() << " solution(s), "
     << (res.exhaustive ? "exhaustive" : "truncated") << " at size " << size << "\n";
  r.text = os.str();
  return r;
}

int emit(const std::string& command, const Options& opt, const Report& r) {
  if (opt.format == "json") {
    ordered_json j;
    j["command"] = command;
    j["outcome"] = outcome_name(r.outcome);
    j["details"] = r.details;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << r.text;
  }
  return static_cast<int>(r.outcome);
}

int emit_error(const std::string& command, const Options& opt, const CommandError& e) {
  if (opt.format == "json") {
    ordered_json j;
    j["command"] = command;
    j["outcome"] = "error";
    j["details"] = e.extra;
    j["details"]["message"] = e.message;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cerr << "error: " << e.message << "\n";
  }
  return static_cast<int>(Outcome::Error);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lambda-cube kernel, higher-order matching problems and reductions"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--calculus", opt.calculus,
                 "Override the file's calculus: a preset name or pair codes such as PP,PT");
  app.add_option("--fuel", opt.fuel, "Maximum number of beta steps per normalization")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}));

  std::string file, file2, term, var, kind, out, prefix;
  std::size_t size = 6, max_solutions = 64;

  auto* check = app.add_subcommand("check", "Typecheck a problem file");
  check->add_option("FILE", file)->required();

  auto* norm = app.add_subcommand("normalize", "Print beta-eta normal forms");
  norm->add_option("FILE", file, "Problem file (sides are normalized, or it scopes --term)");
  norm->add_option("--term", term, "Term to normalize");

  auto* ord = app.add_subcommand("order", "Order of a declared variable's type");
  ord->add_option("FILE", file)->required();
  ord->add_option("VAR", var)->required();

  auto* cls = app.add_subcommand("classify", "Problem kind, elementary flags and order");
  cls->add_option("FILE", file)->required();

  auto* ver = app.add_subcommand("verify", "Check that a substitution solves a problem");
  ver->add_option("FILE", file)->required();
  ver->add_option("SUBST", file2)->required();

  auto* bld = app.add_subcommand("build", "Build a reduction target from a source problem");
  bld->add_option("KIND", kind)->required()->check(CLI::IsMember({"thm1", "erratum", "thm2-invalid"}));
  bld->add_option("SOURCE", file)->required();
  bld->add_option("-o,--output", out, "Write the target problem file here");

  auto* slv = app.add_subcommand("solve", "Bounded search for solutions");
  slv->add_option("FILE", file)->required();
  slv->add_option("--size", size, "Largest candidate size")->capture_default_str();
  slv->add_option("--max-solutions", max_solutions, "Stop after this many solutions")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  slv->add_option("--solution-prefix", prefix, "Write each solution to PREFIX<i>.subst");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(Outcome::Error);
  }

  CLI::App* cmd = app.get_subcommands().front();
  std::string name = cmd->get_name();
  try {
    if (cmd == norm && file.empty() && term.empty())
      throw CommandError{"normalize needs a FILE or --term"};
    Report r;
    if (cmd == check) r = cmd_check(file, opt);
    else if (cmd == norm) r = cmd_normalize(file, term, opt);
    else if (cmd == ord) r = cmd_order(file, var, opt);
    else if (cmd == cls) r = cmd_classify(file, opt);
    else if (cmd == ver) r = cmd_verify(file, file2, opt);
    else if (cmd == bld) r = cmd_build(kind, file, out, opt);
    else r = cmd_solve(file, size, max_solutions, prefix, opt);
    return emit(name, opt, r);
  } catch (const CommandError& e) {
    return emit_error(name, opt, e);
  } catch (const lcube::Error& e) {
    return emit_error(name, opt, CommandError{e.what()});
  }
}
