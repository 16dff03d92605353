#include "fgld/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "fgld/best_response.hpp"
#include "fgld/counterexamples.hpp"
#include "fgld/errors.hpp"
#include "fgld/fixtures.hpp"
#include "fgld/io.hpp"
#include "fgld/numeric_text.hpp"
#include "fgld/qcqp.hpp"
#include "fgld/solvers.hpp"

namespace fgld::cli {

namespace {

// Rounded to 1e-6 for stable, readable reports.
std::string short_number(double value) {
  return format_shortest(std::round(value * 1e6) / 1e6 + 0.0);
}

std::string vector_text(std::span<const double> values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    out += (i ? ", " : "") + short_number(values[i]);
  }
  return out + "]";
}

void print_matrix(std::ostream& out, const ElectionInstance& instance, const SolutionMatrix& x) {
  for (std::size_t v = 0; v < instance.num_voters(); ++v) {
    out << "  " << instance.voters[v].id << " = " << vector_text(x.row(v)) << "\n";
  }
}

void print_report(std::ostream& out, const ElectionInstance& instance, const SolveReport& r) {
  out << "status: " << to_string(r.status) << "\n";
  out << "iterations: " << r.iterations << "\n";
  out << "residual_linf: " << format_shortest(r.residual_linf) << "\n";
  out << "residual_l1: " << format_shortest(r.residual_l1) << "\n";
  out << "solution:\n";
  print_matrix(out, instance, r.solution);
}

ElectionInstance load_instance(const std::string& path) {
  return io::parse_instance(io::read_file(path));
}

template <typename Enum, typename Parser>
Enum parse_choice(const std::string& text, Parser parser, const std::string& what) {
  if (auto value = parser(text)) {
    return *value;
  }
  throw CLI::ValidationError(what, "unknown value '" + text + "'");
}

int cmd_validate(const std::string& path, std::ostream& out) {
  ElectionInstance instance;
  try {
    instance = load_instance(path);
  } catch (const InvalidInstanceError& e) {
    out << "valid: no\n";
    for (const auto& v : e.report().violations) {
      out << "violation: [" << v.rule << "] " << v.message << "\n";
    }
    return kExitDomainError;
  }
  std::size_t bundles = 0;
  std::string thresholds;
  for (const auto& voter : instance.voters) {
    for (const auto& b : voter.bundles) {
      ++bundles;
      if (b.weight) {
        thresholds += (thresholds.empty() ? "" : " ") + format_shortest(b.threshold());
      }
    }
  }
  out << "valid: yes\n";
  out << "voters: " << instance.num_voters() << "\n";
  out << "candidates: " << instance.num_candidates() << "\n";
  out << "bundles: " << bundles << "\n";
  out << "thresholds: " << thresholds << "\n";
  return kExitOk;
}

struct SolveArgs {
  std::string file;
  std::string strategy = "iterate-then-descent";
  std::string start = "even-split";
  std::string trace;
  std::string output;
  SolverConfig cfg;
};

int cmd_solve(const SolveArgs& args, std::ostream& out) {
  const ElectionInstance instance = load_instance(args.file);
  SolverConfig cfg = args.cfg;
  cfg.start = parse_choice<StartMode>(args.start, start_mode_from_string, "--start");
  const Strategy strategy =
      parse_choice<Strategy>(args.strategy, strategy_from_string, "--strategy");
  const SolveReport report = solve(instance, cfg, strategy);

  out << "strategy: " << to_string(strategy) << "\n";
  print_report(out, instance, report);
  if (!args.trace.empty()) {
    std::ostringstream csv;
    io::write_trace_csv(csv, report.trajectory);
    io::write_file(args.trace, csv.str());
  }
  if (!args.output.empty()) {
    io::write_file(args.output, io::serialize_solution(report.solution, instance));
  }
  if (!report.converged()) {
    out << "result: no ε-weak point found (minimum residual "
        << format_shortest(report.residual_linf) << ")\n";
    return kExitDomainError;
  }
  out << "result: ε-weak point found\n";
  return kExitOk;
}

int cmd_verify(const std::string& file, const std::string& solution_file, double tol,
               std::ostream& out) {
  const ElectionInstance instance = load_instance(file);
  const SolutionMatrix x = io::parse_solution(io::read_file(solution_file), instance);
  const bool feasible = is_feasible(instance, x, tol);
  const RegretReport regrets = regret(x, instance);
  out << "feasible: " << (feasible ? "yes" : "no") << "\n";
  for (std::size_t v = 0; v < instance.num_voters(); ++v) {
    out << "regret " << instance.voters[v].id << ": " << format_shortest(regrets.per_voter[v])
        << "\n";
  }
  out << "max_regret: " << format_shortest(regrets.max_voter_regret()) << "\n";
  out << "residual_linf: " << format_shortest(regrets.max_linf) << "\n";
  const bool ok = feasible && regrets.max_voter_regret() <= tol;
  out << "verdict: " << (ok ? "accepted" : "rejected") << " at tolerance "
      << format_shortest(tol) << "\n";
  return ok ? kExitOk : kExitDomainError;
}

struct SearchArgs {
  std::string kind;
  GeneratorParams params;
  std::string defaults = "even-split";
  std::uint64_t seed = 1;
  SearchOptions options;
  std::string output;
};

int cmd_search(const SearchArgs& args, std::ostream& out) {
  const FindingKind kind = parse_choice<FindingKind>(args.kind, finding_kind_from_string, "KIND");
  GeneratorParams params = args.params;
  params.defaults = parse_choice<DefaultMode>(args.defaults, default_mode_from_string,
                                              "--defaults");
  const auto finding = search_violation(kind, params, args.seed, args.options);
  out << "kind: " << to_string(kind) << "\n";
  out << "seed: " << args.seed << "\n";
  if (!finding) {
    out << "finding: none within " << args.options.budget << " attempts\n";
    return kExitOk;
  }
  out << "finding: attempt " << finding->attempt << "\n";
  out << "certificate:";
  for (double value : finding->certificate) {
    out << ' ' << format_shortest(value);
  }
  out << "\n";
  out << "holds: " << (finding_holds(*finding, args.options.separation) ? "yes" : "no") << "\n";
  if (!args.output.empty()) {
    io::write_file(args.output, io::serialize_finding(*finding));
    out << "written: " << args.output << "\n";
  }
  return kExitOk;
}

// Best response of voter 0 once voter 1's direct ballot is fixed.
std::vector<double> resolved_first_voter(const ElectionInstance& instance) {
  SolverConfig cfg;
  const SolveReport report = solve(instance, cfg, Strategy::kIterate);
  const auto row = report.solution.row(0);
  return {row.begin(), row.end()};
}

std::string reproduce_ep() {
  std::ostringstream out;
  out << "example: exact proportionality, v delegates {c1,c2} to u\n";
  const auto instance = fixtures::delegated_pair(Notion::kEP, 0.001);
  SolverConfig cfg;
  const SolveReport report = solve(instance, cfg, Strategy::kIterate);
  out << "u = [0.001, 0, 0.999]: status " << to_string(report.status) << ", v = "
      << vector_text(report.solution.row(0)) << "\n";
  for (const std::vector<double>& v : {std::vector<double>{0.3, 0.7, 0.0},
                                       std::vector<double>{0.0, 1.0, 0.0}}) {
    SolutionMatrix x = SolutionMatrix::from_rows({v, {0.001, 0.0, 0.999}});
    out << "v = " << vector_text(v) << ": response "
        << vector_text(best_response(x, instance).row(0)) << ", regret "
        << short_number(regret(x, instance).per_voter[0]) << "\n";
  }
  return out.str();
}

std::string reproduce_ept() {
  std::ostringstream out;
  out << "example: crosswise instance under EP-T\n";
  const auto instance = fixtures::crosswise(Notion::kEPT);
  SolverConfig grid_cfg;
  grid_cfg.tolerance = 0.01;
  grid_cfg.grid_resolution = 0.01;
  const GridResult grid = grid_oracle(instance, grid_cfg);
  out << "grid points: " << grid.points_visited << "\n";
  out << "grid points within 0.01: " << grid.within_tolerance.size() << "\n";
  out << "minimum grid residual: " << short_number(grid.minimum.residual) << "\n";
  out << "minimizer:\n";
  print_matrix(out, instance, grid.minimum.point);
  SolverConfig iter_cfg;
  iter_cfg.tolerance = 1e-3;
  const SolveReport iterated = solve(instance, iter_cfg, Strategy::kIterate);
  out << "simple iteration at 0.001: " << to_string(iterated.status) << " after "
      << iterated.iterations << " iterations\n";
  return out.str();
}

std::string reproduce_epti() {
  std::ostringstream out;
  out << "example: crosswise instance under EP-TI\n";
  const auto instance = fixtures::crosswise(Notion::kEPTI);
  const SolutionMatrix known = fixtures::crosswise_interpolated_solution();
  out << "known solution:\n";
  print_matrix(out, instance, known);
  const Bundle& second = instance.voters[0].bundles[1];
  const auto numerator = rules::interpolation_numerator(slice(known, 1, second),
                                                        second.default_split, second.threshold());
  out << "v on {c3,c4}: unnormalized " << vector_text(numerator) << ", response "
      << vector_text(br_epti(instance, known, 0, 1).values) << "\n";
  const RegretReport regrets = regret(known, instance);
  out << "feasible: " << (is_feasible(instance, known, 1e-9) ? "yes" : "no") << "\n";
  out << "max regret: " << short_number(regrets.max_voter_regret()) << "\n";
  SolverConfig cfg;
  const SolveReport report = solve(instance, cfg, Strategy::kIterateThenDescent);
  out << "solver: " << to_string(report.status) << ", residual below 1e-6: "
      << (report.residual_linf <= 1e-6 ? "yes" : "no") << "\n";
  print_matrix(out, instance, report.solution);
  return out.str();
}

std::string reproduce_pair_family(Notion notion, const std::string& title) {
  std::ostringstream out;
  out << "example: " << title << ", weight 100, default [0, 1]\n";
  for (double u : {0.015, 0.01, 0.005}) {
    const auto instance = fixtures::confident_pair(notion, u);
    out << "u = [" << short_number(u) << ", 0, " << short_number(1.0 - u)
        << "]: v = " << vector_text(resolved_first_voter(instance)) << "\n";
  }
  return out.str();
}

}  // namespace

std::string reproduce(const std::string& name) {
  if (name == "example-ep") return reproduce_ep();
  if (name == "example-ep-t-table1") return reproduce_ept();
  if (name == "example-ep-ti-table1") return reproduce_epti();
  if (name == "example-ep-ti-thresholds") {
    return reproduce_pair_family(Notion::kEPTI, "interpolated thresholds");
  }
  if (name == "example-wcc") {
    return reproduce_pair_family(Notion::kWCC, "weighted convex combination");
  }
  throw std::out_of_range("unknown example '" + name + "'");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Resolve fine-grained cumulative delegations", "fgld"};
  app.require_subcommand(1);

  std::string file;
  auto* validate = app.add_subcommand("validate", "Check an instance file");
  validate->add_option("FILE", file, "instance JSON")->required();

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Search for an approximate fixed point");
  solve_cmd->add_option("FILE", solve_args.file, "instance JSON")->required();
  solve_cmd->add_option("--strategy", solve_args.strategy,
                        "iterate | descent | iterate-then-descent | grid")
      ->capture_default_str();
  solve_cmd->add_option("--tol", solve_args.cfg.tolerance, "l-infinity residual target")
      ->capture_default_str();
  solve_cmd->add_option("--max-iters", solve_args.cfg.max_iterations)->capture_default_str();
  solve_cmd->add_option("--seed", solve_args.cfg.seed)->capture_default_str();
  solve_cmd->add_option("--start", solve_args.start, "defaults | even-split")
      ->capture_default_str();
  solve_cmd->add_option("--resolution", solve_args.cfg.grid_resolution, "grid step")
      ->capture_default_str();
  solve_cmd->add_option("--trace", solve_args.trace, "write the residual trajectory as CSV");
  solve_cmd->add_option("--output", solve_args.output, "write the solution JSON");

  std::string solution_file;
  double verify_tol = 1e-6;
  auto* verify = app.add_subcommand("verify", "Check a solution against an instance");
  verify->add_option("FILE", file, "instance JSON")->required();
  verify->add_option("SOLUTIONFILE", solution_file, "solution JSON")->required();
  verify->add_option("--tol", verify_tol, "feasibility and regret tolerance")
      ->capture_default_str();

  auto* export_cmd = app.add_subcommand("export-qcqp", "Print the polynomial constraint system");
  export_cmd->add_option("FILE", file, "instance JSON")->required();

  SearchArgs search_args;
  auto* search = app.add_subcommand("search", "Seeded search for a counterexample");
  search->add_option("KIND", search_args.kind,
                     "contraction-violation | pseudo-mono-violation | non-uniqueness")
      ->required();
  search->add_option("--n", search_args.params.voters)->capture_default_str();
  search->add_option("--m", search_args.params.candidates)->capture_default_str();
  search->add_option("--weight", search_args.params.weight)->capture_default_str();
  search->add_option("--defaults", search_args.defaults, "even-split | random")
      ->capture_default_str();
  search->add_option("--seed", search_args.seed)->capture_default_str();
  search->add_option("--budget", search_args.options.budget, "instances to try")
      ->capture_default_str();
  search->add_option("--separation", search_args.options.separation,
                     "non-uniqueness l1 threshold")
      ->capture_default_str();
  search->add_option("--output", search_args.output, "write the finding JSON");

  std::string example;
  auto* reproduce_cmd = app.add_subcommand("reproduce", "Run a built-in worked example");
  reproduce_cmd->add_option("NAME", example)
      ->required()
      ->check(CLI::IsMember(fixtures::reproducible_names()));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(file, out);
    if (solve_cmd->parsed()) return cmd_solve(solve_args, out);
    if (verify->parsed()) return cmd_verify(file, solution_file, verify_tol, out);
    if (export_cmd->parsed()) {
      out << export_qcqp(load_instance(file)).text;
      return kExitOk;
    }
    if (search->parsed()) return cmd_search(search_args, out);
    if (reproduce_cmd->parsed()) {
      out << reproduce(example);
      return kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const io::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const InvalidInstanceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  }
  return kExitUsage;
}

}  // namespace fgld::cli
