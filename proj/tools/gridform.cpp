#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gridform/dispatch/io.hpp"
#include "gridform/dispatch/profiles.hpp"
#include "gridform/scenario/builder.hpp"
#include "gridform/scenario/cases.hpp"
#include "gridform/scenario/output.hpp"
#include "gridform/simcore/errors.hpp"

using namespace gridform;

namespace {

enum Exit { kOk = 0, kMismatch = 1, kInput = 2, kDiverged = 3 };

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError({"cannot read " + path});
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int run_scenario(const std::string& path, const std::string& out, std::optional<double> dt, bool plot) {
  const auto spec = scenario::parse_scenario(read_file(path));
  const auto result = scenario::execute(spec, dt);
  const auto metrics = scenario::extract_metrics(result.series, scenario::frequency_channel(spec),
                                                 spec.base.f_base(), result.verdict);
  const auto paths = scenario::write_outputs(scenario::output_dir(out), spec.id, result.series, metrics, plot);
  const bool stable = result.verdict.kind == simcore::RunVerdict::Kind::stable;
  std::cout << spec.id << ": " << simcore::to_string(result.verdict.kind);
  if (!stable) std::cout << " at t=" << result.verdict.t_diverge << " (" << result.verdict.detail << ")";
  std::cout << "\n  wrote " << paths.csv.string() << "\n  wrote " << paths.metrics.string() << "\n";
  if (spec.expect_stable && result.verdict.kind == simcore::RunVerdict::Kind::unstable) return kDiverged;
  if (spec.expect_stable != stable) return kMismatch;
  return kOk;
}

int run_named_case(const std::string& name, const std::string& out, std::optional<double> dt, bool plot) {
  const auto rep = scenario::run_case(name, dt);
  scenario::write_outputs(scenario::output_dir(out), name, rep.result.series, rep.metrics, plot);
  std::cout << scenario::diff_report(rep);
  if (rep.passed()) return kOk;
  if (rep.spec.expect_stable && rep.result.verdict.kind == simcore::RunVerdict::Kind::unstable)
    return kDiverged;
  return kMismatch;
}


struct DispatchArgs {
  std::string problem;
  std::string option;
  std::optional<double> alpha;
  std::uint64_t seed = 1;
  std::string save;
};

int run_dispatch(const DispatchArgs& a, const std::string& out) {
  namespace d = dispatch;
  d::DispatchProblem base = a.problem.empty() ? d::synthetic_problem(a.seed) : d::read_problem(a.problem);
  if (a.alpha) base.alpha = *a.alpha;
  if (!a.save.empty()) {
    d::write_problem(a.save, base);
    std::cout << "wrote " << a.save << "\n";
  }
  std::vector<d::Option> options;
  if (a.option.empty())
    options = {d::Option::A, d::Option::B, d::Option::C};
  else
    options = {d::parse_option(a.option)};

  const std::string stem = a.problem.empty() ? "dispatch_seed" + std::to_string(a.seed)
                                             : std::filesystem::path(a.problem).stem().string();
  std::vector<double> objective;
  for (d::Option o : options) {
    d::DispatchProblem p = base;
    p.option = o;
    const auto sol = d::solve(p);
    const auto paths = d::write_solution(scenario::output_dir(out), stem + "_" + d::to_string(o), p, sol);
    std::cout << d::format(o, d::report(p, sol)) << "\n  wrote " << paths.csv.string() << "\n";
    objective.push_back(sol.objective);
  }
  if (objective.size() == 3) {
    const double tol = 1e-7 * std::max(1.0, objective[0]);
    if (objective[2] > objective[1] + tol || objective[1] > objective[0] + tol) {
      std::cout << "option ordering C <= B <= A violated\n";
      return kMismatch;
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grid-forming load simulation and dispatch studies"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out;
  double dt = 0.0;
  bool plot = false;
  app.add_option("--out", out, "Output directory (default: $GRIDFORM_OUT or ./out)");
  app.add_option("--dt", dt, "Integration step override [s]")->check(CLI::PositiveNumber);
  app.add_flag("--emit-plot-data", plot, "Also write decimated plot data as JSON");

  std::string scenario_path;
  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("scenario", scenario_path, "Scenario JSON")->required();

  std::string case_name;
  auto* cs = app.add_subcommand("case", "Run a bundled case study and check its expectations");
  cs->add_option("name", case_name, "case1a..case1d, case2, case3e, case3f, case4 or all")->required();

  DispatchArgs da;
  auto* dp = app.add_subcommand("dispatch", "Solve the energy-balancing LP for options A, B and C");
  dp->add_option("problem", da.problem, "Problem CSV with a JSON header beside it (default: synthetic profile)");
  dp->add_option("--option", da.option, "A, B or C (default: all three)")->check(CLI::IsMember({"A", "B", "C"}));
  dp->add_option("--alpha", da.alpha, "Renewable reserve factor for options A and B")
      ->check(CLI::Range(0.0, 1.0));
  dp->add_option("--seed", da.seed, "Seed for the synthetic profile");
  dp->add_option("--save-problem", da.save, "Write the problem actually solved as CSV + JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }
  const std::optional<double> step = dt > 0.0 ? std::optional<double>(dt) : std::nullopt;

  try {
    if (*run) return run_scenario(scenario_path, out, step, plot);
    if (*dp) return run_dispatch(da, out);
    if (*cs) {
      if (case_name != "all") return run_named_case(case_name, out, step, plot);
      int worst = kOk;
      for (const auto& n : scenario::case_names()) worst = std::max(worst, run_named_case(n, out, step, plot));
      return worst;
    }
  } catch (const ValidationError& e) {
    std::cerr << "input error:\n";
    for (const auto& p : e.problems()) std::cerr << "  " << p << "\n";
    return kInput;
  } catch (const UnknownId& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kOk;
}
