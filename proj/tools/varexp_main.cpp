// Command-line front end for the variable-exponent two-solution solver.
//
// Exit codes: 0 success, 2 configuration error, 3 lambda below the
// two-solution threshold, 4 solver stagnation.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "varexp/varexp.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitBelowThreshold = 3;
constexpr int kExitStagnation = 4;

struct CommonFlags {
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  bool quiet = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--out", flags.out_dir, "Output directory (overrides output.dir)");
  cmd->add_option("--seed", flags.seed, "Random seed (overrides solver.seed)");
  cmd->add_option("--tol", flags.tol, "Residual tolerance (overrides solver.tol)");
  cmd->add_flag("--quiet", flags.quiet, "Suppress progress output");
}

varexp::RunSetup load_setup(const std::string& cfg_path, const CommonFlags& flags,
                            varexp::RunConfig& cfg_out) {
  cfg_out = varexp::RunConfig::parse_file(cfg_path);
  varexp::RunSetup setup = varexp::build_run_setup(cfg_out);
  if (!flags.out_dir.empty()) setup.output_dir = flags.out_dir;
  if (flags.seed) setup.options.seed = *flags.seed;
  if (flags.tol) setup.options.tol = *flags.tol;
  return setup;
}

int run_check_operator(const std::string& cfg_path, const CommonFlags& flags) {
  varexp::RunConfig cfg;
  varexp::RunSetup setup = load_setup(cfg_path, flags, cfg);
  // Compliance echo needs beta/gamma validation as well; build params for a
  // harmless lambda.
  varexp::ProblemParams pr = varexp::setup_params(setup, 1.0);
  if (!setup.op.validity_warning.empty() && !flags.quiet)
    std::cerr << "warning: " << setup.op.validity_warning << "\n";

  varexp::HypothesisReport rep = varexp::check_hypotheses(
      setup.op, setup.exponent, *setup.grid, std::max<long>(setup.options.hypothesis_samples, 1),
      setup.options.seed);

  auto echo = varexp::config_echo(cfg, pr.theorem_compliant);
  auto f = varexp::open_output(std::filesystem::path(setup.output_dir) / "hypotheses.csv");
  varexp::write_hypotheses_csv(f, rep, echo);
  if (!flags.quiet) {
    std::cout << "operator " << setup.op.name << ": "
              << (rep.all_pass() ? "all conditions pass" : "condition failure") << " (c1="
              << varexp::format17(rep.c1_estimate) << ", k=" << varexp::format17(rep.k_estimate)
              << ")\n";
  }
  return rep.all_pass() ? kExitOk : kExitConfig;
}

int status_to_exit(varexp::SolveStatus s) {
  switch (s) {
    case varexp::SolveStatus::two_solutions: return kExitOk;
    case varexp::SolveStatus::below_threshold: return kExitBelowThreshold;
    default: return kExitStagnation;
  }
}

int run_solve(const std::string& cfg_path, const CommonFlags& flags) {
  varexp::RunConfig cfg;
  varexp::RunSetup setup = load_setup(cfg_path, flags, cfg);
  if (!setup.lambda) throw std::invalid_argument("config: solve needs problem.lambda");
  varexp::ProblemParams pr = varexp::setup_params(setup, *setup.lambda);
  varexp::SolveReport rep = varexp::solve_problem(pr, setup.grid, setup.options);

  auto echo = varexp::config_echo(cfg, pr.theorem_compliant);
  const std::filesystem::path dir(setup.output_dir);
  {
    auto f = varexp::open_output(dir / "report.csv");
    varexp::write_report_csv(f, rep, echo);
  }
  {
    auto f = varexp::open_output(dir / "u1.grid");
    varexp::write_grid_function(f, rep.u1, echo);
  }
  if (rep.has_u2) {
    auto f = varexp::open_output(dir / "u2.grid");
    varexp::write_grid_function(f, rep.u2, echo);
  }
  if (!flags.quiet) {
    std::cout << "lambda=" << varexp::format17(rep.lambda) << " status=" << to_string(rep.status)
              << " I(u1)=" << varexp::format17(rep.I_u1);
    if (rep.has_u2)
      std::cout << " I(u2)=" << varexp::format17(rep.I_u2)
                << " c=" << varexp::format17(rep.mountain_pass_level);
    if (!rep.diagnostics.empty()) std::cout << " [" << rep.diagnostics << "]";
    std::cout << "\n";
  }
  return status_to_exit(rep.status);
}

int run_scan(const std::string& cfg_path, const CommonFlags& flags) {
  varexp::RunConfig cfg;
  varexp::RunSetup setup = load_setup(cfg_path, flags, cfg);
  if (setup.lambda_grid.empty())
    throw std::invalid_argument("config: scan needs problem.lambda_grid");
  varexp::ProblemParams base = varexp::setup_params(
      setup, setup.lambda_grid.empty() ? 0.0 : setup.lambda_grid.back());
  varexp::ScanResult scan =
      varexp::scan_lambda(base, setup.lambda_grid, setup.grid, setup.options);

  auto echo = varexp::config_echo(cfg, base.theorem_compliant);
  auto f = varexp::open_output(std::filesystem::path(setup.output_dir) / "scan.csv");
  varexp::write_scan_csv(f, scan, echo);

  bool any_pair = false;
  for (const auto& row : scan.rows) {
    any_pair = any_pair || row.status == varexp::SolveStatus::two_solutions;
    if (!flags.quiet)
      std::cout << "lambda=" << varexp::format17(row.lambda) << " status="
                << to_string(row.status) << " I(u1)=" << varexp::format17(row.I_u1) << "\n";
  }
  if (!flags.quiet && scan.bracket_found)
    std::cout << "threshold bracket: [" << varexp::format17(scan.bracket_lo) << ", "
              << varexp::format17(scan.bracket_hi) << "]\n";
  return any_pair ? kExitOk : kExitBelowThreshold;
}

int run_selftest(const CommonFlags& flags) {
  const auto suites = varexp::run_selftest();
  bool all = true;
  for (const auto& s : suites) {
    all = all && s.pass;
    if (!flags.quiet)
      std::cout << s.name << ": " << (s.pass ? "pass" : "FAIL")
                << (s.detail.empty() ? "" : " (" + s.detail + ")") << "\n";
  }
  return all ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-solution solver for -div(a(x, grad u)) = lambda (u^{g-1} - u^{b-1})"};
  app.require_subcommand(1);

  std::string cfg_check, cfg_solve, cfg_scan;
  CommonFlags f_check, f_solve, f_scan, f_self;

  auto* check = app.add_subcommand("check-operator", "Verify operator structural conditions");
  check->add_option("config", cfg_check, "Configuration file")->required();
  add_common_flags(check, f_check);

  auto* solve = app.add_subcommand("solve", "Solve at a single lambda");
  solve->add_option("config", cfg_solve, "Configuration file")->required();
  add_common_flags(solve, f_solve);

  auto* scan = app.add_subcommand("scan", "Scan a lambda grid and bracket the threshold");
  scan->add_option("config", cfg_scan, "Configuration file")->required();
  add_common_flags(scan, f_scan);

  auto* self = app.add_subcommand("selftest", "Run the built-in invariant suites");
  add_common_flags(self, f_self);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (check->parsed()) return run_check_operator(cfg_check, f_check);
    if (solve->parsed()) return run_solve(cfg_solve, f_solve);
    if (scan->parsed()) return run_scan(cfg_scan, f_scan);
    if (self->parsed()) return run_selftest(f_self);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitConfig;
}
