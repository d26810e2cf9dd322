#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "varexp/config.hpp"
#include "varexp/solver.hpp"

namespace varexp {

inline std::string format17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Comment block written at the top of every output file: the parsed
/// configuration plus the compliance verdict for the run.
inline std::vector<std::string> config_echo(const RunConfig& cfg, bool theorem_compliant) {
  std::vector<std::string> lines;
  for (const auto& [k, v] : cfg.entries()) lines.push_back(k + " = " + v);
  lines.push_back(std::string("theorem_compliant = ") + (theorem_compliant ? "true" : "false"));
  return lines;
}

inline void write_comment_block(std::ostream& os, const std::vector<std::string>& lines) {
  for (const auto& l : lines) os << "# " << l << "\n";
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open output file " + path.string());
  return f;
}

// ---- hypotheses.csv ---------------------------------------------------------

inline void write_hypotheses_csv(std::ostream& os, const HypothesisReport& rep,
                                 const std::vector<std::string>& echo) {
  write_comment_block(os, echo);
  os << "name,verdict,constant_estimate,worst_violation\n";
  auto row = [&](const char* name, bool pass, double constant, bool has_constant) {
    os << name << ',' << (pass ? "pass" : "fail") << ',';
    if (has_constant) os << format17(constant);
    os << ',' << format17(rep.worst_violation) << '\n';
  };
  row("zero_at_zero", rep.zero_at_zero, 0.0, false);
  row("growth_bound", rep.growth_bound, rep.c1_estimate, true);
  row("monotonicity", rep.monotonicity, 0.0, false);
  row("uniform_convexity", rep.uniform_convexity, rep.k_estimate, true);
  row("sandwich", rep.sandwich, 0.0, false);
}

// ---- report.csv / scan.csv ----------------------------------------------------

inline const char* solve_report_header() {
  return "lambda,status,I_u1,residual_norm_u1,has_u2,I_u2,mountain_pass_level,"
         "residual_norm_u2,ordering_violation,iterations_minimize,mountain_pass_rounds,"
         "minimize_converged,multiple_minimizers,theorem_compliant,hypotheses_pass";
}

inline void write_solve_row(std::ostream& os, const SolveReport& r) {
  os << format17(r.lambda) << ',' << to_string(r.status) << ',' << format17(r.I_u1) << ','
     << format17(r.residual_norm_u1) << ',' << (r.has_u2 ? 1 : 0) << ','
     << format17(r.has_u2 ? r.I_u2 : 0.0) << ','
     << format17(r.has_u2 ? r.mountain_pass_level : 0.0) << ','
     << format17(r.has_u2 ? r.residual_norm_u2 : 0.0) << ','
     << format17(r.has_u2 ? r.ordering_violation : 0.0) << ',' << r.iterations_minimize << ','
     << r.mountain_pass_rounds << ',' << (r.minimize_converged ? 1 : 0) << ','
     << (r.multiple_minimizers ? 1 : 0) << ',' << (r.theorem_compliant ? 1 : 0) << ','
     << (r.hypothesis.all_pass() ? 1 : 0) << '\n';
}

inline void write_report_csv(std::ostream& os, const SolveReport& r,
                             const std::vector<std::string>& echo) {
  write_comment_block(os, echo);
  os << solve_report_header() << '\n';
  write_solve_row(os, r);
}

inline void write_scan_csv(std::ostream& os, const ScanResult& scan,
                           const std::vector<std::string>& echo) {
  write_comment_block(os, echo);
  os << solve_report_header() << '\n';
  for (const auto& r : scan.rows) write_solve_row(os, r);
  os << "lambda_star_bracket,";
  if (scan.bracket_found)
    os << format17(scan.bracket_lo) << ',' << format17(scan.bracket_hi) << '\n';
  else
    os << ",\n";
}

}  // namespace varexp
