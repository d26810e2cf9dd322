#pragma once

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "varexp/energy.hpp"
#include "varexp/lebesgue.hpp"
#include "varexp/operators.hpp"
#include "varexp/rng.hpp"
#include "varexp/solver.hpp"

namespace varexp {

struct SelftestSuite {
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace detail {

inline GridFunction random_dirichlet(std::shared_ptr<const Grid> grid, Rng& rng, double lo,
                                     double hi, bool signed_values) {
  GridFunction u = GridFunction::zeros(grid);
  const Grid& g = *grid;
  for (long i = 0; i < g.node_count; ++i) {
    if (g.boundary[std::size_t(i)]) continue;
    double v = rng.uniform(lo, hi);
    if (signed_values && rng.uniform01() < 0.5) v = -v;
    u[i] = v;
  }
  return u;
}

inline double relative_gap(double a, double b) {
  return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace detail

/// Norm/modular machinery: homogeneity, constant-exponent collapse, the
/// modular sandwich, and the triangle inequality on random data.
inline SelftestSuite selftest_lebesgue(bool inject_error) {
  SelftestSuite suite{"lebesgue", true, ""};
  auto grid = build_grid(2, {9, 9}, {1.0, 1.0});
  const ExponentField p = exponent_affine(*grid, {1.0, 0.5, 0.0}, 2.0, 2.5);
  const ExponentField pc = exponent_constant(*grid, 2.25);
  Rng rng(4242);
  for (int trial = 0; trial < 200 && suite.pass; ++trial) {
    GridFunction u = detail::random_dirichlet(grid, rng, 0.05, 2.0, true);
    GridFunction v = detail::random_dirichlet(grid, rng, 0.05, 2.0, true);
    const double n = luxemburg_norm_nodal(u, p);
    const double t = rng.uniform(1.5, 4.0);
    if (std::fabs(luxemburg_norm_nodal(scaled(u, t), p) - t * n) > 1e-10 * std::max(1.0, t * n)) {
      suite.pass = false;
      suite.detail = "homogeneity";
    }
    double classical = 0.0;
    for (long i = 0; i < grid->node_count; ++i)
      classical += grid->node_weight[std::size_t(i)] * std::pow(std::fabs(u[i]), 2.25);
    classical = std::pow(classical, 1.0 / 2.25);
    if (std::fabs(luxemburg_norm_nodal(u, pc) - classical) > 1e-10 * std::max(1.0, classical)) {
      suite.pass = false;
      suite.detail = "constant-exponent collapse";
    }
    if (!check_modular_relations(u, p).holds) {
      suite.pass = false;
      suite.detail = "modular sandwich";
    }
    if (!check_holder(u, v, p).holds) {
      suite.pass = false;
      suite.detail = "holder bound";
    }
    const double tri = luxemburg_norm_nodal(added(u, v), p);
    double bound = luxemburg_norm_nodal(u, p) + luxemburg_norm_nodal(v, p);
    if (inject_error) bound *= 0.5;  // test hook: makes the triangle bound false
    if (tri > bound + 1e-10) {
      suite.pass = false;
      suite.detail = "triangle inequality";
    }
  }
  return suite;
}

/// Exact-gradient checks for both energies against central finite differences.
inline SelftestSuite selftest_gradients() {
  SelftestSuite suite{"gradients", true, ""};
  auto grid = build_grid(2, {7, 7}, {1.0, 1.0});
  const ExponentField p = exponent_affine(*grid, {1.0, 0.0, 0.0}, 2.0, 2.4);
  Rng rng(991);
  for (const bool curvature : {false, true}) {
    const OperatorModel op = curvature ? mean_curvature_model(p) : plaplace_model(p);
    const ProblemParams pr = make_problem_params(3.0, 1.3, 1.7, op, p, grid->dim);
    GridFunction u = detail::random_dirichlet(grid, rng, 0.1, 1.0, true);
    GridFunction ref = detail::random_dirichlet(grid, rng, 0.5, 1.5, false);
    const TruncationData trunc = make_truncation(ref);
    const GridFunction rI = residual_I(u, pr);
    const GridFunction rJ = residual_J(u, pr, trunc);
    const double h = 1e-5;
    double worst = 0.0;
    for (long i = 0; i < grid->node_count; ++i) {
      if (grid->boundary[std::size_t(i)]) continue;
      GridFunction up = u, dn = u;
      up[i] += h;
      dn[i] -= h;
      const double fdI = (energy_I(up, pr) - energy_I(dn, pr)) / (2.0 * h);
      const double fdJ = (energy_J(up, pr, trunc) - energy_J(dn, pr, trunc)) / (2.0 * h);
      worst = std::max(worst, std::fabs(fdI - rI[i]) / std::max(1.0, std::fabs(rI[i])));
      worst = std::max(worst, std::fabs(fdJ - rJ[i]) / std::max(1.0, std::fabs(rJ[i])));
    }
    if (worst > 1e-6) {
      suite.pass = false;
      suite.detail = std::string("finite-difference mismatch for ") + op.name;
    }
  }
  return suite;
}

/// Structural conditions for both built-in operator models.
inline SelftestSuite selftest_operators() {
  SelftestSuite suite{"operators", true, ""};
  auto grid = build_grid(2, {9, 9}, {1.0, 1.0});
  const ExponentField p = exponent_affine(*grid, {0.3, 1.0, 0.0}, 2.0, 2.5);
  for (const bool curvature : {false, true}) {
    const OperatorModel op = curvature ? mean_curvature_model(p) : plaplace_model(p);
    const HypothesisReport rep = check_hypotheses(op, p, *grid, 4000, 555);
    if (!rep.all_pass()) {
      suite.pass = false;
      suite.detail = op.name;
    }
  }
  return suite;
}

/// Truncated-reaction identities: branch continuity and agreement of the
/// truncated energy with the plain one inside the order interval.
inline SelftestSuite selftest_truncation() {
  SelftestSuite suite{"truncation", true, ""};
  const double beta = 1.3, gamma = 1.7;
  Rng rng(77);
  for (int trial = 0; trial < 500 && suite.pass; ++trial) {
    const double ref = rng.uniform(0.0, 3.0);
    const double g_below = truncation_g(ref * (1.0 - 1e-12), ref, beta, gamma);
    const double g_above = truncation_g(ref * (1.0 + 1e-12), ref, beta, gamma);
    if (std::fabs(g_below - g_above) > 1e-9) {
      suite.pass = false;
      suite.detail = "branch continuity of g";
    }
    if (truncation_g(-rng.uniform01(), ref, beta, gamma) != 0.0 ||
        truncation_G(-rng.uniform01(), ref, beta, gamma) != 0.0) {
      suite.pass = false;
      suite.detail = "negative branch";
    }
  }
  auto grid = build_grid(1, {33}, {1.0});
  const ExponentField p = exponent_constant(*grid, 2.2);
  const ProblemParams pr = make_problem_params(5.0, beta, gamma, plaplace_model(p), p, 1);
  GridFunction ref = seed_plateau(grid, 2.0, 0.25, beta, gamma);
  const TruncationData trunc = make_truncation(ref);
  for (int trial = 0; trial < 50 && suite.pass; ++trial) {
    GridFunction u = GridFunction::zeros(grid);
    for (long i = 0; i < grid->node_count; ++i) u[i] = rng.uniform01() * ref[i];
    if (detail::relative_gap(energy_I(u, pr), energy_J(u, pr, trunc)) > 1e-12) {
      suite.pass = false;
      suite.detail = "I and J disagree inside the order interval";
    }
  }
  return suite;
}

/// One-line-per-suite selftest. `inject_error` (or VAREXP_SELFTEST_INJECT=1)
/// deliberately breaks a check so a failing run path is exercised.
inline std::vector<SelftestSuite> run_selftest(bool inject_error = false) {
  if (const char* s = std::getenv("VAREXP_SELFTEST_INJECT"))
    if (s[0] == '1') inject_error = true;
  std::vector<SelftestSuite> suites;
  suites.push_back(selftest_lebesgue(inject_error));
  suites.push_back(selftest_gradients());
  suites.push_back(selftest_operators());
  suites.push_back(selftest_truncation());
  return suites;
}

}  // namespace varexp
