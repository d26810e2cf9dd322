#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "varexp/lebesgue.hpp"
#include "varexp/rng.hpp"

using namespace varexp;

namespace {

GridFunction random_function(std::shared_ptr<const Grid> grid, Rng& rng, double lo, double hi,
                             bool signed_values = true) {
  GridFunction u = GridFunction::zeros(grid);
  for (long i = 0; i < grid->node_count; ++i) {
    double v = rng.uniform(lo, hi);
    if (signed_values && rng.uniform01() < 0.5) v = -v;
    u[i] = v;
  }
  return u;
}

}  // namespace

TEST_CASE("exponent field sampling and validation") {
  auto g = build_grid(1, {5}, {1.0});
  SECTION("constant family is exact") {
    const ExponentField p = exponent_constant(*g, 2.5);
    for (double v : p.node_values) CHECK(v == 2.5);
    for (double v : p.cell_values) CHECK(v == 2.5);
    CHECK(p.p_minus == 2.5);
    CHECK(p.p_plus == 2.5);
  }
  SECTION("affine family attains its endpoints at the box faces") {
    const ExponentField p = exponent_affine(*g, {1.0, 0.0, 0.0}, 2.0, 2.4);
    CHECK_THAT(p.node_values.front(), Catch::Matchers::WithinAbs(2.0, 1e-15));
    CHECK_THAT(p.node_values.back(), Catch::Matchers::WithinAbs(2.4, 1e-15));
    CHECK_THAT(p.p_minus, Catch::Matchers::WithinAbs(2.0, 1e-15));
    CHECK_THAT(p.p_plus, Catch::Matchers::WithinAbs(2.4, 1e-15));
  }
  SECTION("samples at or below 1 are rejected") {
    std::vector<double> bad(std::size_t(g->node_count), 2.0);
    bad[2] = 1.0;
    CHECK_THROWS_AS(exponent_tabulated(*g, bad), std::domain_error);
  }
}

TEST_CASE("modular: closed-form values and the independent quadrature oracle") {
  auto g = build_grid(1, {41}, {1.0});
  const ExponentField p3 = exponent_constant(*g, 3.0);

  CHECK(modular_nodal(GridFunction::zeros(g), p3) == 0.0);
  CHECK_THAT(modular_nodal(GridFunction::constant(g, 1.0), p3),
             Catch::Matchers::WithinAbs(1.0, 1e-13));

  const double direct = modular_nodal(GridFunction::constant(g, 2.0), p3);
  CHECK_THAT(direct, Catch::Matchers::WithinAbs(8.0, 1e-12));
  const double reference = oracles::modular_1d([](double) { return 2.0; },
                                               [](double) { return 3.0; }, 1.0, 20001);
  CHECK_THAT(direct, Catch::Matchers::WithinAbs(reference, 1e-12));

  SECTION("shape mismatch is a shape error") {
    auto g2 = build_grid(1, {9}, {1.0});
    const ExponentField other = exponent_constant(*g2, 3.0);
    CHECK_THROWS_AS(modular_nodal(GridFunction::constant(g, 1.0), other), std::invalid_argument);
  }
}

TEST_CASE("luxemburg norm: defining equation, zero case, constant-exponent collapse") {
  auto g = build_grid(2, {9, 9}, {1.0, 1.0});
  const ExponentField p = exponent_affine(*g, {1.0, 1.0, 0.0}, 2.0, 2.5);
  Rng rng(321);

  CHECK(luxemburg_norm_nodal(GridFunction::zeros(g), p) == 0.0);

  for (int trial = 0; trial < 25; ++trial) {
    GridFunction u = random_function(g, rng, 0.05, 3.0);
    const double n = luxemburg_norm_nodal(u, p);
    REQUIRE(n > 0.0);
    CHECK_THAT(modular_nodal(scaled(u, 1.0 / n), p), Catch::Matchers::WithinAbs(1.0, 1e-10));
  }

  const ExponentField pq = exponent_constant(*g, 2.3);
  for (int trial = 0; trial < 25; ++trial) {
    GridFunction u = random_function(g, rng, 0.05, 3.0);
    const double classical = oracles::lq_norm(u.values, g->node_weight, 2.3);
    CHECK_THAT(luxemburg_norm_nodal(u, pq),
               Catch::Matchers::WithinAbs(classical, 1e-10 * std::max(1.0, classical)));
  }
}

TEST_CASE("luxemburg norm properties: homogeneity and triangle inequality") {
  auto g = build_grid(2, {9, 9}, {1.0, 1.0});
  const ExponentField p = exponent_affine(*g, {1.0, 0.0, 0.0}, 2.0, 2.5);
  Rng rng(8899);
  for (int trial = 0; trial < 100; ++trial) {
    GridFunction u = random_function(g, rng, 0.01, 2.0);
    GridFunction v = random_function(g, rng, 0.01, 2.0);
    const double nu = luxemburg_norm_nodal(u, p);
    const double nv = luxemburg_norm_nodal(v, p);
    const double t = rng.uniform(1.0, 10.0);
    CHECK_THAT(luxemburg_norm_nodal(scaled(u, t), p),
               Catch::Matchers::WithinAbs(t * nu, 1e-10 * std::max(1.0, t * nu)));
    CHECK(luxemburg_norm_nodal(added(u, v), p) <= nu + nv + 1e-10);
  }
}

TEST_CASE("conjugate exponent field") {
  auto g = build_grid(1, {9}, {1.0});
  SECTION("self-conjugate at 2, and 3 -> 1.5") {
    const ExponentField q2 = conjugate(exponent_constant(*g, 2.0));
    for (double v : q2.node_values) CHECK_THAT(v, Catch::Matchers::WithinAbs(2.0, 1e-15));
    const ExponentField q3 = conjugate(exponent_constant(*g, 3.0));
    for (double v : q3.node_values) CHECK_THAT(v, Catch::Matchers::WithinAbs(1.5, 1e-15));
  }
  SECTION("affine range maps endpoint-to-endpoint") {
    const ExponentField p = exponent_affine(*g, {1.0, 0.0, 0.0}, 2.0, 2.5);
    const ExponentField q = conjugate(p);
    for (std::size_t i = 0; i < p.node_values.size(); ++i)
      CHECK_THAT(q.node_values[i],
                 Catch::Matchers::WithinAbs(p.node_values[i] / (p.node_values[i] - 1.0), 1e-14));
    CHECK_THAT(q.p_minus, Catch::Matchers::WithinAbs(5.0 / 3.0, 1e-14));
    CHECK_THAT(q.p_plus, Catch::Matchers::WithinAbs(2.0, 1e-14));
    // the node where p is largest carries the smallest conjugate
    CHECK_THAT(q.node_values.back(), Catch::Matchers::WithinAbs(5.0 / 3.0, 1e-14));
  }
  SECTION("involution") {
    const ExponentField p = exponent_affine(*g, {1.0, 0.0, 0.0}, 2.0, 2.5);
    const ExponentField back = conjugate(conjugate(p));
    for (std::size_t i = 0; i < p.node_values.size(); ++i)
      CHECK_THAT(back.node_values[i], Catch::Matchers::WithinAbs(p.node_values[i], 1e-12));
    for (std::size_t i = 0; i < p.cell_values.size(); ++i)
      CHECK_THAT(back.cell_values[i], Catch::Matchers::WithinAbs(p.cell_values[i], 1e-12));
  }
}

TEST_CASE("holder bound: zero case and the constant-exponent equality case") {
  auto g = build_grid(2, {9, 9}, {1.0, 1.0});
  Rng rng(12);
  const ExponentField p2 = exponent_constant(*g, 2.0);
  GridFunction v = random_function(g, rng, 0.1, 1.0);

  const auto zero = check_holder(GridFunction::zeros(g), v, p2);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.holds);

  // p = 2, u = v: both sides equal the squared classical norm.
  GridFunction u = random_function(g, rng, 0.1, 1.0);
  const auto eq = check_holder(u, u, p2);
  double uu = 0.0;
  for (long i = 0; i < g->node_count; ++i) uu += g->node_weight[std::size_t(i)] * u[i] * u[i];
  CHECK_THAT(eq.lhs, Catch::Matchers::WithinAbs(uu, 1e-12));
  CHECK_THAT(eq.rhs, Catch::Matchers::WithinAbs(uu, 1e-10 * std::max(1.0, uu)));
  CHECK(eq.holds);
}

TEST_CASE("holder bound: random sweep on a 17x17x17 grid") {
  auto g = build_grid(3, {17, 17, 17}, {1.0, 1.0, 1.0});
  const ExponentField p = exponent_affine(*g, {1.0, 0.0, 0.0}, 2.0, 2.5);
  Rng rng(2024);
  long violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    GridFunction u = random_function(g, rng, 0.0, 2.0);
    GridFunction v = random_function(g, rng, 0.0, 2.0);
    if (!check_holder(u, v, p).holds) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("modular sandwich branches") {
  auto g = build_grid(1, {33}, {1.0});
  const ExponentField p = exponent_affine(*g, {1.0, 0.0, 0.0}, 2.0, 3.0);
  Rng rng(5150);

  SECTION("norm scaled to 2: modular within [4, 8]") {
    GridFunction u = random_function(g, rng, 0.2, 1.0);
    u = scaled(u, 2.0 / luxemburg_norm_nodal(u, p));
    const auto verdict = check_modular_relations(u, p);
    CHECK(verdict.branch == 1);
    CHECK(verdict.holds);
    CHECK(verdict.modular >= 4.0 - 1e-8);
    CHECK(verdict.modular <= 8.0 + 1e-8);
  }
  SECTION("norm scaled to 0.5: modular within [0.125, 0.25]") {
    GridFunction u = random_function(g, rng, 0.2, 1.0);
    u = scaled(u, 0.5 / luxemburg_norm_nodal(u, p));
    const auto verdict = check_modular_relations(u, p);
    CHECK(verdict.branch == -1);
    CHECK(verdict.holds);
    CHECK(verdict.modular >= 0.125 - 1e-9);
    CHECK(verdict.modular <= 0.25 + 1e-9);
  }
  SECTION("random sweep has no violations") {
    long violations = 0;
    for (int trial = 0; trial < 2000; ++trial) {
      GridFunction u = random_function(g, rng, 0.0, 4.0);
      if (!check_modular_relations(u, p).holds) ++violations;
    }
    CHECK(violations == 0);
  }
  SECTION("norm convergence and modular convergence go together") {
    GridFunction u = random_function(g, rng, 0.2, 1.0);
    GridFunction w = random_function(g, rng, 0.2, 1.0);
    const double nw = luxemburg_norm_nodal(w, p);
    double prev_modular = 1e300;
    for (int n = 1; n <= 64; n *= 2) {
      GridFunction un = u;
      axpy(1.0 / n, w, un);
      const GridFunction diff = subtracted(un, u);
      const double mod = modular_nodal(diff, p);
      const double nrm = luxemburg_norm_nodal(diff, p);
      CHECK(mod < prev_modular);
      CHECK_THAT(nrm, Catch::Matchers::WithinAbs(nw / n, 1e-9 * std::max(1.0, nw)));
      prev_modular = mod;
    }
    CHECK(prev_modular < 1e-3);
  }
}
