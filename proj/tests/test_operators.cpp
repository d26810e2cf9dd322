#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "varexp/operators.hpp"
#include "varexp/rng.hpp"

using namespace varexp;

namespace {

/// Dense sampling of the midpoint convexity ratio for the power potential
/// |xi|^p / p at a fixed exponent; the minimum over antipodal-leaning
/// configurations approaches 1 / (p 2^p).
double power_convexity_floor(double p) {
  double floor = std::numeric_limits<double>::infinity();
  auto potential = [p](const Vec3& v) {
    const double n = norm(v);
    return n > 0.0 ? std::pow(n, p) / p : 0.0;
  };
  for (int ir = 0; ir <= 40; ++ir) {
    const double r = std::pow(10.0, -2.0 + 4.0 * ir / 40.0);
    for (int is = 0; is <= 40; ++is) {
      const double s = std::pow(10.0, -2.0 + 4.0 * is / 40.0);
      for (int ia = 1; ia <= 36; ++ia) {
        const double th = 3.14159265358979323846 * ia / 36.0;
        const Vec3 xi{r, 0.0, 0.0};
        const Vec3 psi{s * std::cos(th), s * std::sin(th), 0.0};
        const Vec3 mid{0.5 * (xi[0] + psi[0]), 0.5 * (xi[1] + psi[1]), 0.0};
        const Vec3 d{xi[0] - psi[0], xi[1] - psi[1], 0.0};
        const double gap = norm(d);
        if (gap < 1e-12) continue;
        const double num = 0.5 * potential(xi) + 0.5 * potential(psi) - potential(mid);
        floor = std::min(floor, num / std::pow(gap, p));
      }
    }
  }
  return floor;
}

}  // namespace

TEST_CASE("power-law model evaluators") {
  auto g = build_grid(2, {5, 5}, {1.0, 1.0});
  SECTION("exponent 2 reduces to the linear flux") {
    const ExponentField p = exponent_constant(*g, 2.0);
    const OperatorModel m = plaplace_model(p);
    const Vec3 xi{0.3, -0.4, 0.0};
    CHECK_THAT(m.potential(2.0, xi), Catch::Matchers::WithinAbs(0.5 * dot(xi, xi), 1e-15));
    const Vec3 a = m.flux(2.0, xi);
    CHECK_THAT(a[0], Catch::Matchers::WithinAbs(xi[0], 1e-15));
    CHECK_THAT(a[1], Catch::Matchers::WithinAbs(xi[1], 1e-15));
  }
  SECTION("zero gradient maps to zero") {
    const ExponentField p = exponent_constant(*g, 2.5);
    const OperatorModel m = plaplace_model(p);
    CHECK(m.potential(2.5, {0, 0, 0}) == 0.0);
    CHECK(norm(m.flux(2.5, {0, 0, 0})) == 0.0);
  }
  SECTION("hand-evaluated point at exponent 3") {
    const ExponentField p = exponent_constant(*g, 3.0);
    const OperatorModel m = plaplace_model(p);
    const Vec3 xi{2.0, 0.0, 0.0};
    CHECK_THAT(m.potential(3.0, xi), Catch::Matchers::WithinAbs(8.0 / 3.0, 1e-14));
    const Vec3 a = m.flux(3.0, xi);
    CHECK_THAT(a[0], Catch::Matchers::WithinAbs(4.0, 1e-14));
    CHECK(a[1] == 0.0);
  }
  SECTION("exponent below the validity floor records a warning") {
    const ExponentField p = exponent_constant(*g, 1.5);
    CHECK_FALSE(plaplace_model(p).validity_warning.empty());
    const ExponentField ok = exponent_constant(*g, 2.0);
    CHECK(plaplace_model(ok).validity_warning.empty());
  }
}

TEST_CASE("curvature-type model evaluators") {
  auto g = build_grid(2, {5, 5}, {1.0, 1.0});
  const ExponentField p = exponent_constant(*g, 4.0);
  const OperatorModel m = mean_curvature_model(p);
  SECTION("zero gradient maps to zero") {
    CHECK(m.potential(4.0, {0, 0, 0}) == 0.0);
    CHECK(norm(m.flux(4.0, {0, 0, 0})) == 0.0);
  }
  SECTION("exponent 2 collapses to the linear flux") {
    const Vec3 xi{1.2, -0.7, 0.3};
    CHECK_THAT(m.potential(2.0, xi), Catch::Matchers::WithinAbs(0.5 * dot(xi, xi), 1e-14));
    const Vec3 a = m.flux(2.0, xi);
    for (int k = 0; k < 3; ++k) CHECK_THAT(a[k], Catch::Matchers::WithinAbs(xi[k], 1e-15));
  }
  SECTION("hand-evaluated point at exponent 4") {
    const Vec3 xi{1.0, 0.0, 0.0};
    CHECK_THAT(m.potential(4.0, xi), Catch::Matchers::WithinAbs(0.75, 1e-14));
    const Vec3 a = m.flux(4.0, xi);
    CHECK_THAT(a[0], Catch::Matchers::WithinAbs(2.0, 1e-14));
  }
}

TEST_CASE("flux is the gradient of the potential") {
  auto g = build_grid(3, {5, 5, 5}, {1.0, 1.0, 1.0});
  const ExponentField p = exponent_affine(*g, {1.0, 0.0, 0.0}, 2.0, 2.5);
  Rng rng(31337);
  for (const bool curvature : {false, true}) {
    const OperatorModel m = curvature ? mean_curvature_model(p) : plaplace_model(p);
    double worst = 0.0;
    for (int s = 0; s < 1000; ++s) {
      const double pe = rng.uniform(2.0, 2.5);
      Vec3 xi = rng.unit_vector(3);
      const double mag = rng.log_uniform(0.1, 10.0);
      for (auto& c : xi) c *= mag;
      const Vec3 a = m.flux(pe, xi);
      const double h = 1e-6 * std::max(1.0, mag);
      for (int k = 0; k < 3; ++k) {
        Vec3 up = xi, dn = xi;
        up[k] += h;
        dn[k] -= h;
        const double fd = (m.potential(pe, up) - m.potential(pe, dn)) / (2.0 * h);
        worst = std::max(worst, std::fabs(fd - a[k]) / std::max(1.0, std::fabs(a[k])));
      }
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("structural conditions hold for both models") {
  auto g = build_grid(3, {5, 5, 5}, {1.0, 1.0, 1.0});
  const ExponentField p = exponent_affine(*g, {1.0, 1.0, 1.0}, 2.0, 2.5);

  SECTION("power-law model, 10^4 samples, convexity constant at the analytic floor") {
    const OperatorModel m = plaplace_model(p);
    const HypothesisReport rep = check_hypotheses(m, p, *g, 10000, 42);
    CHECK(rep.zero_at_zero);
    CHECK(rep.growth_bound);
    CHECK(rep.monotonicity);
    CHECK(rep.uniform_convexity);
    CHECK(rep.sandwich);
    const double floor_analytic = 1.0 / (p.p_plus * std::pow(2.0, p.p_plus));
    const double floor_sampled = power_convexity_floor(p.p_plus);
    CHECK_THAT(floor_sampled, Catch::Matchers::WithinAbs(floor_analytic, 2e-3));
    CHECK(rep.k_estimate >= floor_analytic - 1e-9);
    CHECK(rep.c1_estimate > 0.99);
    CHECK(rep.c1_estimate <= 1.0 + 1e-9);
  }

  SECTION("curvature model at constant exponent 2: quadratic case") {
    const ExponentField p2 = exponent_constant(*g, 2.0);
    const OperatorModel m = mean_curvature_model(p2);
    const HypothesisReport rep = check_hypotheses(m, p2, *g, 10000, 43);
    CHECK(rep.all_pass());
    // the midpoint ratio of a quadratic is identically 1/8
    CHECK_THAT(rep.k_estimate, Catch::Matchers::WithinAbs(0.125, 1e-9));
    CHECK(rep.c1_estimate > 0.99);
  }

  SECTION("deliberately broken normalization is flagged") {
    OperatorModel broken = plaplace_model(p);
    broken.potential = [](double pe, const Vec3& xi) {
      const double n = norm(xi);
      return (n > 0.0 ? std::pow(n, pe) / pe : 0.0) + 1.0;
    };
    const HypothesisReport rep = check_hypotheses(broken, p, *g, 100, 44);
    CHECK_FALSE(rep.zero_at_zero);
    CHECK_FALSE(rep.all_pass());
    CHECK(rep.worst_violation >= 1.0);
  }

  SECTION("sample count must be positive") {
    CHECK_THROWS_AS(check_hypotheses(plaplace_model(p), p, *g, 0, 1), std::invalid_argument);
  }
}

TEST_CASE("verdicts are isotropic for constant exponents") {
  auto g = build_grid(3, {5, 5, 5}, {1.0, 1.0, 1.0});
  const ExponentField p = exponent_constant(*g, 2.3);
  const OperatorModel m = plaplace_model(p);

  const double c = std::cos(0.7), s = std::sin(0.7);
  const double c2 = std::cos(0.4), s2 = std::sin(0.4);
  // rotation about z composed with rotation about x
  const Rotation rot{Vec3{c, -s, 0.0}, Vec3{c2 * s, c2 * c, -s2}, Vec3{s2 * s, s2 * c, c2}};

  const HypothesisReport plain = check_hypotheses(m, p, *g, 4000, 7);
  const HypothesisReport rotated = check_hypotheses(m, p, *g, 4000, 7, &rot);
  CHECK(plain.zero_at_zero == rotated.zero_at_zero);
  CHECK(plain.growth_bound == rotated.growth_bound);
  CHECK(plain.monotonicity == rotated.monotonicity);
  CHECK(plain.uniform_convexity == rotated.uniform_convexity);
  CHECK(plain.sandwich == rotated.sandwich);
  CHECK_THAT(rotated.k_estimate,
             Catch::Matchers::WithinRel(plain.k_estimate, 1e-9));
  CHECK_THAT(rotated.c1_estimate,
             Catch::Matchers::WithinRel(plain.c1_estimate, 1e-9));
}
