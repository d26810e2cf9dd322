#include <cstdio>

#include "varexp/varexp.hpp"

using namespace varexp;

int main() {
  // 1D lam=80 minimize trace
  auto g = build_grid(1, {33}, {1.0});
  const ExponentField p = exponent_affine(*g, {1.0, 0.0, 0.0}, 2.0, 2.2);
  ProblemParams pr = make_problem_params(80.0, 1.3, 1.7, plaplace_model(p), p, 1);
  const Functional I = make_energy_I_functional(pr);

  GridFunction u = seed_plateau(g, 2.0, 0.25, 1.3, 1.7);
  {
    double best_scale = 1.0, best_val = I.value(u);
    for (int k = -4; k <= 80; ++k) {
      const double s = std::pow(2.0, 0.5 * k);
      const double v = I.value(scaled(u, s));
      if (v < best_val) { best_val = v; best_scale = s; }
    }
    std::printf("ray search: best_scale=%g best_val=%g\n", best_scale, best_val);
    u = scaled(u, best_scale);
  }
  for (int chunk = 0; chunk < 12; ++chunk) {
    MinimizeResult r = minimize(I, u, 1e-8, 2000);
    std::printf("after %5d iters(+%ld): f=%.17g |r|=%.3e conv=%d\n", (chunk + 1) * 2000,
                r.iterations, r.value, r.residual_norm, int(r.converged));
    u = r.u;
    if (r.converged) break;
  }

  // then try polish directly
  bool ok = false;
  GridFunction x = u;
  long used = varexp::detail::polish_critical_point(I, x, 1e-8, 20000, -1e300, &ok);
  std::printf("polish: used=%ld ok=%d |r|=%.3e\n", used, int(ok), norm2(I.residual(x)));

  // 3D lam=50: what does the ray search see?
  auto g3 = build_grid(3, {9, 9, 9}, {1.0, 1.0, 1.0});
  const ExponentField p3 = exponent_affine(*g3, {1.0, 0.0, 0.0}, 2.0, 2.4);
  ProblemParams pr3 = make_problem_params(50.0, 1.3, 1.7, plaplace_model(p3), p3, 3);
  const Functional I3 = make_energy_I_functional(pr3);
  GridFunction u3 = seed_plateau(g3, 2.0, 0.25, 1.3, 1.7);
  double best_val = 1e300, best_s = 0;
  for (int k = -4; k <= 80; ++k) {
    const double s = std::pow(2.0, 0.5 * k);
    const double v = I3.value(scaled(u3, s));
    if (k % 8 == 0) std::printf("3D lam=50 ray: s=2^%.1f I=%.6g\n", 0.5 * k, v);
    if (v < best_val) { best_val = v; best_s = s; }
  }
  std::printf("3D lam=50: best s=%g I=%.6g\n", best_s, best_val);
  return 0;
}
