#include <cstdio>

#include "varexp/varexp.hpp"

using namespace varexp;

int main() {
  auto g = build_grid(1, {33}, {1.0});
  const ExponentField p = exponent_affine(*g, {1.0, 0.0, 0.0}, 2.0, 2.2);
  ProblemParams pr = make_problem_params(80.0, 1.3, 1.7, plaplace_model(p), p, 1);
  const Functional I = make_energy_I_functional(pr);

  GridFunction u0 = seed_plateau(g, 2.0, 0.25, 1.3, 1.7);
  double best_scale = 1.0, best_val = I.value(u0);
  for (int k = -4; k <= 80; ++k) {
    const double s = std::pow(2.0, 0.5 * k);
    const double v = I.value(scaled(u0, s));
    if (v < best_val) { best_val = v; best_scale = s; }
  }
  MinimizeResult m = minimize(I, scaled(u0, best_scale), 1e-8, 200000);
  std::printf("u1: f=%.8g |r|=%.3e conv=%d iters=%ld min=%.3e max=%.6g\n", m.value,
              m.residual_norm, int(m.converged), m.iterations, min_value(m.u), max_value(m.u));

  GridFunction u1 = m.u;
  for (auto& v : u1.values) v = std::max(v, 0.0);
  const TruncationData trunc = make_truncation(u1);
  const Functional J = make_energy_J_functional(pr, trunc);

  // ray bump profile
  for (double t : {1e-4, 1e-3, 3e-3, 0.01, 0.03, 0.1, 0.3, 1.0})
    std::printf("J(t u1) t=%8.2g -> %.8g\n", t, J.value(scaled(u1, t)));

  MountainPassResult mp = mountain_pass(J, u1, 16, 1e-8, 200000);
  std::printf("mp: status=%d rounds=%ld level=%.8g |r|=%.3e init_max=%.8g diag=%s\n",
              int(mp.status), mp.rounds, mp.level, mp.residual_norm, mp.initial_path_max,
              mp.diagnostics.c_str());
  if (mp.status == MountainPassResult::Status::converged) {
    std::printf("u2: I=%.8g min=%.3e ord=%.3e max=%.6g\n", energy_I(mp.u2, pr), min_value(mp.u2),
                std::max(0.0, max_value(subtracted(mp.u2, u1))), max_value(mp.u2));
  }
  return 0;
}
