#include <chrono>
#include <cstdio>

#include "varexp/varexp.hpp"

using namespace varexp;

int main() {
  using clock = std::chrono::steady_clock;
  {
    // 1D probe
    auto g = build_grid(1, {33}, {1.0});
    const ExponentField p = exponent_affine(*g, {1.0, 0.0, 0.0}, 2.0, 2.2);
    SolveOptions opt;
    opt.tol = 1e-8;
    opt.hypothesis_samples = 1000;
    for (double lam : {0.0, 5.0, 20.0, 80.0, 320.0}) {
      auto t0 = clock::now();
      ProblemParams pr = make_problem_params(lam, 1.3, 1.7, plaplace_model(p), p, 1);
      SolveReport rep = solve_problem(pr, g, opt);
      auto ms =
          std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - t0).count();
      std::printf(
          "1D lam=%6.1f status=%-15s I1=%12.5g r1=%9.2e iters=%6ld mp_rounds=%5ld I2=%12.5g "
          "c=%12.5g r2=%9.2e ord=%9.2e maxu1=%9.3g [%s] %6lld ms\n",
          lam, to_string(rep.status), rep.I_u1, rep.residual_norm_u1, rep.iterations_minimize,
          rep.mountain_pass_rounds, rep.I_u2, rep.mountain_pass_level, rep.residual_norm_u2,
          rep.ordering_violation, max_value(rep.u1), rep.diagnostics.c_str(),
          (long long)ms);
    }
  }
  {
    // 3D acceptance-scale probe
    auto g = build_grid(3, {9, 9, 9}, {1.0, 1.0, 1.0});
    const ExponentField p = exponent_affine(*g, {1.0, 0.0, 0.0}, 2.0, 2.4);
    SolveOptions opt;
    opt.tol = 1e-6;
    opt.hypothesis_samples = 1000;
    for (double lam : {50.0, 100.0, 200.0, 400.0, 800.0}) {
      auto t0 = clock::now();
      ProblemParams pr = make_problem_params(lam, 1.3, 1.7, plaplace_model(p), p, 3);
      SolveReport rep = solve_problem(pr, g, opt);
      auto ms =
          std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - t0).count();
      std::printf(
          "3D lam=%6.1f status=%-15s I1=%12.5g r1=%9.2e iters=%6ld mp_rounds=%5ld I2=%12.5g "
          "c=%12.5g r2=%9.2e ord=%9.2e maxu1=%9.3g maxu2=%9.3g [%s] %6lld ms\n",
          lam, to_string(rep.status), rep.I_u1, rep.residual_norm_u1, rep.iterations_minimize,
          rep.mountain_pass_rounds, rep.I_u2, rep.mountain_pass_level, rep.residual_norm_u2,
          rep.ordering_violation, max_value(rep.u1), rep.has_u2 ? max_value(rep.u2) : 0.0,
          rep.diagnostics.c_str(), (long long)ms);
    }
  }
  return 0;
}
