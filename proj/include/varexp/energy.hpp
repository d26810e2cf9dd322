#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "varexp/lebesgue.hpp"
#include "varexp/operators.hpp"
#include "varexp/rng.hpp"

namespace varexp {

/// t^e for t > 0, else 0. The positive-part powers below all use this
/// convention so that fractional exponents never see a negative base.
inline double pow_pos(double t, double e) { return t > 0.0 ? std::pow(t, e) : 0.0; }

/// Problem data for -div(a(x, grad u)) = lambda (u^{gamma-1} - u^{beta-1}).
/// Requires 1 < beta < gamma < p^-; the compliance flag additionally records
/// whether p^+ < min{dim, dim p^- / (dim - p^-)} (the regime the two-solution
/// statement covers), without gating any computation on it.
struct ProblemParams {
  double lambda = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  OperatorModel op;
  ExponentField p;
  int dim = 0;
  bool theorem_compliant = false;
};

inline bool compliance_window(int dim, double p_minus, double p_plus) {
  double bound = double(dim);
  if (p_minus < double(dim)) bound = std::min(bound, dim * p_minus / (double(dim) - p_minus));
  return p_plus < bound;
}

inline ProblemParams make_problem_params(double lambda, double beta, double gamma,
                                         OperatorModel op, ExponentField p, int dim) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("params: lambda must be nonnegative");
  if (!(1.0 < beta && beta < gamma && gamma < p.p_minus))
    throw std::invalid_argument("params: need 1 < beta < gamma < min p(x)");
  ProblemParams pr;
  pr.lambda = lambda;
  pr.beta = beta;
  pr.gamma = gamma;
  pr.op = std::move(op);
  pr.p = std::move(p);
  pr.dim = dim;
  pr.theorem_compliant = compliance_window(dim, pr.p.p_minus, pr.p.p_plus);
  return pr;
}

// ---- operator part ---------------------------------------------------------

/// Midpoint-rule quadrature of the potential over cells.
inline double operator_energy(const GridFunction& u, const OperatorModel& model,
                              const ExponentField& p) {
  const Grid& g = *u.grid;
  const auto grad = gradient_at_cells(u);
  double s = 0.0;
  for (long c = 0; c < g.cell_count; ++c)
    s += model.potential(p.cell_values[std::size_t(c)], grad[std::size_t(c)]);
  return s * g.cell_volume;
}

/// Exact gradient of operator_energy with respect to nodal values: scatter
/// vol * flux_k * (+/-1) / (2^{d-1} h_k) to each cell corner. Boundary rows
/// are not zeroed here; callers handling Dirichlet data do that.
inline void add_operator_residual(const GridFunction& u, const OperatorModel& model,
                                  const ExponentField& p, std::vector<double>& out) {
  const Grid& g = *u.grid;
  const auto grad = gradient_at_cells(u);
  const int ncorner = 1 << g.dim;
  const double pairs = double(ncorner / 2);
  for (long c = 0; c < g.cell_count; ++c) {
    auto cm = g.cell_multi(c);
    const Vec3 flux = model.flux(p.cell_values[std::size_t(c)], grad[std::size_t(c)]);
    for (unsigned b = 0; b < unsigned(ncorner); ++b) {
      const long n = g.corner_node(cm, b);
      double contrib = 0.0;
      for (int k = 0; k < g.dim; ++k) {
        const double sgn = ((b >> k) & 1) ? 1.0 : -1.0;
        contrib += sgn * flux[k] / (pairs * g.spacing[k]);
      }
      out[std::size_t(n)] += g.cell_volume * contrib;
    }
  }
}

// ---- full energy -------------------------------------------------------------

/// Split of the energy into its lambda-independent pieces:
/// value = op - (lambda/gamma) s_gamma + (lambda/beta) s_beta. Useful when
/// re-evaluating the same state across a lambda scan.
struct EnergyParts {
  double op = 0.0;
  double s_gamma = 0.0;  // integral of u_+^gamma
  double s_beta = 0.0;   // integral of u_+^beta
  double at(double lambda, double beta, double gamma) const {
    return op - lambda / gamma * s_gamma + lambda / beta * s_beta;
  }
};

inline EnergyParts energy_parts(const GridFunction& u, const ProblemParams& pr) {
  const Grid& g = *u.grid;
  EnergyParts parts;
  parts.op = operator_energy(u, pr.op, pr.p);
  for (long i = 0; i < g.node_count; ++i) {
    const double w = g.node_weight[std::size_t(i)];
    parts.s_gamma += w * pow_pos(u[i], pr.gamma);
    parts.s_beta += w * pow_pos(u[i], pr.beta);
  }
  return parts;
}

inline double energy_I(const GridFunction& u, const ProblemParams& pr) {
  return energy_parts(u, pr).at(pr.lambda, pr.beta, pr.gamma);
}

/// Exact discrete gradient of energy_I; zero at boundary nodes.
inline GridFunction residual_I(const GridFunction& u, const ProblemParams& pr) {
  const Grid& g = *u.grid;
  GridFunction r = GridFunction::zeros(u.grid);
  add_operator_residual(u, pr.op, pr.p, r.values);
  for (long i = 0; i < g.node_count; ++i) {
    const double w = g.node_weight[std::size_t(i)];
    r[i] += pr.lambda * w * (pow_pos(u[i], pr.beta - 1.0) - pow_pos(u[i], pr.gamma - 1.0));
  }
  enforce_dirichlet(r);
  return r;
}

// ---- truncated reaction -------------------------------------------------------

/// Reaction frozen above the reference value and zeroed below 0:
///   t < 0:              0
///   0 <= t <= ref:      t^{gamma-1} - t^{beta-1}
///   t > ref:            ref^{gamma-1} - ref^{beta-1}
inline double truncation_g(double t, double ref, double beta, double gamma) {
  if (ref < 0.0) throw std::domain_error("truncation: reference value must be nonnegative");
  if (t < 0.0) return 0.0;
  const double s = std::min(t, ref);
  double v = pow_pos(s, gamma - 1.0) - pow_pos(s, beta - 1.0);
  return v;
}

/// Antiderivative of truncation_g in t, in closed form per branch.
inline double truncation_G(double t, double ref, double beta, double gamma) {
  if (ref < 0.0) throw std::domain_error("truncation: reference value must be nonnegative");
  if (t <= 0.0) return 0.0;
  if (t <= ref) return pow_pos(t, gamma) / gamma - pow_pos(t, beta) / beta;
  const double plateau = pow_pos(ref, gamma - 1.0) - pow_pos(ref, beta - 1.0);
  return pow_pos(ref, gamma) / gamma - pow_pos(ref, beta) / beta + (t - ref) * plateau;
}

/// The first solution, frozen as the truncation reference. Must be
/// nonnegative up to tiny negative noise, which is clamped to zero.
struct TruncationData {
  GridFunction reference;
};

inline TruncationData make_truncation(const GridFunction& u1) {
  if (min_value(u1) < -1e-10)
    throw std::domain_error("truncation: reference solution has negative values");
  TruncationData t;
  t.reference = u1;
  for (auto& v : t.reference.values) v = std::max(v, 0.0);
  return t;
}

inline double energy_J(const GridFunction& u, const ProblemParams& pr,
                       const TruncationData& trunc) {
  require_same_grid(u, trunc.reference);
  const Grid& g = *u.grid;
  double reaction = 0.0;
  for (long i = 0; i < g.node_count; ++i)
    reaction +=
        g.node_weight[std::size_t(i)] * truncation_G(u[i], trunc.reference[i], pr.beta, pr.gamma);
  return operator_energy(u, pr.op, pr.p) - pr.lambda * reaction;
}

inline GridFunction residual_J(const GridFunction& u, const ProblemParams& pr,
                               const TruncationData& trunc) {
  require_same_grid(u, trunc.reference);
  const Grid& g = *u.grid;
  GridFunction r = GridFunction::zeros(u.grid);
  add_operator_residual(u, pr.op, pr.p, r.values);
  for (long i = 0; i < g.node_count; ++i)
    r[i] -= pr.lambda * g.node_weight[std::size_t(i)] *
            truncation_g(u[i], trunc.reference[i], pr.beta, pr.gamma);
  enforce_dirichlet(r);
  return r;
}

// ---- embedding constant ---------------------------------------------------------

/// Estimate of inf over nontrivial u of
///   integral((1/p)|grad u|^p) / integral(|u|^{p^-})
/// subject to the solution-space norm exceeding 1, by projected descent on
/// the ratio from several random starts (plus any caller-provided seeds).
/// The result is an upper bound on the discrete infimum.
inline double lambda1_estimate(const ExponentField& p, std::shared_ptr<const Grid> grid,
                               int n_starts = 8, std::uint64_t seed = 20240901,
                               const std::vector<GridFunction>& extra_seeds = {},
                               GridFunction* argmin_out = nullptr) {
  const Grid& g = *grid;
  const OperatorModel op = plaplace_model(p);
  const double pm = p.p_minus;

  auto numerator = [&](const GridFunction& u) { return operator_energy(u, op, p); };
  auto denominator = [&](const GridFunction& u) {
    double s = 0.0;
    for (long i = 0; i < g.node_count; ++i)
      s += g.node_weight[std::size_t(i)] * std::pow(std::fabs(u[i]), pm);
    return s;
  };
  auto ratio_grad = [&](const GridFunction& u, double num, double den) {
    GridFunction r = GridFunction::zeros(u.grid);
    add_operator_residual(u, op, p, r.values);
    const double ratio = num / den;
    for (long i = 0; i < g.node_count; ++i) {
      const double t = u[i];
      const double dden = pm * g.node_weight[std::size_t(i)] *
                          (t == 0.0 ? 0.0 : std::copysign(std::pow(std::fabs(t), pm - 1.0), t));
      r[i] = (r[i] - ratio * dden) / den;
    }
    enforce_dirichlet(r);
    return r;
  };
  auto project = [&](GridFunction& u) {
    const double n = gradient_luxemburg_norm(u, p);
    if (n <= 1.0 && n > 0.0) {
      const double s = (1.0 + 1e-6) / n;
      for (auto& v : u.values) v *= s;
    }
  };

  double best = std::numeric_limits<double>::infinity();
  std::vector<GridFunction> starts = extra_seeds;
  Rng rng(seed);
  for (int s = 0; s < n_starts; ++s) {
    GridFunction u = GridFunction::zeros(grid);
    for (long i = 0; i < g.node_count; ++i)
      if (!g.boundary[std::size_t(i)]) u[i] = rng.uniform(0.1, 1.0);
    starts.push_back(std::move(u));
  }

  for (GridFunction u : starts) {
    enforce_dirichlet(u);
    if (max_abs(u) == 0.0) continue;
    {
      const double n = gradient_luxemburg_norm(u, p);
      if (n > 0.0) {
        const double s = 1.25 / n;
        for (auto& v : u.values) v *= s;
      }
    }
    double num = numerator(u), den = denominator(u);
    double val = num / den;
    double step = 1.0;
    for (int it = 0; it < 2000; ++it) {
      GridFunction gr = ratio_grad(u, num, den);
      const double gn = norm2(gr);
      if (gn <= 1e-12 * std::max(1.0, val)) break;
      bool accepted = false;
      for (int back = 0; back < 50; ++back) {
        GridFunction cand = u;
        axpy(-step, gr, cand);
        project(cand);
        const double cnum = numerator(cand), cden = denominator(cand);
        if (cden > 0.0 && cnum / cden < val - 1e-16 * std::fabs(val)) {
          u = std::move(cand);
          num = cnum;
          den = cden;
          val = cnum / cden;
          accepted = true;
          step *= 2.0;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
    }
    if (val < best) {
      best = val;
      if (argmin_out) *argmin_out = u;
    }
  }
  return best;
}

}  // namespace varexp
