#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

#include "varexp/exponent_field.hpp"
#include "varexp/grid.hpp"

namespace varexp {

namespace detail {

/// Weighted modular sum(w_i |v_i / mu|^{p_i}) over matching sample arrays.
inline double modular_samples(std::span<const double> values, std::span<const double> exps,
                              std::span<const double> weights, double mu = 1.0) {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double a = std::fabs(values[i]) / mu;
    if (a > 0.0) s += weights[i] * std::pow(a, exps[i]);
  }
  return s;
}

/// Scale mu* with modular(v / mu*) = 1, by bracketing + bisection on the
/// strictly decreasing map mu -> modular(v / mu). Returns 0 for v == 0.
inline double luxemburg_samples(std::span<const double> values, std::span<const double> exps,
                                std::span<const double> weights, double p_lo, double p_hi) {
  const double rho1 = modular_samples(values, exps, weights);
  if (rho1 == 0.0) return 0.0;

  double est;
  if (std::isfinite(rho1)) {
    est = std::pow(rho1, 2.0 / (p_lo + p_hi));
  } else {
    est = 0.0;
    for (double v : values) est = std::max(est, std::fabs(v));
  }
  est = std::clamp(est, 1e-300, 1e300);

  double lo = est, hi = est;
  int budget = 200;
  while (budget > 0 && modular_samples(values, exps, weights, lo) < 1.0) {
    lo *= 0.5;
    --budget;
  }
  while (budget > 0 && modular_samples(values, exps, weights, hi) > 1.0) {
    hi *= 2.0;
    --budget;
  }

  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double r = modular_samples(values, exps, weights, mid);
    if (std::fabs(r - 1.0) <= 1e-12) break;
    if (r > 1.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-16 * mid) break;
  }
  return mid;
}

}  // namespace detail

// ---- modulars and Luxemburg norms -----------------------------------------

/// Nodal modular: trapezoid-weighted sum of |u_i|^{p(x_i)}.
inline double modular_nodal(const GridFunction& u, const ExponentField& p) {
  const Grid& g = *u.grid;
  if (p.node_values.size() != u.values.size())
    throw std::invalid_argument("modular: exponent field does not match grid");
  return detail::modular_samples(u.values, p.node_values, g.node_weight);
}

/// Cell modular for gradient-magnitude fields: midpoint rule with the
/// exponent sampled at cell centers.
inline double modular_cells(const Grid& g, std::span<const double> cell_mag,
                            const ExponentField& p) {
  if (long(cell_mag.size()) != g.cell_count || long(p.cell_values.size()) != g.cell_count)
    throw std::invalid_argument("modular: cell field does not match grid");
  double s = 0.0;
  for (long c = 0; c < g.cell_count; ++c) {
    const double a = std::fabs(cell_mag[std::size_t(c)]);
    if (a > 0.0) s += std::pow(a, p.cell_values[std::size_t(c)]);
  }
  return s * g.cell_volume;
}

inline double luxemburg_norm_nodal(const GridFunction& u, const ExponentField& p) {
  const Grid& g = *u.grid;
  if (p.node_values.size() != u.values.size())
    throw std::invalid_argument("luxemburg norm: exponent field does not match grid");
  return detail::luxemburg_samples(u.values, p.node_values, g.node_weight, p.p_minus, p.p_plus);
}

inline double luxemburg_norm_cells(const Grid& g, std::span<const double> cell_mag,
                                   const ExponentField& p) {
  if (long(cell_mag.size()) != g.cell_count)
    throw std::invalid_argument("luxemburg norm: cell field does not match grid");
  std::vector<double> w(std::size_t(g.cell_count), g.cell_volume);
  return detail::luxemburg_samples(cell_mag, p.cell_values, w, p.p_minus, p.p_plus);
}

/// The natural solution-space norm: Luxemburg norm of |grad u| over cells.
inline double gradient_luxemburg_norm(const GridFunction& u, const ExponentField& p) {
  return luxemburg_norm_cells(*u.grid, magnitudes(gradient_at_cells(u)), p);
}

// ---- conjugate exponent ----------------------------------------------------

/// Pointwise q with 1/p + 1/q = 1. Requires every sample > 1.
inline ExponentField conjugate(const ExponentField& p) {
  ExponentField q;
  q.family = ExponentFamily::tabulated;
  auto conj = [](double v) {
    if (!(v > 1.0)) throw std::domain_error("conjugate: exponent sample must exceed 1");
    return v / (v - 1.0);
  };
  q.node_values.resize(p.node_values.size());
  q.cell_values.resize(p.cell_values.size());
  for (std::size_t i = 0; i < p.node_values.size(); ++i) q.node_values[i] = conj(p.node_values[i]);
  for (std::size_t i = 0; i < p.cell_values.size(); ++i) q.cell_values[i] = conj(p.cell_values[i]);
  q.p_minus = conj(p.p_plus);
  q.p_plus = conj(p.p_minus);
  return q;
}

// ---- inequality verdicts ----------------------------------------------------

struct HolderVerdict {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// |integral of u v| <= (1/p^- + 1/q^-) |u|_p |v|_q with q conjugate to p.
inline HolderVerdict check_holder(const GridFunction& u, const GridFunction& v,
                                  const ExponentField& p) {
  require_same_grid(u, v);
  const Grid& g = *u.grid;
  double uv = 0.0;
  for (long i = 0; i < g.node_count; ++i) uv += g.node_weight[std::size_t(i)] * u[i] * v[i];
  const ExponentField q = conjugate(p);
  HolderVerdict out;
  out.lhs = std::fabs(uv);
  out.rhs = (1.0 / p.p_minus + 1.0 / q.p_minus) * luxemburg_norm_nodal(u, p) *
            luxemburg_norm_nodal(v, q);
  out.holds = out.lhs <= out.rhs + 1e-12;
  return out;
}

struct ModularRelationVerdict {
  double norm = 0.0;     // Luxemburg norm
  double modular = 0.0;  // modular at scale 1
  double lower = 0.0;    // active sandwich bound
  double upper = 0.0;
  int branch = 0;  // +1: norm > 1, -1: norm < 1, 0: norm within 1e-9 of 1
  bool holds = false;
};

/// The norm/modular sandwich: norm > 1 gives norm^{p^-} <= modular <=
/// norm^{p^+}; norm < 1 swaps the exponents; at norm ~= 1 the modular must
/// be ~= 1.
inline ModularRelationVerdict check_modular_relations(const GridFunction& u,
                                                      const ExponentField& p) {
  ModularRelationVerdict out;
  out.norm = luxemburg_norm_nodal(u, p);
  out.modular = modular_nodal(u, p);
  const double slack = 1e-9 * std::max(1.0, out.modular);
  if (std::fabs(out.norm - 1.0) < 1e-9) {
    out.branch = 0;
    out.lower = out.upper = 1.0;
    out.holds = std::fabs(out.modular - 1.0) < 1e-6;
  } else if (out.norm > 1.0) {
    out.branch = 1;
    out.lower = std::pow(out.norm, p.p_minus);
    out.upper = std::pow(out.norm, p.p_plus);
    out.holds = out.lower - slack <= out.modular && out.modular <= out.upper + slack;
  } else {
    out.branch = -1;
    out.lower = std::pow(out.norm, p.p_plus);
    out.upper = std::pow(out.norm, p.p_minus);
    out.holds = out.lower - slack <= out.modular && out.modular <= out.upper + slack;
  }
  return out;
}

}  // namespace varexp
