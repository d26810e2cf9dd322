#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "varexp/exponent_field.hpp"
#include "varexp/grid.hpp"
#include "varexp/parallel.hpp"
#include "varexp/rng.hpp"

namespace varexp {

/// A quasilinear operator pair: scalar potential A(p, xi) and its gradient
/// flux a(p, xi) = dA/dxi, parameterized by the local exponent value p.
/// Structural conditions checked by check_hypotheses:
///   zero_at_zero      A(p, 0) = 0 at every sampled exponent
///   growth_bound      |a| <= c1 (1 + |xi|^{p-1}) for some finite c1 > 0
///   monotonicity      (a(xi) - a(psi)) . (xi - psi) >= 0, = 0 only at xi = psi
///   uniform_convexity A((xi+psi)/2) <= A(xi)/2 + A(psi)/2 - k |xi-psi|^p
///   sandwich          |xi|^p <= a(xi) . xi <= p A(xi)
struct OperatorModel {
  std::string name;
  double requires_p_at_least = 2.0;
  std::function<double(double, const Vec3&)> potential;
  std::function<Vec3(double, const Vec3&)> flux;
  std::string validity_warning;  // set when the exponent field dips below the floor
};

namespace detail {

inline std::string validity_note(const char* name, const ExponentField& p, double floor) {
  if (p.p_minus >= floor) return {};
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%s: exponent minimum %.6g is below the model validity floor %.3g; "
                "derivative checks near zero gradient are skipped",
                name, p.p_minus, floor);
  return buf;
}

}  // namespace detail

/// A = |xi|^p / p, a = |xi|^{p-2} xi (continuously extended by a(0) = 0).
inline OperatorModel plaplace_model(const ExponentField& p) {
  OperatorModel m;
  m.name = "plaplace";
  m.requires_p_at_least = 2.0;
  m.validity_warning = detail::validity_note("plaplace", p, 2.0);
  m.potential = [](double pe, const Vec3& xi) {
    const double n = norm(xi);
    return n > 0.0 ? std::pow(n, pe) / pe : 0.0;
  };
  m.flux = [](double pe, const Vec3& xi) {
    const double n = norm(xi);
    if (n == 0.0) return Vec3{0, 0, 0};
    const double s = std::pow(n, pe - 2.0);
    return Vec3{s * xi[0], s * xi[1], s * xi[2]};
  };
  return m;
}

/// A = ((1 + |xi|^2)^{p/2} - 1) / p, a = (1 + |xi|^2)^{(p-2)/2} xi.
inline OperatorModel mean_curvature_model(const ExponentField& p) {
  OperatorModel m;
  m.name = "mean_curvature";
  m.requires_p_at_least = 2.0;
  m.validity_warning = detail::validity_note("mean_curvature", p, 2.0);
  m.potential = [](double pe, const Vec3& xi) {
    const double s = dot(xi, xi);
    return (std::pow(1.0 + s, 0.5 * pe) - 1.0) / pe;
  };
  m.flux = [](double pe, const Vec3& xi) {
    const double s = std::pow(1.0 + dot(xi, xi), 0.5 * (pe - 2.0));
    return Vec3{s * xi[0], s * xi[1], s * xi[2]};
  };
  return m;
}

struct HypothesisReport {
  bool zero_at_zero = false;
  bool growth_bound = false;
  bool monotonicity = false;
  bool uniform_convexity = false;
  bool sandwich = false;
  double c1_estimate = 0.0;  // empirical max of |a| / (1 + |xi|^{p-1})
  double k_estimate = 0.0;   // empirical min of the midpoint convexity ratio
  double worst_violation = 0.0;
  long samples = 0;

  bool all_pass() const {
    return zero_at_zero && growth_bound && monotonicity && uniform_convexity && sandwich;
  }
};

using Rotation = std::array<Vec3, 3>;  // row-major orthogonal matrix

inline Vec3 rotate(const Rotation& r, const Vec3& v) {
  return {dot(r[0], v), dot(r[1], v), dot(r[2], v)};
}

/// Monte-Carlo falsification sweep over random (x, xi, psi) triples with the
/// gradient magnitudes log-uniform in [1e-3, 1e3]. Constants are empirical
/// extrema over the sample, not proofs. `rotation`, when given, is applied
/// to every sampled gradient (used to probe isotropy).
inline HypothesisReport check_hypotheses(const OperatorModel& model, const ExponentField& p,
                                         const Grid& grid, long n_samples, std::uint64_t seed,
                                         const Rotation* rotation = nullptr) {
  if (n_samples < 1) throw std::invalid_argument("check_hypotheses: need at least one sample");
  HypothesisReport rep;
  rep.samples = n_samples;

  // Zero-gradient normalization at every sampled exponent value.
  double worst_zero = 0.0;
  const Vec3 zero{0, 0, 0};
  for (double pe : p.cell_values)
    worst_zero = std::max(worst_zero, std::fabs(model.potential(pe, zero)));
  for (double pe : p.node_values)
    worst_zero = std::max(worst_zero, std::fabs(model.potential(pe, zero)));
  rep.zero_at_zero = (worst_zero == 0.0);

  struct Chunk {
    double c1_max = 0.0;
    double k_min = std::numeric_limits<double>::infinity();
    double monotone_min = 0.0;        // most negative inner product seen
    double equality_gap = 0.0;        // largest |xi-psi| among near-zero inner products
    double sandwich_viol = 0.0;       // worst relative violation of either bound
    bool finite = true;
  };

  const bool skip_near_zero = !model.validity_warning.empty();
  auto chunks = map_chunked<Chunk>(n_samples, 2048, [&](long chunk, long b, long e) {
    Rng rng = Rng::split(seed, std::uint64_t(chunk));
    Chunk acc;
    for (long s = b; s < e; ++s) {
      const long c = rng.uniform_index(grid.cell_count);
      const double pe = p.cell_values[std::size_t(c)];
      auto draw = [&]() {
        Vec3 v = rng.unit_vector(grid.dim);
        const double mag = rng.log_uniform(1e-3, 1e3);
        for (int k = 0; k < 3; ++k) v[k] *= mag;
        if (rotation) v = rotate(*rotation, v);
        return v;
      };
      const Vec3 xi = draw(), psi = draw();
      const Vec3 axi = model.flux(pe, xi), apsi = model.flux(pe, psi);
      const double nxi = norm(xi);

      // growth envelope
      const double ratio = norm(axi) / (1.0 + std::pow(nxi, pe - 1.0));
      if (!std::isfinite(ratio)) acc.finite = false;
      acc.c1_max = std::max(acc.c1_max, ratio);

      // monotone flux difference
      const Vec3 dxi{xi[0] - psi[0], xi[1] - psi[1], xi[2] - psi[2]};
      const Vec3 da{axi[0] - apsi[0], axi[1] - apsi[1], axi[2] - apsi[2]};
      const double inner = dot(da, dxi);
      acc.monotone_min = std::min(acc.monotone_min, inner);
      if (inner < 1e-12 * (1.0 + norm(dxi)))
        acc.equality_gap = std::max(acc.equality_gap, norm(dxi));

      // midpoint convexity ratio; skip degenerate pairs (no information, all
      // cancellation)
      const double gap = norm(dxi);
      if (gap > 1e-9 * (nxi + norm(psi))) {
        const Vec3 mid{0.5 * (xi[0] + psi[0]), 0.5 * (xi[1] + psi[1]), 0.5 * (xi[2] + psi[2])};
        const double num = 0.5 * model.potential(pe, xi) + 0.5 * model.potential(pe, psi) -
                           model.potential(pe, mid);
        const double den = std::pow(gap, pe);
        if (den > 1e-300 && std::isfinite(den)) acc.k_min = std::min(acc.k_min, num / den);
      }

      // flux/potential sandwich (skipped near xi = 0 when the exponent dips
      // below the model's validity floor: the flux is only continuous there)
      if (!(skip_near_zero && nxi < 1e-2)) {
        const double low = std::pow(nxi, pe);
        const double mid_term = dot(axi, xi);
        const double high = pe * model.potential(pe, xi);
        const double scale = std::max(1.0, low);
        acc.sandwich_viol = std::max(acc.sandwich_viol, (low - mid_term) / scale);
        acc.sandwich_viol = std::max(acc.sandwich_viol, (mid_term - high) / std::max(1.0, high));
      }
    }
    return acc;
  });

  Chunk total;
  for (const Chunk& c : chunks) {
    total.c1_max = std::max(total.c1_max, c.c1_max);
    total.k_min = std::min(total.k_min, c.k_min);
    total.monotone_min = std::min(total.monotone_min, c.monotone_min);
    total.equality_gap = std::max(total.equality_gap, c.equality_gap);
    total.sandwich_viol = std::max(total.sandwich_viol, c.sandwich_viol);
    total.finite = total.finite && c.finite;
  }

  rep.c1_estimate = total.c1_max;
  rep.growth_bound = total.finite && total.c1_max > 0.0;
  rep.monotonicity = total.monotone_min >= -1e-12 && total.equality_gap < 1e-8;
  rep.k_estimate = std::isfinite(total.k_min) ? total.k_min : 0.0;
  rep.uniform_convexity = rep.k_estimate > 0.0;
  rep.sandwich = total.sandwich_viol <= 1e-12;

  rep.worst_violation = std::max({worst_zero, std::max(0.0, -total.monotone_min),
                                  total.sandwich_viol, std::max(0.0, -rep.k_estimate)});
  return rep;
}

}  // namespace varexp
