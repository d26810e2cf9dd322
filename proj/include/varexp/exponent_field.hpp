#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "varexp/grid.hpp"

namespace varexp {

enum class ExponentFamily { constant, affine, radial, tabulated };

inline const char* family_name(ExponentFamily f) {
  switch (f) {
    case ExponentFamily::constant: return "constant";
    case ExponentFamily::affine: return "affine";
    case ExponentFamily::radial: return "radial";
    default: return "tabulated";
  }
}

/// The variable exponent sampled once at grid nodes and cell centers and
/// frozen. Every sample must exceed 1; p_minus/p_plus are the extrema over
/// all samples.
struct ExponentField {
  ExponentFamily family = ExponentFamily::constant;
  std::vector<double> node_values;
  std::vector<double> cell_values;
  double p_minus = 0.0;
  double p_plus = 0.0;

  // construction parameters, kept for config echo
  double value = 0.0, lo = 0.0, hi = 0.0;
  Vec3 direction{0, 0, 0};
  Vec3 center{0, 0, 0};

  std::string describe() const {
    char buf[160];
    switch (family) {
      case ExponentFamily::constant:
        std::snprintf(buf, sizeof buf, "constant(%g)", value);
        break;
      case ExponentFamily::affine:
        std::snprintf(buf, sizeof buf, "affine(dir=[%g %g %g], lo=%g, hi=%g)", direction[0],
                      direction[1], direction[2], lo, hi);
        break;
      case ExponentFamily::radial:
        std::snprintf(buf, sizeof buf, "radial(center=[%g %g %g], lo=%g, hi=%g)", center[0],
                      center[1], center[2], lo, hi);
        break;
      default:
        std::snprintf(buf, sizeof buf, "tabulated(%zu nodes)", node_values.size());
    }
    return buf;
  }
};

namespace detail {

inline void finalize_exponent(ExponentField& p) {
  double mn = p.node_values.empty() ? 0.0 : p.node_values[0];
  double mx = mn;
  auto scan = [&](const std::vector<double>& vals, const char* where) {
    for (double v : vals) {
      if (!(v > 1.0) || !std::isfinite(v))
        throw std::domain_error(std::string("exponent field: ") + where +
                                " sample must satisfy p > 1");
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
  };
  scan(p.node_values, "node");
  scan(p.cell_values, "cell");
  p.p_minus = mn;
  p.p_plus = mx;
}

template <class PointFn>
ExponentField sample_exponent(const Grid& g, PointFn&& f) {
  ExponentField p;
  p.node_values.resize(std::size_t(g.node_count));
  p.cell_values.resize(std::size_t(g.cell_count));
  for (long n = 0; n < g.node_count; ++n) p.node_values[std::size_t(n)] = f(g.node_position(n));
  for (long c = 0; c < g.cell_count; ++c) p.cell_values[std::size_t(c)] = f(g.cell_center(c));
  return p;
}

}  // namespace detail

inline ExponentField exponent_constant(const Grid& g, double c) {
  ExponentField p = detail::sample_exponent(g, [&](const Vec3&) { return c; });
  p.family = ExponentFamily::constant;
  p.value = c;
  detail::finalize_exponent(p);
  return p;
}

/// p(x) = lo + (hi - lo) * s, where s is the normalized projection of x onto
/// `direction` over the box (s = 0 at one face, s = 1 at the opposite one).
inline ExponentField exponent_affine(const Grid& g, const Vec3& direction, double lo, double hi) {
  const double dn = norm(direction);
  if (!(dn > 0.0)) throw std::invalid_argument("affine exponent: direction must be nonzero");
  Vec3 d{direction[0] / dn, direction[1] / dn, direction[2] / dn};
  double smin = 0.0, smax = 0.0;
  for (int k = 0; k < g.dim; ++k) {
    smin += std::min(0.0, d[k] * g.extents[k]);
    smax += std::max(0.0, d[k] * g.extents[k]);
  }
  if (!(smax > smin)) throw std::invalid_argument("affine exponent: direction degenerate on box");
  ExponentField p = detail::sample_exponent(g, [&](const Vec3& x) {
    const double s = (dot(d, x) - smin) / (smax - smin);
    return lo + (hi - lo) * s;
  });
  p.family = ExponentFamily::affine;
  p.direction = direction;
  p.lo = lo;
  p.hi = hi;
  detail::finalize_exponent(p);
  return p;
}

/// p(x) = lo + (hi - lo) * min(1, |x - center| / r_max), r_max the largest
/// distance from `center` to a box corner.
inline ExponentField exponent_radial(const Grid& g, const Vec3& center, double lo, double hi) {
  double rmax = 0.0;
  for (unsigned b = 0; b < 8; ++b) {
    Vec3 corner{0, 0, 0};
    for (int k = 0; k < g.dim; ++k) corner[k] = ((b >> k) & 1) ? g.extents[k] : 0.0;
    Vec3 d{corner[0] - center[0], corner[1] - center[1], corner[2] - center[2]};
    for (int k = g.dim; k < 3; ++k) d[k] = 0.0;
    rmax = std::max(rmax, norm(d));
  }
  if (!(rmax > 0.0)) throw std::invalid_argument("radial exponent: degenerate box/center");
  ExponentField p = detail::sample_exponent(g, [&](const Vec3& x) {
    Vec3 d{x[0] - center[0], x[1] - center[1], x[2] - center[2]};
    for (int k = g.dim; k < 3; ++k) d[k] = 0.0;
    return lo + (hi - lo) * std::min(1.0, norm(d) / rmax);
  });
  p.family = ExponentFamily::radial;
  p.center = center;
  p.lo = lo;
  p.hi = hi;
  detail::finalize_exponent(p);
  return p;
}

/// Node values given; cell-center values are the corner averages (the
/// multilinear interpolant at the center).
inline ExponentField exponent_tabulated(const Grid& g, std::span<const double> node_values) {
  if (long(node_values.size()) != g.node_count)
    throw std::invalid_argument("tabulated exponent: need one value per grid node");
  ExponentField p;
  p.family = ExponentFamily::tabulated;
  p.node_values.assign(node_values.begin(), node_values.end());
  p.cell_values.resize(std::size_t(g.cell_count));
  const int ncorner = 1 << g.dim;
  for (long c = 0; c < g.cell_count; ++c) {
    auto cm = g.cell_multi(c);
    double s = 0.0;
    for (unsigned b = 0; b < unsigned(ncorner); ++b)
      s += p.node_values[std::size_t(g.corner_node(cm, b))];
    p.cell_values[std::size_t(c)] = s / double(ncorner);
  }
  detail::finalize_exponent(p);
  return p;
}

}  // namespace varexp
