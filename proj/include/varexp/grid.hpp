#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <memory>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace varexp {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Uniform tensor mesh on the box [0, extents[0]] x ... with node counts
/// shape[k] per axis. Nodes and cells are stored row-major; trailing axes
/// beyond `dim` have extent one so the same index arithmetic covers 1D-3D.
struct Grid {
  int dim = 0;
  std::array<long, 3> shape{1, 1, 1};      // nodes per axis
  std::array<long, 3> cells{1, 1, 1};      // cells per axis (shape - 1)
  std::array<double, 3> extents{0, 0, 0};  // box side lengths
  std::array<double, 3> spacing{0, 0, 0};
  long node_count = 0;
  long cell_count = 0;
  double cell_volume = 0.0;
  std::vector<unsigned char> boundary;  // 1 at nodes with any index at an axis end
  std::vector<double> node_weight;      // trapezoid quadrature weights

  long node_index(long i, long j, long k) const {
    return (i * shape[1] + j) * shape[2] + k;
  }
  std::array<long, 3> node_multi(long idx) const {
    std::array<long, 3> m;
    m[2] = idx % shape[2];
    idx /= shape[2];
    m[1] = idx % shape[1];
    m[0] = idx / shape[1];
    return m;
  }
  long cell_index(long i, long j, long k) const {
    return (i * cells[1] + j) * cells[2] + k;
  }
  std::array<long, 3> cell_multi(long idx) const {
    std::array<long, 3> m;
    m[2] = idx % cells[2];
    idx /= cells[2];
    m[1] = idx % cells[1];
    m[0] = idx / cells[1];
    return m;
  }
  Vec3 node_position(long idx) const {
    auto m = node_multi(idx);
    return {m[0] * spacing[0], m[1] * spacing[1], m[2] * spacing[2]};
  }
  Vec3 cell_center(long idx) const {
    auto m = cell_multi(idx);
    Vec3 x{0, 0, 0};
    for (int k = 0; k < dim; ++k) x[k] = (m[k] + 0.5) * spacing[k];
    return x;
  }
  /// Node index of cell corner `bits` (bit k set = high side along axis k).
  long corner_node(const std::array<long, 3>& cell, unsigned bits) const {
    return node_index(cell[0] + ((bits >> 0) & 1), cell[1] + ((bits >> 1) & 1),
                      cell[2] + ((bits >> 2) & 1));
  }
  long interior_count() const {
    long n = 1;
    for (int k = 0; k < dim; ++k) n *= shape[k] - 2;
    return n;
  }
};

inline std::shared_ptr<const Grid> build_grid(int dim, std::span<const long> shape,
                                              std::span<const double> extents) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("grid: dim must be 1, 2 or 3");
  if (long(shape.size()) < dim || long(extents.size()) < dim)
    throw std::invalid_argument("grid: shape/extents must provide one entry per axis");
  auto g = std::make_shared<Grid>();
  g->dim = dim;
  g->node_count = 1;
  g->cell_count = 1;
  g->cell_volume = 1.0;
  for (int k = 0; k < dim; ++k) {
    if (shape[k] < 3)
      throw std::invalid_argument("grid: shape[" + std::to_string(k) + "] must be >= 3");
    if (!(extents[k] > 0.0))
      throw std::invalid_argument("grid: extents[" + std::to_string(k) + "] must be > 0");
    g->shape[k] = shape[k];
    g->cells[k] = shape[k] - 1;
    g->extents[k] = extents[k];
    g->spacing[k] = extents[k] / double(shape[k] - 1);
    g->node_count *= g->shape[k];
    g->cell_count *= g->cells[k];
    g->cell_volume *= g->spacing[k];
  }
  g->boundary.assign(std::size_t(g->node_count), 0);
  g->node_weight.assign(std::size_t(g->node_count), 0.0);
  for (long n = 0; n < g->node_count; ++n) {
    auto m = g->node_multi(n);
    double w = 1.0;
    bool bnd = false;
    for (int k = 0; k < dim; ++k) {
      const bool edge = (m[k] == 0 || m[k] == g->shape[k] - 1);
      bnd = bnd || edge;
      w *= g->spacing[k] * (edge ? 0.5 : 1.0);
    }
    g->boundary[std::size_t(n)] = bnd ? 1 : 0;
    g->node_weight[std::size_t(n)] = w;
  }
  return g;
}

inline std::shared_ptr<const Grid> build_grid(int dim, std::initializer_list<long> shape,
                                              std::initializer_list<double> extents) {
  return build_grid(dim, std::span<const long>(shape.begin(), shape.size()),
                    std::span<const double>(extents.begin(), extents.size()));
}

/// Nodal real values on a grid. Candidate solutions of the boundary value
/// problem must vanish on boundary nodes; plain quadrature data need not.
struct GridFunction {
  std::shared_ptr<const Grid> grid;
  std::vector<double> values;

  static GridFunction zeros(std::shared_ptr<const Grid> g) {
    GridFunction f;
    f.values.assign(std::size_t(g->node_count), 0.0);
    f.grid = std::move(g);
    return f;
  }
  static GridFunction constant(std::shared_ptr<const Grid> g, double c) {
    GridFunction f = zeros(std::move(g));
    for (auto& v : f.values) v = c;
    return f;
  }
  double& operator[](long i) { return values[std::size_t(i)]; }
  double operator[](long i) const { return values[std::size_t(i)]; }
  long size() const { return long(values.size()); }
};

inline void require_same_grid(const GridFunction& a, const GridFunction& b) {
  if (a.grid.get() != b.grid.get() && (!a.grid || !b.grid || a.grid->shape != b.grid->shape ||
                                       a.grid->extents != b.grid->extents))
    throw std::invalid_argument("grid functions live on different grids");
}

inline void enforce_dirichlet(GridFunction& u) {
  const Grid& g = *u.grid;
  for (long n = 0; n < g.node_count; ++n)
    if (g.boundary[std::size_t(n)]) u[n] = 0.0;
}

inline bool satisfies_dirichlet(const GridFunction& u, double tol = 0.0) {
  const Grid& g = *u.grid;
  for (long n = 0; n < g.node_count; ++n)
    if (g.boundary[std::size_t(n)] && std::fabs(u[n]) > tol) return false;
  return true;
}

// ---- elementwise helpers -------------------------------------------------

inline GridFunction scaled(const GridFunction& u, double s) {
  GridFunction r = u;
  for (auto& v : r.values) v *= s;
  return r;
}
inline void axpy(double a, const GridFunction& x, GridFunction& y) {
  require_same_grid(x, y);
  for (long i = 0; i < x.size(); ++i) y[i] += a * x[i];
}
inline GridFunction added(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b);
  GridFunction r = a;
  for (long i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}
inline GridFunction subtracted(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b);
  GridFunction r = a;
  for (long i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}
/// (1 - t) a + t b
inline GridFunction blend(double t, const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b);
  GridFunction r = a;
  for (long i = 0; i < r.size(); ++i) r[i] = (1.0 - t) * a[i] + t * b[i];
  return r;
}
inline double dot(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b);
  double s = 0.0;
  for (long i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
inline double norm2(const GridFunction& a) { return std::sqrt(dot(a, a)); }
inline double max_abs(const GridFunction& a) {
  double m = 0.0;
  for (double v : a.values) m = std::max(m, std::fabs(v));
  return m;
}
inline double min_value(const GridFunction& a) {
  double m = a.values.empty() ? 0.0 : a.values[0];
  for (double v : a.values) m = std::min(m, v);
  return m;
}
inline double max_value(const GridFunction& a) {
  double m = a.values.empty() ? 0.0 : a.values[0];
  for (double v : a.values) m = std::max(m, v);
  return m;
}

/// Nodewise positive/negative parts: u = u_plus - u_minus, both nonnegative,
/// complementary at every node.
inline std::pair<GridFunction, GridFunction> split_parts(const GridFunction& u) {
  GridFunction up = u, um = u;
  for (long i = 0; i < u.size(); ++i) {
    up[i] = std::max(u[i], 0.0);
    um[i] = std::max(-u[i], 0.0);
  }
  return {up, um};
}

// ---- quadrature ----------------------------------------------------------

inline double integrate_nodal(const Grid& g, std::span<const double> f) {
  if (long(f.size()) != g.node_count)
    throw std::invalid_argument("integrate_nodal: field size does not match grid");
  double s = 0.0;
  for (long i = 0; i < g.node_count; ++i) s += g.node_weight[std::size_t(i)] * f[std::size_t(i)];
  return s;
}
inline double integrate_nodal(const GridFunction& u) {
  return integrate_nodal(*u.grid, u.values);
}
inline double integrate_cells(const Grid& g, std::span<const double> f) {
  if (long(f.size()) != g.cell_count)
    throw std::invalid_argument("integrate_cells: field size does not match grid");
  double s = 0.0;
  for (double v : f) s += v;
  return s * g.cell_volume;
}

// ---- cell-centered gradient ----------------------------------------------

/// Gradient of the multilinear interpolant evaluated at each cell center:
/// along axis k, the average of the 2^(d-1) forward edge differences of the
/// cell. Exact for affine nodal data.
inline std::vector<Vec3> gradient_at_cells(const GridFunction& u) {
  const Grid& g = *u.grid;
  std::vector<Vec3> grad(std::size_t(g.cell_count), Vec3{0, 0, 0});
  const int ncorner = 1 << g.dim;
  const double pairs = double(ncorner / 2);
  for (long c = 0; c < g.cell_count; ++c) {
    auto cm = g.cell_multi(c);
    Vec3 acc{0, 0, 0};
    for (unsigned b = 0; b < unsigned(ncorner); ++b) {
      const double v = u[g.corner_node(cm, b)];
      for (int k = 0; k < g.dim; ++k) acc[k] += ((b >> k) & 1) ? v : -v;
    }
    for (int k = 0; k < g.dim; ++k) grad[std::size_t(c)][k] = acc[k] / (pairs * g.spacing[k]);
  }
  return grad;
}

inline std::vector<double> magnitudes(const std::vector<Vec3>& field) {
  std::vector<double> m(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) m[i] = norm(field[i]);
  return m;
}

// ---- dump format ----------------------------------------------------------
// First non-comment line: dim, node counts, extents. Then one node value per
// line in row-major order, 17 significant digits (bit-exact round trip).

inline void write_grid_function(std::ostream& os, const GridFunction& u,
                                const std::vector<std::string>& comments = {}) {
  const Grid& g = *u.grid;
  for (const auto& line : comments) os << "# " << line << "\n";
  char buf[64];
  os << g.dim;
  for (int k = 0; k < g.dim; ++k) os << ' ' << g.shape[k];
  for (int k = 0; k < g.dim; ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", g.extents[k]);
    os << ' ' << buf;
  }
  os << '\n';
  for (long i = 0; i < g.node_count; ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", u[i]);
    os << buf << '\n';
  }
}

inline GridFunction read_grid_function(std::istream& is) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      std::size_t p = line.find_first_not_of(" \t\r");
      if (p == std::string::npos || line[p] == '#') continue;
      return true;
    }
    return false;
  };
  if (!next_line()) throw std::runtime_error("grid dump: missing header line");
  std::istringstream hdr(line);
  int dim = 0;
  if (!(hdr >> dim)) throw std::runtime_error("grid dump: bad header");
  std::vector<long> shape(std::size_t(std::max(dim, 0)));
  std::vector<double> extents(shape.size());
  for (auto& s : shape)
    if (!(hdr >> s)) throw std::runtime_error("grid dump: bad header");
  for (auto& e : extents)
    if (!(hdr >> e)) throw std::runtime_error("grid dump: bad header");
  auto g = build_grid(dim, shape, extents);
  GridFunction u = GridFunction::zeros(g);
  for (long i = 0; i < g->node_count; ++i) {
    if (!next_line()) throw std::runtime_error("grid dump: truncated value list");
    u[i] = std::strtod(line.c_str(), nullptr);
  }
  return u;
}

}  // namespace varexp
