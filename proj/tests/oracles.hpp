#pragma once

// Test-only reference computations, kept independent of the library's own
// quadrature/solver paths.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracles {

/// Dense trapezoid quadrature of |f(x)|^{p(x)} over [0, L].
inline double modular_1d(const std::function<double(double)>& f,
                         const std::function<double(double)>& p, double length, long samples) {
  double s = 0.0;
  const double h = length / double(samples - 1);
  for (long i = 0; i < samples; ++i) {
    const double x = i * h;
    const double w = (i == 0 || i == samples - 1) ? 0.5 * h : h;
    s += w * std::pow(std::fabs(f(x)), p(x));
  }
  return s;
}

/// Classical constant-exponent norm on weighted samples.
inline double lq_norm(const std::vector<double>& values, const std::vector<double>& weights,
                      double q) {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    s += weights[i] * std::pow(std::fabs(values[i]), q);
  return std::pow(s, 1.0 / q);
}

namespace detail {
inline double simpson(const std::function<double(double)>& f, double a, double fa, double b,
                      double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}
inline double adaptive(const std::function<double(double)>& f, double a, double fa, double b,
                       double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, lm, flm);
  const double right = simpson(f, m, fm, b, fb, rm, frm);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

/// Adaptive Simpson quadrature.
inline double integral(const std::function<double(double)>& f, double a, double b,
                       double tol = 1e-11) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  return detail::adaptive(f, a, fa, b, fb, m, fm, detail::simpson(f, a, fa, b, fb, m, fm), tol,
                          48);
}

/// Smallest generalized eigenvalue of (K, M) with K symmetric tridiagonal
/// and M diagonal positive, via inverse power iteration with a Thomas solve.
/// Used as the 1D embedding-constant reference.
inline double smallest_tridiagonal_eigenvalue(const std::vector<double>& diag,
                                              const std::vector<double>& off,
                                              const std::vector<double>& mass,
                                              int iterations = 4000) {
  const std::size_t n = diag.size();
  if (n == 0 || off.size() + 1 != n || mass.size() != n)
    throw std::invalid_argument("tridiagonal oracle: inconsistent sizes");
  std::vector<double> x(n, 1.0), rhs(n), c(n), d(n);
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) rhs[i] = mass[i] * x[i];
    // Thomas algorithm on K y = rhs
    c[0] = n > 1 ? off[0] / diag[0] : 0.0;
    d[0] = rhs[0] / diag[0];
    for (std::size_t i = 1; i < n; ++i) {
      const double denom = diag[i] - off[i - 1] * c[i - 1];
      c[i] = i + 1 < n ? off[i] / denom : 0.0;
      d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / denom;
    }
    for (std::size_t i = n; i-- > 0;) x[i] = d[i] - (i + 1 < n ? c[i] * x[i + 1] : 0.0);
    double nrm = 0.0;
    for (double v : x) nrm += v * v;
    nrm = std::sqrt(nrm);
    for (double& v : x) v /= nrm;
    double kx = 0.0, mx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = diag[i] * x[i];
      if (i > 0) row += off[i - 1] * x[i - 1];
      if (i + 1 < n) row += off[i] * x[i + 1];
      kx += x[i] * row;
      mx += mass[i] * x[i] * x[i];
    }
    lambda = kx / mx;
  }
  return lambda;
}

}  // namespace oracles
