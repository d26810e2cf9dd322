#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>

namespace varexp {

/// Deterministic random source. All value mappings are done by hand on the
/// raw 64-bit stream so that identical seeds give bit-identical sequences
/// independently of the standard library in use.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Derive an independent stream for worker `index` of a chunked job.
  static Rng split(std::uint64_t seed, std::uint64_t index) {
    // SplitMix64 finalizer mixes seed and index into a fresh seed.
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return Rng(z ^ (z >> 31));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Log-uniform in [lo, hi], lo > 0.
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  long uniform_index(long n) { return long(next_u64() % std::uint64_t(n)); }

  /// Standard normal via Box-Muller.
  double normal() {
    double u1 = uniform01(), u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  /// Uniform direction on the unit sphere of the first `dim` components;
  /// trailing components are zero.
  std::array<double, 3> unit_vector(int dim) {
    std::array<double, 3> v{0.0, 0.0, 0.0};
    double n = 0.0;
    do {
      for (int k = 0; k < dim; ++k) v[k] = normal();
      n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    } while (n < 1e-12);
    for (int k = 0; k < dim; ++k) v[k] /= n;
    return v;
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace varexp
