#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace dialshape {

/// Deterministic random stream. Wraps std::mt19937_64 (whose raw output
/// sequence is fixed by the standard) and provides its own distribution
/// code, so draws are bit-reproducible across platforms and library
/// versions given the same seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Derives an independent seed from a base seed and a stream id
  /// (splitmix64 finalizer). Used to fan out workers without sharing state.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n). n must be > 0.
  std::size_t uniform_index(std::size_t n) {
    // Rejection sampling on the top bits; bias-free and portable.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
  }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Standard normal via Box-Muller (no cached spare, so the stream
  /// position is a simple function of the draw count).
  double normal() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  /// Beta(a, b) for small integer shape parameters, sampled as the a-th
  /// smallest of a+b-1 uniforms.
  double beta_int(int a, int b) {
    const int n = a + b - 1;
    std::vector<double> u(static_cast<std::size_t>(n));
    for (auto& v : u) v = uniform01();
    std::sort(u.begin(), u.end());
    return u[static_cast<std::size_t>(a - 1)];
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    // Fisher-Yates with our own index draws (std::shuffle is
    // implementation-defined).
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[uniform_index(i)]);
    }
  }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[uniform_index(v.size())];
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dialshape
