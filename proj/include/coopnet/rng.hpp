#pragma once

#include <cmath>
#include <cstdint>

// Counter-based random streams for the Monte Carlo engine. Every draw is a
// pure function of (seed, realization, entity, slot), so results do not
// depend on evaluation order or thread count.
namespace coopnet::rng {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ (b + kGolden));
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix(mix(a, b), c);
}

// Uniform on (0, 1]; never returns 0 so -log(u) is finite.
inline double u01(std::uint64_t bits) {
  return (double)((bits >> 11) + 1) * 0x1p-53;
}

inline double uniform(std::uint64_t key) { return u01(splitmix64(key)); }

inline double exponential(std::uint64_t key) { return -std::log(uniform(key)); }

// Sequential stream for draws whose count varies (Poisson, positions).
class Stream {
 public:
  explicit Stream(std::uint64_t key) : state_(splitmix64(key)) {}

  std::uint64_t next_bits() {
    state_ += kGolden;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  double next_u01() { return u01(next_bits()); }

  // Knuth for small means, PTRS (Hormann 1993) otherwise.
  std::uint64_t next_poisson(double mean);

 private:
  std::uint64_t state_;
};

inline std::uint64_t Stream::next_poisson(double mean) {
  if (mean <= 0.0) return 0;
  if (mean < 30.0) {
    const double limit = std::exp(-mean);
    double prod = 1.0;
    std::uint64_t k = 0;
    do {
      prod *= next_u01();
      ++k;
    } while (prod > limit);
    return k - 1;
  }
  // Transformed rejection with squeeze.
  const double smu = std::sqrt(mean);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    double u = next_u01() - 0.5;
    double v = next_u01();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return (std::uint64_t)k;
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    const double rhs = -mean + k * std::log(mean) - std::lgamma(k + 1.0);
    if (lhs <= rhs) return (std::uint64_t)k;
  }
}

} // namespace coopnet::rng
