#pragma once
// Deterministic randomness.  Every stochastic routine takes an explicit
// 64-bit seed and derives child seeds with mix_seed, so results are
// reproducible run-to-run and across platforms.  Distribution transforms
// are hand-rolled on top of mt19937_64 output because the standard
// library's <random> distributions are not byte-portable.
#include <cmath>
#include <cstdint>
#include <random>

namespace sumlab {

// splitmix64 finalizer; good enough to decorrelate salted child seeds.
inline uint64_t mix_seed(uint64_t seed, uint64_t salt_a, uint64_t salt_b = 0) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt_a + 1) + 0x85ebca6bc2b2ae63ull * (salt_b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t bits() { return eng_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double unit() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // Box-Muller; the spare is cached so consecutive draws cost one transform.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = unit(), u2 = unit();
    double r = std::sqrt(-2.0 * std::log1p(-u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Uniform integer in [0, n); n > 0.  Rejection-free modulo is fine here,
  // the bias at these n is far below anything we measure.
  uint64_t below(uint64_t n) { return bits() % n; }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sumlab
