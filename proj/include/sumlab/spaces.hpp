#pragma once
// Finite-dimensional sequence spaces l_q^n and the duality machinery the
// rest of the library is built on: norms, pairings, norming functionals,
// extreme-point / sphere samples, and deterministic sphere grids for the
// certification sweeps.
#include <cstdint>
#include <vector>

#include "sumlab/exponent.hpp"

namespace sumlab {

using Vec = std::vector<double>;

struct SpaceSpec {
  int dim = 1;
  Exponent exponent;  // q in [1, inf]
};

inline bool same_space(const SpaceSpec& a, const SpaceSpec& b) {
  return a.dim == b.dim && a.exponent.same(b.exponent);
}

void validate(const SpaceSpec& s);

// Dual space: same dim, conjugate exponent.
SpaceSpec dual(const SpaceSpec& s);

double norm(const SpaceSpec& s, const Vec& x);

// <f, x> for f in the dual; pure coordinate pairing.
double pairing(const Vec& f, const Vec& x);

// v / norm(v); zero input throws numeric_error.
Vec normalize(const SpaceSpec& s, const Vec& v);

// Unit functional f in dual(s) with f(x) = norm(x).  For x = 0 returns the
// first coordinate functional.
Vec norming_functional(const SpaceSpec& s, const Vec& x);

enum class SampleKind { exact_extreme_points, heuristic_sample };

struct BallSample {
  SpaceSpec space;
  std::vector<Vec> points;
  SampleKind kind = SampleKind::heuristic_sample;
};

// Points from the unit ball whose convex hull approximates it.  Exact cases:
// exponent 1 (the 2*dim signed basis vectors), exponent inf with dim <= 20
// and budget >= 2^dim (all sign vectors).  Exponent 2 with dim 2 yields
// `budget` equally spaced angles; anything else is a seeded deterministic
// sphere sample.  Requires budget >= 2*dim.
BallSample ball_points(const SpaceSpec& s, int budget, uint64_t seed);

// Deterministic unit-sphere grid for dims 1..3: signs for dim 1, equally
// spaced angles for dim 2 (resolution points), a Fibonacci sphere with
// resolution^2 points for dim 3; each point renormalized to the q-sphere.
std::vector<Vec> sphere_grid(const SpaceSpec& s, int resolution);

// Estimated covering radius (in the norm of s) of sphere_grid(s, resolution).
// O(1/resolution); used to rescale grid-restricted optima into certified
// bounds, not as a proof.
double grid_covering_estimate(const SpaceSpec& s, int resolution);

}  // namespace sumlab
