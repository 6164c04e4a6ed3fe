#include "sumlab/spaces.hpp"

#include <algorithm>
#include <cmath>

#include "sumlab/kernels.hpp"
#include "sumlab/rng.hpp"

namespace sumlab {

namespace {
constexpr double kTau = 6.283185307179586476925286766559;
}  // namespace

void validate(const SpaceSpec& s) {
  if (s.dim < 1) throw input_error("space dimension must be >= 1");
}

SpaceSpec dual(const SpaceSpec& s) { return {s.dim, s.exponent.conjugate()}; }

double norm(const SpaceSpec& s, const Vec& x) {
  if (static_cast<int>(x.size()) != s.dim) throw input_error("vector/space dimension mismatch");
  const double* a = x.data();
  size_t n = x.size();
  if (s.exponent.is_inf()) return kernels::max_abs(a, n);
  double q = s.exponent.value();
  if (q == 1.0) return kernels::sum_abs(a, n);
  if (q == 2.0) return std::sqrt(kernels::sum_sq(a, n));
  return std::pow(kernels::sum_abs_pow(a, n, q), 1.0 / q);
}

double pairing(const Vec& f, const Vec& x) {
  if (f.size() != x.size()) throw input_error("pairing dimension mismatch");
  return kernels::dot(f.data(), x.data(), f.size());
}

Vec normalize(const SpaceSpec& s, const Vec& v) {
  double nv = norm(s, v);
  if (nv <= 0.0) throw numeric_error("cannot normalize the zero vector");
  Vec out(v);
  for (double& c : out) c /= nv;
  return out;
}

Vec norming_functional(const SpaceSpec& s, const Vec& x) {
  if (static_cast<int>(x.size()) != s.dim) throw input_error("vector/space dimension mismatch");
  Vec f(s.dim, 0.0);
  double nx = norm(s, x);
  if (nx <= 0.0) {
    f[0] = 1.0;
    return f;
  }
  if (s.exponent.is_inf()) {
    int best = 0;
    for (int j = 1; j < s.dim; ++j)
      if (std::fabs(x[j]) > std::fabs(x[best])) best = j;
    f[best] = x[best] >= 0 ? 1.0 : -1.0;
    return f;
  }
  double q = s.exponent.value();
  if (q == 1.0) {
    for (int j = 0; j < s.dim; ++j) f[j] = x[j] > 0 ? 1.0 : (x[j] < 0 ? -1.0 : 0.0);
    return f;
  }
  // f_j = sign(x_j) |x_j|^(q-1) / ||x||^(q-1): unit in l_{q*}, attains ||x||.
  for (int j = 0; j < s.dim; ++j) {
    double m = std::pow(std::fabs(x[j]) / nx, q - 1.0);
    f[j] = x[j] >= 0 ? m : -m;
  }
  return f;
}

namespace {

Vec sphere_point_from_rng(const SpaceSpec& s, Rng& rng) {
  Vec v(s.dim);
  for (;;) {
    for (double& c : v) c = rng.gaussian();
    double nv = norm(s, v);
    if (nv > 1e-8) {
      for (double& c : v) c /= nv;
      return v;
    }
  }
}

}  // namespace

BallSample ball_points(const SpaceSpec& s, int budget, uint64_t seed) {
  validate(s);
  if (budget < 2 * s.dim) throw input_error("ball_points budget must be >= 2*dim");
  BallSample out;
  out.space = s;
  if (s.exponent.is_one()) {
    // Extreme points of the l1 ball: signed basis vectors.
    for (int j = 0; j < s.dim; ++j) {
      Vec v(s.dim, 0.0);
      v[j] = 1.0;
      out.points.push_back(v);
      v[j] = -1.0;
      out.points.push_back(v);
    }
    out.kind = SampleKind::exact_extreme_points;
    return out;
  }
  if (s.exponent.is_inf()) {
    if (s.dim <= 20 && budget >= (1 << s.dim)) {
      for (uint64_t mask = 0; mask < (1ull << s.dim); ++mask) {
        Vec v(s.dim);
        for (int j = 0; j < s.dim; ++j) v[j] = (mask >> j) & 1 ? -1.0 : 1.0;
        out.points.push_back(v);
      }
      out.kind = SampleKind::exact_extreme_points;
      return out;
    }
    Rng rng(mix_seed(seed, 0x5a11));
    for (int i = 0; i < budget; ++i) {
      Vec v(s.dim);
      for (int j = 0; j < s.dim; ++j) v[j] = rng.bits() & 1 ? 1.0 : -1.0;
      out.points.push_back(v);
    }
    return out;
  }
  if (s.dim == 2 && !s.exponent.is_inf() && s.exponent.value() == 2.0) {
    for (int k = 0; k < budget; ++k) {
      double a = kTau * k / budget;
      out.points.push_back({std::cos(a), std::sin(a)});
    }
    return out;
  }
  Rng rng(mix_seed(seed, 0xba11));
  for (int i = 0; i < budget; ++i) out.points.push_back(sphere_point_from_rng(s, rng));
  return out;
}

std::vector<Vec> sphere_grid(const SpaceSpec& s, int resolution) {
  validate(s);
  if (resolution < 2) throw input_error("sphere_grid resolution must be >= 2");
  std::vector<Vec> grid;
  if (s.dim == 1) {
    grid.push_back({1.0});
    grid.push_back({-1.0});
    return grid;
  }
  if (s.dim == 2) {
    grid.reserve(resolution);
    for (int k = 0; k < resolution; ++k) {
      double a = kTau * k / resolution;
      Vec v{std::cos(a), std::sin(a)};
      grid.push_back(normalize(s, v));
    }
    return grid;
  }
  if (s.dim == 3) {
    // Fibonacci sphere with resolution^2 points.
    int n = resolution * resolution;
    grid.reserve(n);
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    for (int k = 0; k < n; ++k) {
      double z = 1.0 - (2.0 * k + 1.0) / n;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double a = kTau * k / golden;
      Vec v{r * std::cos(a), r * std::sin(a), z};
      grid.push_back(normalize(s, v));
    }
    return grid;
  }
  throw input_error("sphere_grid supports dims 1..3");
}

double grid_covering_estimate(const SpaceSpec& s, int resolution) {
  validate(s);
  if (s.dim == 1) return 0.0;
  if (s.dim == 2) {
    // Exact scan of adjacent gaps; a sphere point between two neighbors is
    // within roughly one gap of the nearer one.
    auto grid = sphere_grid(s, resolution);
    double worst = 0.0;
    Vec d(2);
    for (size_t k = 0; k < grid.size(); ++k) {
      const Vec& a = grid[k];
      const Vec& b = grid[(k + 1) % grid.size()];
      d[0] = a[0] - b[0];
      d[1] = a[1] - b[1];
      worst = std::max(worst, norm(s, d));
    }
    return worst;
  }
  // dim 3: Fibonacci covering radius scales like c / sqrt(N) = c / resolution
  // in l2; convert to the target norm with the usual equivalence factor and
  // pad for the renormalization distortion.
  double c = 3.5 / resolution;
  double factor = 1.0;
  if (!s.exponent.is_inf() && s.exponent.value() < 2.0)
    factor = std::pow(3.0, 1.0 / s.exponent.value() - 0.5);
  return 1.5 * c * factor;
}

}  // namespace sumlab
