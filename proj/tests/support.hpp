#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "fsi/certificate.hpp"

namespace fsi::test {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  int integer(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  template <class T>
  const T& pick(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(
        integer(0, static_cast<int>(items.size()) - 1))];
  }

  HoelderParams hoelder_params() {
    HoelderParams p;
    p.l0 = log_uniform(0.05, 20.0);
    p.alpha = uniform(0.1, 1.0);
    p.nu = uniform(0.0, 0.9);
    p.eta = log_uniform(1e-3, 2.0);
    return p;
  }

  // Non-decreasing tabulated measure on [0, radius] with values below `top`.
  OmegaMeasure tabulated(double radius, double top) {
    const int n = integer(2, 12);
    std::vector<Knot> knots{{0.0, uniform(0.0, 0.5 * top)}};
    for (int i = 1; i < n; ++i) {
      const double r = i == n - 1 ? radius : radius * i / (n - 1);
      knots.push_back({r, std::min(top, knots.back().value + uniform(0.0, top / n))});
    }
    return OmegaMeasure::tabulated(std::move(knots));
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

struct GridRoots {
  std::optional<double> min_root;
  std::optional<double> max_root;
  double spacing = 0.0;
};

// Brute-force sign scan of f on a uniform grid over [0, radius]: the first and
// last grid cells where f changes sign or touches zero.
inline GridRoots grid_scan(const std::function<double(double)>& f, double radius,
                           int points) {
  GridRoots out;
  out.spacing = radius / (points - 1);
  bool inside = f(0.0) <= 0.0;
  for (int i = 1; i < points; ++i) {
    const double v = i == points - 1 ? radius : out.spacing * i;
    const double cur = f(v);
    if (!inside && cur <= 0.0) {
      if (!out.min_root) out.min_root = v;
      inside = true;
    } else if (inside && cur > 0.0) {
      out.max_root = v;
      inside = false;
    }
  }
  return out;
}

// Quadratic formula for l0 v^2 / 2 - (1 - nu) v + eta = 0.
struct QuadRoots {
  double lo;
  double hi;
};
inline std::optional<QuadRoots> quadratic_roots(double l0, double nu, double eta) {
  const double a = 0.5 * l0;
  const double b = -(1.0 - nu);
  const double disc = b * b - 4.0 * a * eta;
  if (disc < 0.0) return std::nullopt;
  const double s = std::sqrt(disc);
  return QuadRoots{(-b - s) / (2.0 * a), (-b + s) / (2.0 * a)};
}

}  // namespace fsi::test
