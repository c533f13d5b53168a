#pragma once

#include <cmath>
#include <random>

#include "fanwalk/fanwalk.hpp"

namespace fanwalk::testing {

inline LinearProgram make_lp(Mat A, Vec b, Vec c, std::string name = "test") {
  LinearProgram lp;
  lp.name = std::move(name);
  lp.row_labels = identity_labels(A.rows());
  lp.A = std::move(A);
  lp.b = std::move(b);
  lp.c = std::move(c);
  return lp;
}

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

/// Rows e1, e2, -e1, -e2 with b = (1, 1, 0, 0).
inline LinearProgram unit_square(Vec c = vec({1, 1})) {
  Mat A(4, 2);
  A << 1, 0, 0, 1, -1, 0, 0, -1;
  return make_lp(A, vec({1, 1, 0, 0}), std::move(c), "unit-square");
}

/// x >= 0, y >= 0, x + y <= 1 in that row order.
inline LinearProgram triangle(Vec c = vec({0, 1})) {
  Mat A(3, 2);
  A << -1, 0, 0, -1, 1, 1;
  return make_lp(A, vec({0, 0, 1}), std::move(c), "triangle");
}

/// Unit cube in dimension n: rows e_i (b=1) then -e_i (b=0).
inline LinearProgram cube(Index n, Vec c) {
  Mat A = Mat::Zero(2 * n, n);
  Vec b = Vec::Zero(2 * n);
  for (Index i = 0; i < n; ++i) {
    A(i, i) = 1.0;
    b(i) = 1.0;
    A(n + i, i) = -1.0;
  }
  return make_lp(A, b, std::move(c), "cube");
}

inline Vec random_unit(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> g;
  Vec v(n);
  for (Index i = 0; i < n; ++i) v(i) = g(rng);
  return v / v.norm();
}

// The unit square's fan is the four quadrants, each cut into 1/4-squares, so
// the walk is a lazy Metropolis walk on the integer grid. Cell (i, j) has
// center ((i + 1/2)/4, (j + 1/2)/4); negative i lies in the cone of -e_1.
struct GridWalk {
  double alpha;
  double cx, cy;
  std::int64_t i = -1, j = -1;  // cell touching the apex of the cone of the vertex (0,0)

  double logw(std::int64_t a, std::int64_t b) const {
    return -std::abs((a + 0.5) / 4.0 - alpha * cx) - std::abs((b + 0.5) / 4.0 - alpha * cy);
  }
  bool optimal() const { return i >= 0 && j >= 0; }

  // Reproduces the library's draw order: direction from rng() % 4 over the
  // sorted basis rows (e1=0, e2=1, -e1=2, -e2=3), then one uniform.
  void step(Rng& rng) {
    const std::uint64_t pick = rng() % 4;
    const int sign = pick % 2 == 0 ? 1 : -1;
    const int xrow = i >= 0 ? 0 : 2;
    const int yrow = j >= 0 ? 1 : 3;
    const bool x_first = xrow < yrow;
    const bool along_x = (pick / 2 == 0) == x_first;
    std::int64_t ni = i, nj = j;
    if (along_x) {
      ni += (i >= 0 ? 1 : -1) * sign;
    } else {
      nj += (j >= 0 ? 1 : -1) * sign;
    }
    const double u = uniform01(rng);
    if (u >= 0.5) return;
    if (std::log(2.0 * u) < std::min(0.0, logw(ni, nj) - logw(i, j))) {
      i = ni;
      j = nj;
    }
  }
};

struct GridOutcome {
  bool stopped;
  std::uint64_t steps;
  double zx, zy;
};

inline GridOutcome grid_walk(std::uint64_t seed, std::uint64_t steps, double alpha) {
  GridWalk g{alpha, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
  Rng rng(seed);
  std::uint64_t t = 0;
  for (; t < steps && !g.optimal(); ++t) g.step(rng);
  return {g.optimal(), t, (g.i + 0.5) / 4.0, (g.j + 0.5) / 4.0};
}

}  // namespace fanwalk::testing
