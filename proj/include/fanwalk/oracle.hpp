#pragma once

// Brute-force ground truth for tests and instance generation. Nothing here
// goes through the simplex or walk code paths: vertices come from solving
// every n x n row subset with a QR factorization, determinants from exact
// integer elimination.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "fanwalk/combinatorics.hpp"
#include "fanwalk/error.hpp"
#include "fanwalk/geometry.hpp"
#include "fanwalk/lp_model.hpp"
#include "fanwalk/simplex_core.hpp"

namespace fanwalk::oracle {

struct EnumerationResult {
  std::vector<Vertex> vertices;  ///< distinct feasible basic solutions, first basis found for each
  Basis optimal_basis;
  double optimal_value = 0.0;
  bool unique_optimum = false;   ///< exactly one optimal vertex, and it is non-degenerate
};

inline EnumerationResult enumerate_vertices(const NormalizedLP& lp, std::uint64_t budget = 1'000'000) {
  const Index m = lp.rows();
  const Index n = lp.dim();
  if (binomial(m, n) > budget) throw Error(Errc::TooLarge, "vertex enumeration exceeds budget");
  const double feas = 1e-7 * (1.0 + lp.b().cwiseAbs().maxCoeff());

  EnumerationResult out;
  for_each_combination(m, n, [&](const std::vector<Index>& rows) {
    Mat AB(n, n);
    Vec bB(n);
    for (Index k = 0; k < n; ++k) {
      AB.row(k) = lp.A().row(rows[k]);
      bB(k) = lp.b()(rows[k]);
    }
    Eigen::ColPivHouseholderQR<Mat> qr(AB);
    qr.setThreshold(1e-10);
    if (qr.rank() < n) return true;
    const Vec x = qr.solve(bB);
    if ((lp.b() - lp.A() * x).minCoeff() < -feas) return true;
    for (const Vertex& v : out.vertices) {
      if ((v.point - x).norm() <= 1e-7) return true;
    }
    out.vertices.push_back(Vertex{x, Basis(std::vector<Index>(rows))});
    return true;
  });
  if (out.vertices.empty()) return out;

  std::size_t best = 0;
  for (std::size_t i = 1; i < out.vertices.size(); ++i) {
    if (lp.c().dot(out.vertices[i].point) > lp.c().dot(out.vertices[best].point)) best = i;
  }
  out.optimal_value = lp.c().dot(out.vertices[best].point);
  out.optimal_basis = out.vertices[best].basis;
  int ties = 0;
  for (const Vertex& v : out.vertices) {
    if (lp.c().dot(v.point) >= out.optimal_value - 1e-7 * (1.0 + std::abs(out.optimal_value))) ++ties;
  }
  const Vec slack = lp.b() - lp.A() * out.vertices[best].point;
  const auto tight = (slack.array().abs() <= feas).count();
  out.unique_optimum = ties == 1 && tight == n;
  return out;
}

namespace detail {

/// Exact determinant of a small integer matrix (fraction-free Bareiss elimination).
inline std::int64_t bareiss_det(std::vector<std::vector<std::int64_t>> a) {
  const std::size_t k = a.size();
  std::int64_t sign = 1;
  std::int64_t prev = 1;
  for (std::size_t p = 0; p + 1 < k; ++p) {
    if (a[p][p] == 0) {
      std::size_t swap = p + 1;
      while (swap < k && a[swap][p] == 0) ++swap;
      if (swap == k) return 0;
      std::swap(a[p], a[swap]);
      sign = -sign;
    }
    for (std::size_t i = p + 1; i < k; ++i) {
      for (std::size_t j = p + 1; j < k; ++j) {
        const __int128 num = static_cast<__int128>(a[i][j]) * a[p][p] - static_cast<__int128>(a[i][p]) * a[p][j];
        a[i][j] = static_cast<std::int64_t>(num / prev);
      }
      a[i][p] = 0;
    }
    prev = a[p][p];
  }
  return sign * a[k - 1][k - 1];
}

}  // namespace detail

/// max |det| over all square sub-matrices of an integral matrix.
inline std::int64_t max_subdeterminant(const Mat& A_int, std::uint64_t budget = 10'000'000) {
  const Index m = A_int.rows();
  const Index n = A_int.cols();
  std::uint64_t work = 0;
  for (Index k = 1; k <= std::min(m, n); ++k) work += saturating_mul(binomial(m, k), binomial(n, k));
  if (work > budget) throw Error(Errc::TooLarge, "sub-determinant enumeration exceeds budget");
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (std::nearbyint(A_int(i, j)) != A_int(i, j)) throw Error(Errc::NonIntegerEntries, "matrix is not integral");
    }
  }

  std::int64_t best = 0;
  for (Index k = 1; k <= std::min(m, n); ++k) {
    for_each_combination(m, k, [&](const std::vector<Index>& rows) {
      for_each_combination(n, k, [&](const std::vector<Index>& cols) {
        std::vector<std::vector<std::int64_t>> sub(k, std::vector<std::int64_t>(k));
        for (Index r = 0; r < k; ++r) {
          for (Index c = 0; c < k; ++c) sub[r][c] = static_cast<std::int64_t>(A_int(rows[r], cols[c]));
        }
        best = std::max(best, std::abs(detail::bareiss_det(std::move(sub))));
        return true;
      });
      return true;
    });
  }
  return best;
}

struct TailCheck {
  double threshold = 0.0;  ///< alpha delta / 2n, compared against |y|_1
  double empirical = 0.0;
  double bound = 0.0;      ///< n / exp(alpha delta / 2n^2)
  double sigma = 0.0;      ///< binomial standard error at p = min(bound, 1)
  bool ok = false;
};

/// Monte Carlo check of P(|y|_1 >= alpha delta / 2n) <= n exp(-alpha delta / 2n^2)
/// for y with i.i.d. standard Laplace coordinates.
inline TailCheck laplace_tail_check(Index n, double alpha, double delta, std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw Error(Errc::InvalidInput, "need at least one sample");
  const double nd = static_cast<double>(n);
  TailCheck out;
  out.threshold = alpha * delta / (2.0 * nd);
  out.bound = nd * std::exp(-alpha * delta / (2.0 * nd * nd));
  std::mt19937_64 rng(seed);
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    double l1 = 0.0;
    for (Index i = 0; i < n; ++i) {
      // midpoint of a 2^-53 grid cell, in (0, 1)
      const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
      const double y = u < 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u));
      l1 += std::abs(y);
    }
    if (l1 >= out.threshold) ++hits;
  }
  const double N = static_cast<double>(samples);
  out.empirical = static_cast<double>(hits) / N;
  const double p = std::min(out.bound, 1.0);
  out.sigma = std::sqrt(p * (1.0 - p) / N);
  out.ok = out.empirical <= out.bound + 3.0 * out.sigma;
  return out;
}

enum class TuKind { Interval, Network, Box };

inline const char* to_string(TuKind kind) {
  switch (kind) {
    case TuKind::Interval: return "interval";
    case TuKind::Network: return "network";
    case TuKind::Box: return "box";
  }
  return "unknown";
}

namespace detail {

inline std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline Index pick(std::mt19937_64& rng, Index count) {
  return static_cast<Index>(rng() % static_cast<std::uint64_t>(count));
}

inline LinearProgram draw_tu(TuKind kind, Index n, Index m, std::mt19937_64& rng) {
  LinearProgram lp;
  lp.A = Mat::Zero(m, n);
  lp.b = Vec::Zero(m);
  Vec upper = Vec::Ones(n);
  if (kind != TuKind::Box) {
    for (Index i = 0; i < n; ++i) upper(i) = uniform(rng, 1.0, 3.0);
  }
  Vec interior(n);
  for (Index i = 0; i < n; ++i) interior(i) = upper(i) * uniform(rng, 0.2, 0.8);

  // 0 <= x <= upper
  for (Index i = 0; i < n; ++i) {
    lp.A(2 * i, i) = 1.0;
    lp.b(2 * i) = upper(i);
    lp.A(2 * i + 1, i) = -1.0;
    lp.b(2 * i + 1) = 0.0;
  }
  for (Index r = 2 * n; r < m; ++r) {
    Vec row = Vec::Zero(n);
    if (kind == TuKind::Box) {
      const Index axis = pick(rng, n);
      const bool up = rng() % 2 == 0;
      row(axis) = up ? 1.0 : -1.0;
      lp.A.row(r) = row.transpose();
      lp.b(r) = (up ? 1.0 : 0.0) + uniform(rng, 0.25, 2.0);  // redundant padding
      continue;
    }
    if (kind == TuKind::Network && n >= 2) {
      const Index from = pick(rng, n);
      Index to = pick(rng, n - 1);
      if (to >= from) ++to;
      row(from) = 1.0;
      row(to) = -1.0;
    } else {
      const Index len = n >= 2 ? 2 + pick(rng, n - 1) : 1;
      const Index start = pick(rng, n - len + 1);
      const double sign = rng() % 2 == 0 ? 1.0 : -1.0;
      for (Index i = start; i < start + len; ++i) row(i) = sign;
    }
    lp.A.row(r) = row.transpose();
    lp.b(r) = row.dot(interior) + uniform(rng, 0.2, 1.5);
  }
  lp.c = Vec(n);
  for (Index i = 0; i < n; ++i) {
    const double mag = static_cast<double>(1 + pick(rng, 9));
    lp.c(i) = rng() % 2 == 0 ? mag : -mag;
  }
  lp.row_labels = identity_labels(m);
  return lp;
}

}  // namespace detail

/// Integral LP with max sub-determinant 1, a bounded nonempty feasible region
/// (the box rows 0 <= x <= u are always present), no degenerate vertex and a
/// unique optimum for its integer objective. Box instances are the unit cube
/// padded with redundant parallel rows.
inline LinearProgram tu_instance_generator(TuKind kind, Index n, Index m, std::uint64_t seed) {
  const Index max_rows = kind == TuKind::Box ? 64 : 30;
  if (n < 1 || n > 5 || m < 2 * n || m > max_rows) {
    throw Error(Errc::InvalidInput, "generator needs 1 <= n <= 5 and 2n <= m <= " + std::to_string(max_rows));
  }
  const Tolerances tol;
  for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
    std::mt19937_64 rng(detail::mix(seed ^ detail::mix(static_cast<std::uint64_t>(kind) * 1000003ULL + attempt)));
    LinearProgram lp = detail::draw_tu(kind, n, m, rng);
    lp.name = std::string(to_string(kind)) + "-n" + std::to_string(n) + "-m" + std::to_string(m) + "-s" +
              std::to_string(seed);
    const NormalizedLP norm = normalize(lp, tol);
    if (!check_nondegenerate(norm, tol)) continue;
    if (!enumerate_vertices(norm).unique_optimum) continue;
    if (max_subdeterminant(lp.A) != 1) throw Error(Errc::InvalidInput, "generator produced a non-unimodular matrix");
    return lp;
  }
  throw Error(Errc::IterationLimit, "could not draw a non-degenerate instance");
}

/// Applies a random orthonormal change of coordinates x -> Q x to every row
/// and to c. Feasibility, optimality and delta are preserved; integrality is not.
inline LinearProgram rotated_instance(const LinearProgram& lp, std::uint64_t seed) {
  const Index n = lp.dim();
  std::mt19937_64 rng(detail::mix(seed ^ 0x5eedULL));
  std::normal_distribution<double> gauss;
  Mat G(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) G(i, j) = gauss(rng);
  }
  const Mat Q = Eigen::HouseholderQR<Mat>(G).householderQ();
  LinearProgram out = lp;
  out.A = lp.A * Q.transpose();
  out.c = Q * lp.c;
  out.name = "rot-" + lp.name;
  return out;
}

}  // namespace fanwalk::oracle
